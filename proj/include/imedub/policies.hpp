#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imedub/bandit.hpp"
#include "imedub/expfam.hpp"
#include "imedub/graph.hpp"
#include "imedub/random.hpp"

namespace imedub {

enum class PolicyKind { ImedUb, Imed, Osub, Uts };

std::string_view to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(std::string_view name);

struct OsubParams {
    /// Leader-exploitation period; defaults to the graph's max degree.
    std::optional<std::uint64_t> gamma;
    /// Weight of the log log term in the KL-UCB budget.
    double c{0.0};
};

struct UtsParams {
    double leader_probability{0.5};
};

struct PolicySpec {
    PolicyKind kind{PolicyKind::ImedUb};
    OsubParams osub{};
    UtsParams uts{};

    std::string name() const { return std::string(to_string(kind)); }
};

/// I_a(t) = N_a(t) KL(mu_a(t), mu*(t)) + log N_a(t). The divergence term is
/// zero when mu_a(t) >= mu*(t). Throws StateError if `arm` was never pulled.
double imed_index(const PullStats& stats, const Family& family, ArmIndex arm);

/// Full IMED-UB decision: leader, candidate set {leader} + V_leader in arm
/// order, their indexes and the argmin (lowest arm on ties).
StepRecord imedub_decide(const PullStats& stats, const UnimodalGraph& graph, const Family& family);

ArmIndex imedub_select(const PullStats& stats, const UnimodalGraph& graph, const Family& family);

/// Unstructured IMED: argmin of the index over all arms.
ArmIndex imed_select(const PullStats& stats, const Family& family);

/// IMED decision recorded in the same shape as imedub_decide (leader chosen
/// by the IMED-UB rule, every arm a candidate).
StepRecord imed_decide(const PullStats& stats, const Family& family);

/// OSUB step. `leader_rounds[a]` counts the rounds in which arm a was the
/// leader and is incremented for the current leader. γ falls back to the
/// graph's max degree when unset.
ArmIndex osub_select(const PullStats& stats, const UnimodalGraph& graph, const Family& family,
                     std::span<std::uint64_t> leader_rounds, const OsubParams& params);

/// UTS step: leader with probability `leader_probability`, otherwise the
/// argmax of one posterior sample per arm in {leader} + V_leader.
ArmIndex uts_select(const PullStats& stats, const UnimodalGraph& graph, const Family& family, RandomStream& rng,
                    const UtsParams& params = {});

/// One draw of an arm's mean from its conjugate posterior.
double posterior_sample(const PullStats& stats, const Family& family, ArmIndex arm, RandomStream& rng);

/// Per-run policy state behind one interface. Not shared across runs.
class Policy {
public:
    virtual ~Policy() = default;

    virtual ArmIndex select(const PullStats& stats, RandomStream& rng) = 0;

    /// Decision record for policies that have one (IMED-UB, IMED).
    virtual std::optional<StepRecord> decide(const PullStats& stats, RandomStream& rng);

    virtual std::string_view name() const = 0;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const UnimodalGraph& graph, const Family& family);

}  // namespace imedub
