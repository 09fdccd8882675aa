#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "imedub/bandit.hpp"
#include "imedub/expfam.hpp"
#include "imedub/graph.hpp"

namespace imedub {

/// Inequalities that every IMED-UB decision satisfies by construction.
///   LB1          log N_chosen <= N_a KL(mu_a, mu*) + log N_a   for a in V_leader
///   LB2          N_chosen <= N_leader
///   UB           N_chosen KL(mu_chosen, mu*) <= log t
///   MEMBERSHIP   chosen in {leader} + V_leader
///   INDEX-FLOOR  I_leader = log N_leader
enum class Inequality { Lb1, Lb2, Ub, Membership, IndexFloor };

std::string_view to_string(Inequality id);

struct Violation {
    std::string run_id;
    std::uint64_t time{0};
    Inequality inequality{Inequality::Lb1};
    double lhs{0.0};
    double rhs{0.0};
    /// Arm the inequality was evaluated for (LB1 only; otherwise the chosen arm).
    ArmIndex arm{0};
};

inline constexpr double kCheckTolerance = 1e-9;

/// Checks one decision record against the graph. Pure. Throws InputError on
/// a malformed record (missing snapshots, zero counts, t < arm count, ...).
std::vector<Violation> check_step(const StepRecord& record, const UnimodalGraph& graph, const Family& family,
                                  std::string_view run_id = {});

/// One violation as a single structured line (JSON object).
std::string format_violation(const Violation& violation);

}  // namespace imedub
