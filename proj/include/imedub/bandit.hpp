#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imedub/expfam.hpp"
#include "imedub/graph.hpp"
#include "imedub/random.hpp"

namespace imedub {

/// True configuration: reward family, per-arm means and the unimodal graph.
/// The constructor enforces domain membership and unimodality.
class BanditConfig {
public:
    BanditConfig(Family family, std::vector<double> means, UnimodalGraph graph);

    const Family& family() const noexcept { return family_; }
    const std::vector<double>& means() const noexcept { return means_; }
    const UnimodalGraph& graph() const noexcept { return graph_; }
    std::size_t arm_count() const noexcept { return means_.size(); }

    ArmIndex optimal_arm() const noexcept { return optimal_arm_; }
    double optimal_mean() const noexcept { return means_[optimal_arm_]; }
    double gap(ArmIndex arm) const;
    const std::vector<double>& gaps() const noexcept { return gaps_; }

private:
    Family family_;
    std::vector<double> means_;
    UnimodalGraph graph_;
    ArmIndex optimal_arm_{0};
    std::vector<double> gaps_;
};

/// Sufficient statistics: N_a(t), reward sums and the step counter t.
/// Empirical means are derived on demand (0 for unpulled arms).
class PullStats {
public:
    explicit PullStats(std::size_t arm_count);
    PullStats(std::vector<std::uint64_t> counts, std::vector<double> sums);

    std::size_t arm_count() const noexcept { return counts_.size(); }
    std::uint64_t count(ArmIndex arm) const { return counts_.at(arm); }
    double sum(ArmIndex arm) const { return sums_.at(arm); }
    double mean(ArmIndex arm) const;
    std::uint64_t time() const noexcept { return time_; }

    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::span<const double> sums() const noexcept { return sums_; }

    bool all_pulled() const noexcept;

    /// max_a mean(a).
    double best_mean() const;

    void record(ArmIndex arm, double reward);

private:
    std::vector<std::uint64_t> counts_;
    std::vector<double> sums_;
    std::uint64_t time_{0};
};

/// argmax of the empirical means (exact comparison), ascending. Throws
/// StateError if some arm has never been pulled.
std::vector<ArmIndex> empirical_best_set(const PullStats& stats);

/// Among empirical-best arms, one with fewest pulls; ties to the lowest index.
ArmIndex leader(const PullStats& stats);

/// Per-arm snapshot of the statistics at decision time.
struct ArmSnapshot {
    ArmIndex arm{0};
    std::uint64_t count{0};
    double mean{0.0};
};

/// One decision of a leader-based policy, as consumed by the invariant
/// checker. All statistics are taken before the chosen arm is pulled.
struct StepRecord {
    std::uint64_t time{0};
    ArmIndex chosen{0};
    ArmIndex leader{0};
    double best_mean{0.0};
    std::vector<ArmIndex> candidates;
    std::vector<double> index_values;  // parallel to candidates
    std::vector<ArmSnapshot> arms;     // candidates, leader and chosen arm, sorted by arm

    const ArmSnapshot* snapshot(ArmIndex arm) const;
};

/// Simulation environment for one run: serves rewards and keeps the
/// statistics plus regret accounting.
class Environment {
public:
    explicit Environment(const BanditConfig& config);

    const BanditConfig& config() const noexcept { return *config_; }
    const PullStats& stats() const noexcept { return stats_; }

    /// Draws a reward from arm `arm`, updates statistics and regret.
    double step(ArmIndex arm, RandomStream& rng);

    /// sum_a gap_a N_a(t), evaluated over arms in index order.
    double pseudo_regret() const;

    /// sum_t (mu* - X_t).
    double reward_regret() const noexcept { return reward_regret_; }

private:
    const BanditConfig* config_;
    PullStats stats_;
    double reward_regret_{0.0};
};

}  // namespace imedub
