#include "imedub/bandit.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "imedub/errors.hpp"

namespace imedub {

BanditConfig::BanditConfig(Family family, std::vector<double> means, UnimodalGraph graph)
    : family_(family), means_(std::move(means)), graph_(std::move(graph)) {
    if (means_.size() != graph_.arm_count()) {
        throw ParameterError("config has " + std::to_string(means_.size()) + " means for " +
                             std::to_string(graph_.arm_count()) + " arms");
    }
    for (ArmIndex a = 0; a < means_.size(); ++a) {
        if (!expfam::in_domain(family_, means_[a])) {
            throw ParameterError("mean of arm " + std::to_string(a) + " outside the domain of " + describe(family_));
        }
    }
    const auto report = graph_.validate_unimodal(means_);
    if (!report) throw ParameterError("configuration is not unimodal: " + report.message);

    optimal_arm_ = static_cast<ArmIndex>(std::max_element(means_.begin(), means_.end()) - means_.begin());
    gaps_.reserve(means_.size());
    for (double m : means_) gaps_.push_back(optimal_mean() - m);
}

double BanditConfig::gap(ArmIndex arm) const {
    if (arm >= gaps_.size()) throw ParameterError("arm index " + std::to_string(arm) + " out of range");
    return gaps_[arm];
}

PullStats::PullStats(std::size_t arm_count) : counts_(arm_count, 0), sums_(arm_count, 0.0) {}

PullStats::PullStats(std::vector<std::uint64_t> counts, std::vector<double> sums)
    : counts_(std::move(counts)), sums_(std::move(sums)) {
    if (counts_.size() != sums_.size()) throw ParameterError("counts and sums differ in length");
    for (auto n : counts_) time_ += n;
}

double PullStats::mean(ArmIndex arm) const {
    const auto n = counts_.at(arm);
    return n == 0 ? 0.0 : sums_[arm] / static_cast<double>(n);
}

bool PullStats::all_pulled() const noexcept {
    return std::all_of(counts_.begin(), counts_.end(), [](auto n) { return n > 0; });
}

double PullStats::best_mean() const {
    double best = -std::numeric_limits<double>::infinity();
    for (ArmIndex a = 0; a < arm_count(); ++a) best = std::max(best, mean(a));
    return best;
}

void PullStats::record(ArmIndex arm, double reward) {
    if (arm >= arm_count()) throw ParameterError("arm index " + std::to_string(arm) + " out of range");
    counts_[arm] += 1;
    sums_[arm] += reward;
    time_ += 1;
}

std::vector<ArmIndex> empirical_best_set(const PullStats& stats) {
    if (!stats.all_pulled()) throw StateError("empirical best set requires every arm to be pulled once");
    const double best = stats.best_mean();
    std::vector<ArmIndex> out;
    for (ArmIndex a = 0; a < stats.arm_count(); ++a) {
        if (stats.mean(a) == best) out.push_back(a);
    }
    return out;
}

ArmIndex leader(const PullStats& stats) {
    if (!stats.all_pulled()) throw StateError("leader requires every arm to be pulled once");
    const double best = stats.best_mean();
    ArmIndex chosen = 0;
    std::uint64_t fewest = std::numeric_limits<std::uint64_t>::max();
    for (ArmIndex a = 0; a < stats.arm_count(); ++a) {
        if (stats.mean(a) == best && stats.count(a) < fewest) {
            chosen = a;
            fewest = stats.count(a);
        }
    }
    return chosen;
}

const ArmSnapshot* StepRecord::snapshot(ArmIndex arm) const {
    auto it = std::lower_bound(arms.begin(), arms.end(), arm,
                               [](const ArmSnapshot& s, ArmIndex a) { return s.arm < a; });
    return (it != arms.end() && it->arm == arm) ? &*it : nullptr;
}

Environment::Environment(const BanditConfig& config) : config_(&config), stats_(config.arm_count()) {}

double Environment::step(ArmIndex arm, RandomStream& rng) {
    if (arm >= config_->arm_count()) throw ParameterError("arm index " + std::to_string(arm) + " out of range");
    const double reward = expfam::sample(config_->family(), config_->means()[arm], rng);
    stats_.record(arm, reward);
    reward_regret_ += config_->optimal_mean() - reward;
    return reward;
}

double Environment::pseudo_regret() const {
    double total = 0.0;
    for (ArmIndex a = 0; a < stats_.arm_count(); ++a) {
        total += config_->gaps()[a] * static_cast<double>(stats_.count(a));
    }
    return total;
}

}  // namespace imedub
