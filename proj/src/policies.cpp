#include "imedub/policies.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "imedub/errors.hpp"

namespace imedub {

namespace {

void require_initialised(const PullStats& stats, const char* who) {
    if (!stats.all_pulled()) {
        throw StateError(std::string(who) + ": forced initialisation incomplete (some arm never pulled)");
    }
}

// Leader for OSUB and UTS: argmax of the empirical means, lowest index.
ArmIndex argmax_mean(const PullStats& stats) {
    ArmIndex best = 0;
    for (ArmIndex a = 1; a < stats.arm_count(); ++a) {
        if (stats.mean(a) > stats.mean(best)) best = a;
    }
    return best;
}

// {leader} + neighbors(leader), ascending.
std::vector<ArmIndex> neighbourhood(const UnimodalGraph& graph, ArmIndex center) {
    std::vector<ArmIndex> out;
    const auto adj = graph.neighbors(center);
    out.reserve(adj.size() + 1);
    bool inserted = false;
    for (ArmIndex a : adj) {
        if (!inserted && center < a) {
            out.push_back(center);
            inserted = true;
        }
        out.push_back(a);
    }
    if (!inserted) out.push_back(center);
    return out;
}

double index_with_best(const PullStats& stats, const Family& family, ArmIndex arm, double best) {
    const auto n = stats.count(arm);
    const double mean = stats.mean(arm);
    const double log_n = std::log(static_cast<double>(n));
    if (mean >= best) return log_n;
    const double divergence = expfam::kl(family, mean, best);
    // n >= 1, so the 0 * inf convention never triggers here.
    return static_cast<double>(n) * divergence + log_n;
}

StepRecord make_record(const PullStats& stats, const Family& family, ArmIndex lead,
                       std::vector<ArmIndex> candidates) {
    StepRecord rec;
    rec.time = stats.time();
    rec.leader = lead;
    rec.best_mean = stats.best_mean();
    rec.candidates = std::move(candidates);
    rec.index_values.reserve(rec.candidates.size());

    double lowest = std::numeric_limits<double>::infinity();
    bool first = true;
    for (ArmIndex a : rec.candidates) {
        const double value = index_with_best(stats, family, a, rec.best_mean);
        rec.index_values.push_back(value);
        if (first || value < lowest) {
            lowest = value;
            rec.chosen = a;
            first = false;
        }
    }

    // Candidates are ascending and contain the leader.
    rec.arms.reserve(rec.candidates.size());
    for (ArmIndex a : rec.candidates) rec.arms.push_back({a, stats.count(a), stats.mean(a)});
    return rec;
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::ImedUb: return "imed-ub";
        case PolicyKind::Imed: return "imed";
        case PolicyKind::Osub: return "osub";
        case PolicyKind::Uts: return "uts";
    }
    return "unknown";
}

PolicyKind policy_kind_from_string(std::string_view name) {
    if (name == "imed-ub") return PolicyKind::ImedUb;
    if (name == "imed") return PolicyKind::Imed;
    if (name == "osub") return PolicyKind::Osub;
    if (name == "uts") return PolicyKind::Uts;
    throw ParameterError("unknown policy '" + std::string(name) + "'");
}

double imed_index(const PullStats& stats, const Family& family, ArmIndex arm) {
    if (arm >= stats.arm_count()) throw ParameterError("arm index " + std::to_string(arm) + " out of range");
    if (stats.count(arm) == 0) throw StateError("imed_index: arm " + std::to_string(arm) + " never pulled");
    return index_with_best(stats, family, arm, stats.best_mean());
}

StepRecord imedub_decide(const PullStats& stats, const UnimodalGraph& graph, const Family& family) {
    require_initialised(stats, "imed-ub");
    if (graph.arm_count() != stats.arm_count()) throw ParameterError("graph and statistics disagree on arm count");
    const ArmIndex lead = leader(stats);
    return make_record(stats, family, lead, neighbourhood(graph, lead));
}

ArmIndex imedub_select(const PullStats& stats, const UnimodalGraph& graph, const Family& family) {
    require_initialised(stats, "imed-ub");
    if (graph.arm_count() != stats.arm_count()) throw ParameterError("graph and statistics disagree on arm count");
    const ArmIndex lead = leader(stats);
    const double best = stats.best_mean();

    // Same ascending scan and strict comparison as make_record.
    const auto adj = graph.neighbors(lead);
    ArmIndex chosen = 0;
    double lowest = std::numeric_limits<double>::infinity();
    bool first = true;
    auto visit = [&](ArmIndex a) {
        const double value = index_with_best(stats, family, a, best);
        if (first || value < lowest) {
            lowest = value;
            chosen = a;
            first = false;
        }
    };
    bool leader_done = false;
    for (ArmIndex a : adj) {
        if (!leader_done && lead < a) {
            visit(lead);
            leader_done = true;
        }
        visit(a);
    }
    if (!leader_done) visit(lead);
    return chosen;
}

ArmIndex imed_select(const PullStats& stats, const Family& family) {
    require_initialised(stats, "imed");
    const double best = stats.best_mean();
    ArmIndex chosen = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (ArmIndex a = 0; a < stats.arm_count(); ++a) {
        const double value = index_with_best(stats, family, a, best);
        if (a == 0 || value < lowest) {
            lowest = value;
            chosen = a;
        }
    }
    return chosen;
}

StepRecord imed_decide(const PullStats& stats, const Family& family) {
    require_initialised(stats, "imed");
    std::vector<ArmIndex> all(stats.arm_count());
    for (ArmIndex a = 0; a < all.size(); ++a) all[a] = a;
    return make_record(stats, family, leader(stats), std::move(all));
}

ArmIndex osub_select(const PullStats& stats, const UnimodalGraph& graph, const Family& family,
                     std::span<std::uint64_t> leader_rounds, const OsubParams& params) {
    require_initialised(stats, "osub");
    if (leader_rounds.size() != stats.arm_count()) throw ParameterError("osub: leader counter size mismatch");

    const ArmIndex lead = argmax_mean(stats);
    const std::uint64_t rounds = ++leader_rounds[lead];
    const std::uint64_t gamma = params.gamma.value_or(graph.max_degree());
    if ((rounds - 1) % (gamma + 1) == 0) return lead;

    const double l = static_cast<double>(rounds);
    const double exploration = std::log(l) + params.c * std::log(std::log(std::max(l, std::numbers::e)));

    ArmIndex chosen = lead;
    double highest = -std::numeric_limits<double>::infinity();
    for (ArmIndex a : neighbourhood(graph, lead)) {
        const double budget = std::max(exploration, 0.0) / static_cast<double>(stats.count(a));
        const double ucb = expfam::kl_upper_inverse(family, stats.mean(a), budget);
        if (ucb > highest) {
            highest = ucb;
            chosen = a;
        }
    }
    return chosen;
}

double posterior_sample(const PullStats& stats, const Family& family, ArmIndex arm, RandomStream& rng) {
    const auto n = static_cast<double>(stats.count(arm));
    const double total = stats.sum(arm);
    auto& engine = rng.engine();
    switch (family.kind) {
        case FamilyKind::Bernoulli: {
            const double successes = total;
            const double failures = n - total;
            const double x = std::gamma_distribution<double>(1.0 + successes, 1.0)(engine);
            const double y = std::gamma_distribution<double>(1.0 + failures, 1.0)(engine);
            return x / (x + y);
        }
        case FamilyKind::Gaussian:
            return std::normal_distribution<double>(stats.mean(arm), std::sqrt(family.variance / n))(engine);
        case FamilyKind::Exponential: {
            // Gamma(1 + n, rate 1 + sum) posterior on the rate; the mean is its inverse.
            const double rate = std::gamma_distribution<double>(1.0 + n, 1.0 / (1.0 + total))(engine);
            return 1.0 / rate;
        }
    }
    return 0.0;
}

ArmIndex uts_select(const PullStats& stats, const UnimodalGraph& graph, const Family& family, RandomStream& rng,
                    const UtsParams& params) {
    require_initialised(stats, "uts");
    const ArmIndex lead = argmax_mean(stats);
    if (rng.uniform() < params.leader_probability) return lead;

    ArmIndex chosen = lead;
    double highest = -std::numeric_limits<double>::infinity();
    for (ArmIndex a : neighbourhood(graph, lead)) {
        const double theta = posterior_sample(stats, family, a, rng);
        if (theta > highest) {
            highest = theta;
            chosen = a;
        }
    }
    return chosen;
}

std::optional<StepRecord> Policy::decide(const PullStats&, RandomStream&) { return std::nullopt; }

namespace {

class ImedUbPolicy final : public Policy {
public:
    ImedUbPolicy(const UnimodalGraph& graph, Family family) : graph_(&graph), family_(family) {}
    ArmIndex select(const PullStats& stats, RandomStream&) override { return imedub_select(stats, *graph_, family_); }
    std::optional<StepRecord> decide(const PullStats& stats, RandomStream&) override {
        return imedub_decide(stats, *graph_, family_);
    }
    std::string_view name() const override { return "imed-ub"; }

private:
    const UnimodalGraph* graph_;
    Family family_;
};

class ImedPolicy final : public Policy {
public:
    explicit ImedPolicy(Family family) : family_(family) {}
    ArmIndex select(const PullStats& stats, RandomStream&) override { return imed_select(stats, family_); }
    std::optional<StepRecord> decide(const PullStats& stats, RandomStream&) override {
        return imed_decide(stats, family_);
    }
    std::string_view name() const override { return "imed"; }

private:
    Family family_;
};

class OsubPolicy final : public Policy {
public:
    OsubPolicy(const UnimodalGraph& graph, Family family, OsubParams params)
        : graph_(&graph), family_(family), params_(params), leader_rounds_(graph.arm_count(), 0) {}
    ArmIndex select(const PullStats& stats, RandomStream&) override {
        return osub_select(stats, *graph_, family_, leader_rounds_, params_);
    }
    std::string_view name() const override { return "osub"; }

private:
    const UnimodalGraph* graph_;
    Family family_;
    OsubParams params_;
    std::vector<std::uint64_t> leader_rounds_;
};

class UtsPolicy final : public Policy {
public:
    UtsPolicy(const UnimodalGraph& graph, Family family, UtsParams params)
        : graph_(&graph), family_(family), params_(params) {}
    ArmIndex select(const PullStats& stats, RandomStream& rng) override {
        return uts_select(stats, *graph_, family_, rng, params_);
    }
    std::string_view name() const override { return "uts"; }

private:
    const UnimodalGraph* graph_;
    Family family_;
    UtsParams params_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const UnimodalGraph& graph, const Family& family) {
    switch (spec.kind) {
        case PolicyKind::ImedUb: return std::make_unique<ImedUbPolicy>(graph, family);
        case PolicyKind::Imed: return std::make_unique<ImedPolicy>(family);
        case PolicyKind::Osub: return std::make_unique<OsubPolicy>(graph, family, spec.osub);
        case PolicyKind::Uts: return std::make_unique<UtsPolicy>(graph, family, spec.uts);
    }
    throw ParameterError("unknown policy kind");
}

}  // namespace imedub
