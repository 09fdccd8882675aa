#include "imedub/checker.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "imedub/errors.hpp"

namespace imedub {

namespace {

void validate(const StepRecord& rec, const UnimodalGraph& graph) {
    const auto k = graph.arm_count();
    auto fail = [&](const std::string& why) {
        throw InputError("malformed step record at t=" + std::to_string(rec.time) + ": " + why);
    };
    if (rec.time < k) fail("decision before forced initialisation completed");
    if (rec.candidates.size() != rec.index_values.size()) fail("candidates and index values differ in length");
    if (rec.leader >= k || rec.chosen >= k) fail("arm index out of range");
    for (std::size_t i = 0; i < rec.arms.size(); ++i) {
        if (rec.arms[i].arm >= k) fail("snapshot arm out of range");
        if (i > 0 && rec.arms[i].arm <= rec.arms[i - 1].arm) fail("snapshots not strictly sorted by arm");
        if (rec.arms[i].count == 0) fail("snapshot with zero pulls for arm " + std::to_string(rec.arms[i].arm));
        if (std::isnan(rec.arms[i].mean)) fail("NaN mean");
    }
    if (!rec.snapshot(rec.leader)) fail("missing snapshot for the leader");
    if (!rec.snapshot(rec.chosen)) fail("missing snapshot for the chosen arm");
    for (ArmIndex a : graph.neighbors(rec.leader)) {
        if (!rec.snapshot(a)) fail("missing snapshot for leader neighbour " + std::to_string(a));
    }
    if (std::isnan(rec.best_mean)) fail("NaN best mean");
}

// N KL(mean, best), with the divergence taken as 0 at or above the best.
double transport_cost(const Family& family, const ArmSnapshot& s, double best) {
    if (s.mean >= best) return 0.0;
    return static_cast<double>(s.count) * expfam::kl(family, s.mean, best);
}

double log_count(const ArmSnapshot& s) { return std::log(static_cast<double>(s.count)); }

bool exceeds(double lhs, double rhs) { return !(lhs <= rhs + kCheckTolerance); }

}  // namespace

std::string_view to_string(Inequality id) {
    switch (id) {
        case Inequality::Lb1: return "LB1";
        case Inequality::Lb2: return "LB2";
        case Inequality::Ub: return "UB";
        case Inequality::Membership: return "MEMBERSHIP";
        case Inequality::IndexFloor: return "INDEX-FLOOR";
    }
    return "UNKNOWN";
}

std::vector<Violation> check_step(const StepRecord& rec, const UnimodalGraph& graph, const Family& family,
                                  std::string_view run_id) {
    validate(rec, graph);

    std::vector<Violation> out;
    auto report = [&](Inequality id, double lhs, double rhs, ArmIndex arm) {
        out.push_back({std::string(run_id), rec.time, id, lhs, rhs, arm});
    };

    const ArmSnapshot& chosen = *rec.snapshot(rec.chosen);
    const ArmSnapshot& lead = *rec.snapshot(rec.leader);
    const double best = rec.best_mean;

    const double log_chosen = log_count(chosen);
    for (ArmIndex a : graph.neighbors(rec.leader)) {
        const ArmSnapshot& s = *rec.snapshot(a);
        const double rhs = transport_cost(family, s, best) + log_count(s);
        if (exceeds(log_chosen, rhs)) report(Inequality::Lb1, log_chosen, rhs, a);
    }

    if (chosen.count > lead.count) {
        report(Inequality::Lb2, static_cast<double>(chosen.count), static_cast<double>(lead.count), rec.chosen);
    }

    const double cost = transport_cost(family, chosen, best);
    const double log_t = std::log(static_cast<double>(rec.time));
    if (exceeds(cost, log_t)) report(Inequality::Ub, cost, log_t, rec.chosen);

    if (rec.chosen != rec.leader && !graph.adjacent(rec.leader, rec.chosen)) {
        report(Inequality::Membership, static_cast<double>(rec.chosen), static_cast<double>(rec.leader), rec.chosen);
    }

    // Recomputed from the snapshot, and as recorded by the policy.
    const double floor = log_count(lead);
    const double recomputed = transport_cost(family, lead, best) + floor;
    if (std::abs(recomputed - floor) > kCheckTolerance || std::isnan(recomputed)) {
        report(Inequality::IndexFloor, recomputed, floor, rec.leader);
    }
    for (std::size_t i = 0; i < rec.candidates.size(); ++i) {
        if (rec.candidates[i] != rec.leader) continue;
        const double recorded = rec.index_values[i];
        if (!(std::abs(recorded - floor) <= kCheckTolerance)) report(Inequality::IndexFloor, recorded, floor, rec.leader);
    }
    return out;
}

std::string format_violation(const Violation& v) {
    nlohmann::ordered_json j;
    j["run"] = v.run_id;
    j["t"] = v.time;
    j["inequality"] = std::string(to_string(v.inequality));
    j["arm"] = v.arm;
    auto number = [](double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json("inf"); };
    j["lhs"] = number(v.lhs);
    j["rhs"] = number(v.rhs);
    return j.dump();
}

}  // namespace imedub
