// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure. Pass criterion numbers as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "imedub/runner.hpp"
#include "oracles.hpp"

using namespace imedub;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

ExperimentConfig experiment(Family family, std::vector<PolicySpec> policies) {
    ExperimentConfig cfg;
    cfg.family = family;
    cfg.means = oracle::experiment_means();
    cfg.policies = std::move(policies);
    cfg.seed = 2021;
    return cfg;
}

const std::vector<Family>& families() {
    static const std::vector<Family> all{Family::bernoulli(), Family::gaussian(0.25), Family::exponential()};
    return all;
}

// 1. Zero invariant violations on the reference runs.
Outcome invariant_suite() {
    std::size_t violations = 0;
    std::string first;
    for (const Family& fam : families()) {
        auto cfg = experiment(fam, {PolicySpec{PolicyKind::ImedUb}});
        cfg.runs = 100;
        cfg.horizon = 10000;
        cfg.grid = std::vector<std::uint64_t>{cfg.horizon};
        cfg.check_invariants = true;
        const auto result = run_experiment(cfg);
        violations += result.violations.size();
        if (first.empty() && !result.violations.empty()) first = format_violation(result.violations.front());
    }
    return {violations == 0, fmt("%zu violations over 3 x 100 runs of 10000 steps%s%s", violations,
                                 first.empty() ? "" : "; first: ", first.c_str())};
}

// 2. IMED and IMED-UB pick the same arms on a two-arm line.
Outcome two_arm_equivalence() {
    const BanditConfig bandit(Family::bernoulli(), {0.4, 0.6}, line_graph(2));
    std::size_t differing = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::vector<ArmIndex> a, b;
        RunHooks ha, hb;
        ha.arm_sequence = &a;
        hb.arm_sequence = &b;
        simulate_run(bandit, PolicySpec{PolicyKind::Imed}, 5000, {5000}, seed, ha);
        simulate_run(bandit, PolicySpec{PolicyKind::ImedUb}, 5000, {5000}, seed, hb);
        if (a != b || a.size() != 5000) ++differing;
    }
    return {differing == 0, fmt("%zu of 50 seeds differ at T = 5000", differing)};
}

// 3. Closed-form KL against numeric oracles, and Pinsker's inequality.
Outcome kl_oracle() {
    struct Range {
        Family family;
        double lo, hi;
    };
    const std::vector<Range> ranges{{Family::bernoulli(), 0.01, 0.99},
                                    {Family::gaussian(0.25), -3.0, 3.0},
                                    {Family::exponential(), 0.05, 10.0}};
    double worst_err = 0.0;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& r : ranges) {
        std::vector<double> grid;
        for (int i = 0; i < 50; ++i) grid.push_back(r.lo + (r.hi - r.lo) * i / 49.0);
        for (double mu : grid) {
            for (double mp : grid) {
                const double got = expfam::kl(r.family, mu, mp);
                const double want = oracle::kl(r.family, mu, mp);
                worst_err = std::max(worst_err, std::abs(got - want) / std::max(1.0, std::abs(want)));
                if (mu < mp) {
                    const double bound = (mp - mu) * (mp - mu) / (2.0 * expfam::variance_sup(r.family, mu, mp));
                    worst_slack = std::min(worst_slack, got - bound);
                }
            }
        }
    }
    return {worst_err <= 1e-8 && worst_slack >= -1e-12,
            fmt("max error %.3g (limit 1e-8), min Pinsker slack %.3g (limit -1e-12)", worst_err, worst_slack)};
}

// 4. Lower-bound constants for the reference means.
Outcome lower_bound_constants() {
    const double targets[] = {14.2855, 20.0, 4.3213};
    const oracle::Big variances[] = {1, oracle::Big("0.25"), 1};
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < 3; ++i) {
        const Family& fam = families()[i];
        const auto report = lower_bound_constant(BanditConfig(fam, oracle::experiment_means(), line_graph(9)));
        const double precise = oracle::c_nu_line(fam.kind, oracle::experiment_means_big(), variances[i]);
        const double rel_target = std::abs(report.c_nu - targets[i]) / targets[i];
        const double rel_precise = std::abs(report.c_nu - precise) / precise;
        ok = ok && rel_target <= 1e-3 && rel_precise <= 1e-12;
        if (fam.kind == FamilyKind::Gaussian) ok = ok && std::abs(report.c_nu - 20.0) <= 1e-12;
        detail += fmt("%s%s %.10g (rel %.2g vs %.6g, %.2g vs 50-digit)", i ? "; " : "", std::string(to_string(fam.kind)).c_str(),
                      report.c_nu, rel_target, targets[i], rel_precise);
    }
    return {ok, detail};
}

// Shared by 5 and 6: reference Bernoulli experiment at full size.
struct Reference {
    ExperimentConfig config;
    ExperimentResult result;
    double c_nu;
};

const Reference& reference() {
    static const Reference ref = [] {
        Reference r;
        r.config = experiment(Family::bernoulli(), {PolicySpec{PolicyKind::ImedUb}, PolicySpec{PolicyKind::Osub},
                                                    PolicySpec{PolicyKind::Uts}});
        r.config.runs = 500;
        r.config.horizon = 20000;
        auto grid = log_grid(r.config.horizon, 200);
        for (std::uint64_t t : {5000, 10000, 20000}) grid.push_back(t);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        r.config.grid = grid;
        r.result = run_experiment(r.config);
        r.c_nu = lower_bound_constant(build_bandit(r.config)).c_nu;
        return r;
    }();
    return ref;
}

double regret_at(const RegretCurves& curves, std::size_t policy, std::uint64_t t) {
    const auto it = std::find(curves.grid.begin(), curves.grid.end(), t);
    return curves.policies[policy].mean[static_cast<std::size_t>(it - curves.grid.begin())];
}

// 5. Logarithmic regret scaling for IMED-UB.
Outcome regret_scaling() {
    const auto& ref = reference();
    const auto& curves = ref.result.curves;
    double ratio[3];
    const std::uint64_t ts[3] = {5000, 10000, 20000};
    for (int i = 0; i < 3; ++i) ratio[i] = regret_at(curves, 0, ts[i]) / std::log(double(ts[i]));
    const bool a = ratio[0] >= ratio[1] && ratio[1] >= ratio[2];

    const double normalised = regret_at(curves, 0, 20000) / (ref.c_nu * std::log(20000.0));
    const bool b = normalised >= 0.3 && normalised <= 5.0;

    const auto bandit = build_bandit(ref.config);
    const auto dist = bandit.graph().distances_from(bandit.optimal_arm());
    const auto& pulls = curves.policies[0].mean_pulls;
    double min_neighbor = std::numeric_limits<double>::infinity();
    double max_far = 0.0;
    for (ArmIndex arm = 0; arm < bandit.arm_count(); ++arm) {
        if (dist[arm] == 1) min_neighbor = std::min(min_neighbor, pulls[arm]);
        if (dist[arm] >= 2) max_far = std::max(max_far, pulls[arm]);
    }
    const bool c = max_far < 0.1 * min_neighbor;
    return {a && b && c,
            fmt("(a) R/log T = %.3f, %.3f, %.3f %s; (b) R/(c log T) = %.3f %s; (c) far/neighbour pulls = %.1f/%.1f %s",
                ratio[0], ratio[1], ratio[2], a ? "ok" : "NOT nonincreasing", normalised, b ? "ok" : "out of [0.3, 5]",
                max_far, min_neighbor, c ? "ok" : "NOT below 10%")};
}

// 6. IMED-UB within a factor two of the baselines.
Outcome baseline_sanity() {
    const auto& curves = reference().result.curves;
    const double imedub = regret_at(curves, 0, 20000);
    const double osub = regret_at(curves, 1, 20000);
    const double uts = regret_at(curves, 2, 20000);
    auto within = [](double x, double y) { return x <= 2.0 * y && y <= 2.0 * x; };
    return {within(imedub, osub) && within(imedub, uts),
            fmt("final regret imed-ub %.2f, osub %.2f, uts %.2f", imedub, osub, uts)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// 7. regret.csv does not depend on the worker count.
Outcome determinism() {
    auto cfg = experiment(Family::gaussian(0.25), {PolicySpec{PolicyKind::ImedUb}, PolicySpec{PolicyKind::Osub},
                                                   PolicySpec{PolicyKind::Uts}});
    cfg.runs = 40;
    cfg.horizon = 5000;
    const auto bandit = build_bandit(cfg);
    const auto theory = lower_bound_constant(bandit);
    const auto root = fs::temp_directory_path() / "imedub_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::string> files;
    for (std::size_t workers : {1, 2, 5}) {
        cfg.workers = workers;
        const auto dir = root / std::to_string(workers);
        emit_outputs(run_experiment(cfg).curves, theory, bandit, dir);
        files.push_back(slurp(dir / "regret.csv"));
    }
    fs::remove_all(root);
    const bool same = std::all_of(files.begin(), files.end(), [&](const std::string& f) { return f == files[0]; });
    return {same && !files[0].empty(),
            fmt("regret.csv (%zu bytes) %s across 1, 2 and 5 workers", files[0].size(), same ? "identical" : "differs")};
}

// 8. Unimodality validator against brute-force path enumeration.
Outcome validator_oracle() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> coarse(0, 4);
    std::size_t checks = 0, unimodal = 0, disagreements = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
        // Half continuous draws, half coarse ones so that ties occur.
        std::vector<std::vector<double>> vectors(1000, std::vector<double>(n));
        for (std::size_t v = 0; v < vectors.size(); ++v) {
            for (double& m : vectors[v]) m = v % 2 ? unit(rng) : coarse(rng) / 4.0;
        }
        for (const auto& edges : oracle::connected_graphs(n)) {
            const UnimodalGraph graph(n, std::span<const Edge>(edges));
            for (const auto& means : vectors) {
                const bool got = graph.validate_unimodal(means).ok;
                const bool want = oracle::unimodal_by_paths(n, edges, means);
                disagreements += got != want;
                unimodal += want;
                ++checks;
            }
        }
    }
    return {disagreements == 0,
            fmt("%zu disagreements over %zu (graph, means) pairs, %zu unimodal", disagreements, checks, unimodal)};
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
    const Criterion criteria[] = {
        {1, "invariant suite", invariant_suite},
        {2, "IMED equals IMED-UB on two arms", two_arm_equivalence},
        {3, "KL oracle and Pinsker", kl_oracle},
        {4, "lower-bound constants", lower_bound_constants},
        {5, "regret scaling", regret_scaling},
        {6, "baseline sanity", baseline_sanity},
        {7, "determinism across workers", determinism},
        {8, "unimodality validator", validator_oracle},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] AC%d %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !out.pass;
    }
    return failures == 0 ? 0 : 1;
}
