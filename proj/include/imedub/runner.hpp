#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "imedub/bandit.hpp"
#include "imedub/checker.hpp"
#include "imedub/config.hpp"
#include "imedub/policies.hpp"
#include "imedub/theory.hpp"
#include "imedub/trace.hpp"

namespace imedub {

/// Independent stream seed for one (run, policy) pair.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index, std::uint64_t policy_id);

/// Optional per-run instrumentation.
struct RunHooks {
    TraceWriter* trace{nullptr};
    /// Check every IMED-UB decision against the step inequalities.
    bool check_invariants{false};
    std::vector<ArmIndex>* arm_sequence{nullptr};
    std::string run_id;
};

struct RunResult {
    /// Pseudo-regret after grid[i] pulls.
    std::vector<double> regret;
    std::vector<std::uint64_t> final_counts;
    double final_pseudo_regret{0.0};
    double final_reward_regret{0.0};
    std::vector<Violation> violations;
};

/// One run: forced initialisation in arm order, then the policy until
/// `horizon` pulls. Rewards come from a stream seeded with `seed`; the
/// policy's own randomness from a stream derived from it.
RunResult simulate_run(const BanditConfig& bandit, const PolicySpec& policy, std::uint64_t horizon,
                       const std::vector<std::uint64_t>& grid, std::uint64_t seed, const RunHooks& hooks = {});

struct PolicyCurve {
    std::string policy;
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<double> q10;
    std::vector<double> q90;
    /// Average N_a(T) per arm.
    std::vector<double> mean_pulls;
    double mean_reward_regret{0.0};
};

struct RegretCurves {
    std::vector<std::uint64_t> grid;
    std::vector<PolicyCurve> policies;
    std::size_t runs{0};
    std::string config_digest;
};

struct ExperimentResult {
    RegretCurves curves;
    std::vector<Violation> violations;
};

/// Runs every (policy, run) pair on `config.workers` threads (0 = hardware
/// concurrency). The result depends only on the config, never on the
/// worker count. Writes trace files under `trace_dir` when config.traces is
/// set. Throws ConfigError on an invalid config.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& trace_dir = {});

/// Linear-interpolation quantile of an ascending-sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Writes regret.csv, pulls.csv, theory.json and plot_regret.py into `dir`.
void emit_outputs(const RegretCurves& curves, const TheoryReport& theory, const BanditConfig& bandit,
                  const std::filesystem::path& dir);

std::string regret_csv(const RegretCurves& curves);
std::string theory_json(const TheoryReport& theory, const BanditConfig& bandit, const std::string& digest);

}  // namespace imedub
