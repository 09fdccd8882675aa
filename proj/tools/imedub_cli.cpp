// imedub: run unimodal bandit experiments, print theory constants, check traces.
//
//   imedub run <config> [--seed N] [--runs N] [--horizon N] [--out DIR] [--traces]
//              [--check-invariants] [--workers N]
//   imedub theory <config>
//   imedub check <trace-dir>
//
// Exit codes: 0 success, 1 configuration / input error, 2 invariant violation.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"

#include "imedub/config.hpp"
#include "imedub/errors.hpp"
#include "imedub/runner.hpp"
#include "imedub/theory.hpp"
#include "imedub/trace.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kViolation = 2;

struct RunArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> horizon;
    std::optional<std::string> out;
    std::optional<std::size_t> workers;
    bool traces{false};
    bool check{false};
};

int cmd_run(const RunArgs& args) {
    auto cfg = imedub::load_config(args.config);
    if (args.seed) cfg.seed = *args.seed;
    if (args.runs) cfg.runs = *args.runs;
    if (args.horizon) cfg.horizon = *args.horizon;
    if (args.out) cfg.output_dir = *args.out;
    if (args.workers) cfg.workers = *args.workers;
    cfg.traces = cfg.traces || args.traces;
    cfg.check_invariants = cfg.check_invariants || args.check;
    imedub::validate(cfg);

    const auto bandit = imedub::build_bandit(cfg);
    const auto theory = imedub::lower_bound_constant(bandit);
    for (const auto& w : theory.warnings) std::cerr << "warning: " << w << '\n';

    const auto start = std::chrono::steady_clock::now();
    const auto result = imedub::run_experiment(cfg, cfg.output_dir / "traces");
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    imedub::emit_outputs(result.curves, theory, bandit, cfg.output_dir);

    std::cout << "config " << result.curves.config_digest << ": " << cfg.runs << " runs x " << cfg.policies.size()
              << " policies, T = " << cfg.horizon << " (" << elapsed.count() << " s)\n";
    std::cout << "c(nu) = " << theory.c_nu << ", c(nu) log T = " << theory.c_nu * std::log(double(cfg.horizon))
              << '\n';
    for (const auto& c : result.curves.policies) {
        std::cout << "  " << c.policy << ": mean regret " << c.mean.back() << " (q10 " << c.q10.back() << ", q90 "
                  << c.q90.back() << ")\n";
    }
    std::cout << "wrote " << (cfg.output_dir / "regret.csv").string() << '\n';

    if (cfg.check_invariants) {
        for (const auto& v : result.violations) std::cout << imedub::format_violation(v) << '\n';
        if (!result.violations.empty()) {
            std::cerr << result.violations.size() << " invariant violation(s)\n";
            return kViolation;
        }
        std::cout << "invariants: no violations\n";
    }
    return kOk;
}

int cmd_theory(const std::string& path) {
    auto cfg = imedub::load_config(path);
    const auto bandit = imedub::build_bandit(cfg);
    const auto theory = imedub::lower_bound_constant(bandit);
    std::cout << imedub::theory_json(theory, bandit, imedub::config_digest(cfg));
    return kOk;
}

int cmd_check(const std::string& dir) {
    const auto checks = imedub::check_trace_dir(dir);
    std::size_t violations = 0;
    std::size_t decisions = 0;
    for (const auto& c : checks) {
        decisions += c.decisions;
        for (const auto& v : c.violations) std::cout << imedub::format_violation(v) << '\n';
        for (const auto& m : c.mismatches) {
            std::cout << "{\"run\":\"" << c.path.filename().string() << "\",\"t\":" << m.time
                      << ",\"replay_mismatch\":\"" << m.what << "\"}\n";
        }
        violations += c.violations.size() + c.mismatches.size();
        if (!c.invariants_checked) {
            std::cerr << "note: " << c.path.filename().string() << " (" << c.policy
                      << ") replayed only; invariant checks apply to imed-ub traces\n";
        }
    }
    std::cerr << checks.size() << " trace(s), " << decisions << " decision(s), " << violations << " problem(s)\n";
    return violations == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IMED-UB unimodal bandit experiments"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a Monte Carlo regret experiment");
    run->add_option("config", run_args.config, "Experiment config (JSON)")->required();
    run->add_option("--seed", run_args.seed, "Master seed");
    run->add_option("--runs", run_args.runs, "Number of runs per policy");
    run->add_option("--horizon", run_args.horizon, "Horizon T");
    run->add_option("--out", run_args.out, "Output directory");
    run->add_option("--workers", run_args.workers, "Worker threads (0 = all cores)");
    run->add_flag("--traces", run_args.traces, "Write per-run trace files");
    run->add_flag("--check-invariants", run_args.check, "Check IMED-UB invariant inequalities at every step");

    std::string theory_path;
    auto* theory = app.add_subcommand("theory", "Print lower-bound constants for a config");
    theory->add_option("config", theory_path, "Experiment config (JSON)")->required();

    std::string trace_dir;
    auto* check = app.add_subcommand("check", "Check a directory of trace files");
    check->add_option("trace-dir", trace_dir, "Directory with *.jsonl traces")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*theory) return cmd_theory(theory_path);
        if (*check) return cmd_check(trace_dir);
    } catch (const imedub::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
