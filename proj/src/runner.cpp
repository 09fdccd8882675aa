#include "imedub/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "imedub/errors.hpp"

namespace imedub {

namespace {

std::string number(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

// Aggregation is always over runs in index order, whatever thread produced them.
PolicyCurve aggregate(const std::string& name, const std::vector<RunResult>& runs, std::size_t grid_size,
                      std::size_t arm_count) {
    PolicyCurve curve;
    curve.policy = name;
    const double n = static_cast<double>(runs.size());
    std::vector<double> column(runs.size());
    for (std::size_t g = 0; g < grid_size; ++g) {
        double sum = 0.0;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            column[r] = runs[r].regret[g];
            sum += column[r];
        }
        const double mean = sum / n;
        double sq = 0.0;
        for (double v : column) sq += (v - mean) * (v - mean);
        std::sort(column.begin(), column.end());
        curve.mean.push_back(mean);
        curve.std.push_back(runs.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0);
        curve.q10.push_back(quantile_sorted(column, 0.10));
        curve.q90.push_back(quantile_sorted(column, 0.90));
    }
    curve.mean_pulls.assign(arm_count, 0.0);
    double reward_regret = 0.0;
    for (const auto& run : runs) {
        for (std::size_t a = 0; a < arm_count; ++a) curve.mean_pulls[a] += static_cast<double>(run.final_counts[a]);
        reward_regret += run.final_reward_regret;
    }
    for (auto& p : curve.mean_pulls) p /= n;
    curve.mean_reward_regret = reward_regret / n;
    return curve;
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plot cumulative pseudo-regret curves from regret.csv (mean with 10%-90% band)."""
import csv
import json
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
curves = {}
with open(os.path.join(here, "regret.csv")) as f:
    for row in csv.DictReader(f):
        c = curves.setdefault(row["policy"], {"t": [], "mean": [], "q10": [], "q90": []})
        for key in ("t", "mean", "q10", "q90"):
            c[key].append(float(row[key]))

fig, ax = plt.subplots(figsize=(7, 4.5))
for name, c in curves.items():
    (line,) = ax.plot(c["t"], c["mean"], label=name)
    ax.fill_between(c["t"], c["q10"], c["q90"], color=line.get_color(), alpha=0.2)

theory_path = os.path.join(here, "theory.json")
if os.path.exists(theory_path):
    with open(theory_path) as f:
        c_nu = json.load(f)["c_nu"]
    ts = sorted({t for c in curves.values() for t in c["t"]})
    ax.plot(ts, [c_nu * math.log(t) for t in ts], "k--", linewidth=1, label="c(nu) log t")

ax.set_xlabel("t")
ax.set_ylabel("cumulative regret")
ax.legend()
ax.grid(alpha=0.3)
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "regret.png")
fig.savefig(out, dpi=150)
print(out)
)PY";

}  // namespace

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index, std::uint64_t policy_id) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ splitmix64(run_index + 0x632BE59BD9B4E019ULL));
    h = splitmix64(h ^ splitmix64(policy_id + 0x8CB92BA72F3D8DD7ULL));
    return h;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::nan("");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

RunResult simulate_run(const BanditConfig& bandit, const PolicySpec& spec, std::uint64_t horizon,
                       const std::vector<std::uint64_t>& grid, std::uint64_t seed, const RunHooks& hooks) {
    if (horizon < bandit.arm_count()) throw ParameterError("horizon shorter than forced initialisation");

    Environment env(bandit);
    RandomStream rewards(seed);
    RandomStream policy_rng(splitmix64(seed ^ 0x5851F42D4C957F2DULL));
    auto policy = make_policy(spec, bandit.graph(), bandit.family());
    const bool check = hooks.check_invariants && spec.kind == PolicyKind::ImedUb;
    const bool want_record = check || hooks.trace != nullptr;

    RunResult result;
    result.regret.reserve(grid.size());
    std::size_t next_grid = 0;

    auto pull = [&](ArmIndex arm, std::optional<StepRecord> decision) {
        const std::uint64_t time = env.stats().time();
        const double reward = env.step(arm, rewards);
        if (hooks.arm_sequence) hooks.arm_sequence->push_back(arm);
        if (hooks.trace) hooks.trace->write({time, arm, reward, std::move(decision)});
        while (next_grid < grid.size() && grid[next_grid] == env.stats().time()) {
            result.regret.push_back(env.pseudo_regret());
            ++next_grid;
        }
    };

    for (ArmIndex a = 0; a < bandit.arm_count(); ++a) pull(a, std::nullopt);

    for (std::uint64_t t = bandit.arm_count(); t < horizon; ++t) {
        if (want_record) {
            if (auto rec = policy->decide(env.stats(), policy_rng)) {
                if (check) {
                    auto found = check_step(*rec, bandit.graph(), bandit.family(), hooks.run_id);
                    result.violations.insert(result.violations.end(), found.begin(), found.end());
                }
                const ArmIndex arm = rec->chosen;
                pull(arm, std::move(rec));
                continue;
            }
        }
        pull(policy->select(env.stats(), policy_rng), std::nullopt);
    }

    if (next_grid != grid.size()) throw ParameterError("grid point beyond the horizon");
    result.final_counts.assign(env.stats().counts().begin(), env.stats().counts().end());
    result.final_pseudo_regret = env.pseudo_regret();
    result.final_reward_regret = env.reward_regret();
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& trace_dir) {
    validate(config);
    const BanditConfig bandit = build_bandit(config);
    const auto grid = resolve_grid(config.grid, config.horizon);
    const std::size_t n_policies = config.policies.size();
    const std::size_t n_runs = config.runs;
    const std::size_t n_items = n_policies * n_runs;

    if (config.traces) {
        if (trace_dir.empty()) throw ParameterError("trace capture requested without a trace directory");
        std::filesystem::create_directories(trace_dir);
    }

    std::vector<RunResult> results(n_items);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t item = next.fetch_add(1);
            if (item >= n_items) return;
            const std::size_t p = item / n_runs;
            const std::size_t r = item % n_runs;
            try {
                const PolicySpec& spec = config.policies[p];
                RunHooks hooks;
                hooks.check_invariants = config.check_invariants;
                hooks.run_id = spec.name() + "#" + std::to_string(r);
                const std::uint64_t seed = derive_run_seed(config.seed, r, p);
                std::optional<TraceWriter> writer;
                if (config.traces) {
                    TraceHeader header{spec.name(), r, seed, bandit.family(), bandit.means(), bandit.arm_count(),
                                       bandit.graph().edges()};
                    // Several entries of one policy kind would share a file name otherwise.
                    const std::string label = n_policies > 1 ? std::to_string(p) + "-" + spec.name() : spec.name();
                    writer.emplace(trace_dir / trace_file_name(label, r), header);
                    hooks.trace = &*writer;
                }
                results[item] = simulate_run(bandit, spec, config.horizon, grid, seed, hooks);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_items);
                return;
            }
        }
    };

    std::size_t workers = config.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n_items);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult out;
    out.curves.grid = grid;
    out.curves.runs = n_runs;
    out.curves.config_digest = config_digest(config);
    for (std::size_t p = 0; p < n_policies; ++p) {
        std::vector<RunResult> runs(std::make_move_iterator(results.begin() + p * n_runs),
                                    std::make_move_iterator(results.begin() + (p + 1) * n_runs));
        out.curves.policies.push_back(aggregate(config.policies[p].name(), runs, grid.size(), bandit.arm_count()));
        for (auto& run : runs) {
            out.violations.insert(out.violations.end(), run.violations.begin(), run.violations.end());
        }
    }
    return out;
}

std::string regret_csv(const RegretCurves& curves) {
    std::string out = "policy,t,mean,std,q10,q90\n";
    for (const auto& c : curves.policies) {
        for (std::size_t g = 0; g < curves.grid.size(); ++g) {
            out += c.policy + ',' + std::to_string(curves.grid[g]) + ',' + number(c.mean[g]) + ',' + number(c.std[g]) +
                   ',' + number(c.q10[g]) + ',' + number(c.q90[g]) + '\n';
        }
    }
    return out;
}

std::string theory_json(const TheoryReport& theory, const BanditConfig& bandit, const std::string& digest) {
    nlohmann::ordered_json j;
    j["config_digest"] = digest;
    j["family"] = family_to_json(bandit.family());
    j["means"] = bandit.means();
    j["max_degree"] = bandit.graph().max_degree();
    j["optimal_arm"] = theory.optimal_arm;
    j["optimal_neighbors"] = theory.optimal_neighbors;
    j["c_nu"] = theory.c_nu;
    j["epsilon_nu"] = theory.epsilon_nu;
    j["gaps"] = theory.gaps;
    j["neighbor_kl"] = theory.neighbor_kl;
    j["warnings"] = theory.warnings;
    return j.dump(2) + "\n";
}

void emit_outputs(const RegretCurves& curves, const TheoryReport& theory, const BanditConfig& bandit,
                  const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    write_file(dir / "regret.csv", regret_csv(curves));

    std::string pulls = "policy,arm,mean_pulls\n";
    for (const auto& c : curves.policies) {
        for (std::size_t a = 0; a < c.mean_pulls.size(); ++a) {
            pulls += c.policy + ',' + std::to_string(a) + ',' + number(c.mean_pulls[a]) + '\n';
        }
    }
    write_file(dir / "pulls.csv", pulls);
    write_file(dir / "theory.json", theory_json(theory, bandit, curves.config_digest));
    write_file(dir / "plot_regret.py", kPlotScript);
    std::filesystem::permissions(dir / "plot_regret.py", std::filesystem::perms::owner_exec,
                                 std::filesystem::perm_options::add, ec);
}

}  // namespace imedub
