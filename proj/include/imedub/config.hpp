#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "imedub/bandit.hpp"
#include "imedub/policies.hpp"

namespace imedub {

/// Graph as described in a config: the line topology or an explicit edge list.
struct GraphSpec {
    bool line{true};
    std::vector<Edge> edges;
};

/// `points` time steps log-spaced over [1, horizon] (after rounding and
/// de-duplication there may be fewer).
struct LogGrid {
    std::size_t points{200};
};

using GridSpec = std::variant<LogGrid, std::vector<std::uint64_t>>;

/// A full experiment. JSON schema:
///
///   {
///     "family":   "bernoulli" | "exponential" | {"kind": "gaussian", "variance": 0.25},
///     "means":    [0.05, 0.10, ...],
///     "graph":    "line" | {"type": "edges", "edges": [[0, 1], [1, 2]]},
///     "policies": ["imed-ub", {"name": "osub", "gamma": 2, "c": 0}, "uts"],
///     "horizon":  20000,
///     "runs":     500,
///     "seed":     2021,
///     "grid":     {"type": "log", "points": 200} | [1, 10, 100, ...],
///     "traces":   false,
///     "check_invariants": false,
///     "output_dir": "results",
///     "workers":  0
///   }
///
/// Everything except "means" has a default.
struct ExperimentConfig {
    Family family{Family::bernoulli()};
    std::vector<double> means;
    GraphSpec graph{};
    std::vector<PolicySpec> policies{PolicySpec{}};
    std::uint64_t horizon{20000};
    std::size_t runs{500};
    std::uint64_t seed{0};
    GridSpec grid{LogGrid{}};
    bool traces{false};
    bool check_invariants{false};
    std::filesystem::path output_dir{"results"};
    /// 0 = one worker per hardware thread.
    std::size_t workers{0};
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks the invariants that parsing alone cannot (horizon >= arm count,
/// grid within [1, horizon], unimodality, ...). Throws ConfigError.
void validate(const ExperimentConfig& config);

UnimodalGraph build_graph(const ExperimentConfig& config);
BanditConfig build_bandit(const ExperimentConfig& config);

std::vector<std::uint64_t> resolve_grid(const GridSpec& grid, std::uint64_t horizon);
std::vector<std::uint64_t> log_grid(std::uint64_t horizon, std::size_t points);

/// Canonical JSON of the fields that determine the simulated numbers
/// (excludes output_dir, workers and the trace / check flags).
nlohmann::ordered_json canonical_json(const ExperimentConfig& config);

/// 16 hex digits of FNV-1a over canonical_json(config).dump().
std::string config_digest(const ExperimentConfig& config);

nlohmann::ordered_json family_to_json(const Family& family);
Family family_from_json(const nlohmann::json& j, const std::string& field = "family");

}  // namespace imedub
