#pragma once
/*
Per-run trace files, one JSON document per line.

  line 1   header: {"format": "imedub-trace", "version": 1, "policy", "run",
           "seed", "family", "means", "arm_count", "edges"}
  line 2+  one pull: {"t", "arm", "reward"} plus, for decisions made by a
           policy with a decision record, "decision": {"leader", "best_mean",
           "candidates", "index", "arms": [[arm, count, mean], ...]}

"t" is the number of pulls before this one. Doubles are written with
round-trip precision; non-finite values as the strings "inf" / "-inf".
*/

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "imedub/bandit.hpp"
#include "imedub/checker.hpp"
#include "imedub/expfam.hpp"
#include "imedub/graph.hpp"

namespace imedub {

struct TraceHeader {
    std::string policy;
    std::size_t run{0};
    std::uint64_t seed{0};
    Family family{};
    std::vector<double> means;
    std::size_t arm_count{0};
    std::vector<Edge> edges;
};

struct TraceStep {
    std::uint64_t time{0};
    ArmIndex arm{0};
    double reward{0.0};
    std::optional<StepRecord> decision;
};

struct Trace {
    TraceHeader header;
    std::vector<TraceStep> steps;
};

class TraceWriter {
public:
    TraceWriter(const std::filesystem::path& path, const TraceHeader& header);
    void write(const TraceStep& step);

private:
    std::ofstream out_;
};

/// Throws InputError on malformed content, IoError if unreadable.
Trace read_trace(const std::filesystem::path& path);

std::string trace_file_name(std::string_view policy, std::size_t run);

struct ReplayMismatch {
    std::uint64_t time{0};
    std::string what;
};

/// Re-applies every (arm, reward) to fresh statistics and compares each
/// recorded decision snapshot (counts, means, best mean, time) exactly.
std::vector<ReplayMismatch> replay(const Trace& trace);

struct TraceCheck {
    std::filesystem::path path;
    std::string policy;
    std::size_t decisions{0};
    std::vector<Violation> violations;
    std::vector<ReplayMismatch> mismatches;
    /// Invariant checks only apply to IMED-UB traces.
    bool invariants_checked{false};
};

TraceCheck check_trace(const std::filesystem::path& path);

/// Every *.jsonl file in `dir`, in lexicographic order.
std::vector<TraceCheck> check_trace_dir(const std::filesystem::path& dir);

}  // namespace imedub
