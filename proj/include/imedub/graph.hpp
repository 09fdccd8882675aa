#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace imedub {

using ArmIndex = std::size_t;
using Edge = std::pair<ArmIndex, ArmIndex>;

/// Result of checking a mean vector against a graph. `offending_arms` lists
/// arms with no strictly-increasing path to a unique optimum (or the tied
/// maximisers when the optimum is not unique).
struct UnimodalityReport {
    bool ok{true};
    std::vector<ArmIndex> offending_arms;
    std::string message;

    explicit operator bool() const noexcept { return ok; }
};

/// Undirected, connected, loop-free graph over arms 0..arm_count-1.
/// Immutable after construction.
class UnimodalGraph {
public:
    /// Duplicate edges are merged. Throws ParameterError on self-loops,
    /// out-of-range endpoints, arm_count == 0 or a disconnected graph.
    UnimodalGraph(std::size_t arm_count, std::span<const Edge> edges);
    UnimodalGraph(std::size_t arm_count, std::initializer_list<Edge> edges)
        : UnimodalGraph(arm_count, std::span<const Edge>(edges.begin(), edges.size())) {}

    std::size_t arm_count() const noexcept { return adjacency_.size(); }

    /// Sorted adjacency of `arm`, excluding `arm` itself.
    std::span<const ArmIndex> neighbors(ArmIndex arm) const;

    bool adjacent(ArmIndex a, ArmIndex b) const;

    std::size_t max_degree() const noexcept { return max_degree_; }

    /// Each edge once, as (lo, hi) with lo < hi, lexicographically sorted.
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Unique argmax plus, from every other arm, a path along which means
    /// strictly increase up to the argmax. Throws ParameterError when the
    /// length of `means` differs from arm_count().
    UnimodalityReport validate_unimodal(std::span<const double> means) const;

    /// Shortest-path hop distance from `source` to every arm.
    std::vector<std::size_t> distances_from(ArmIndex source) const;

    bool operator==(const UnimodalGraph&) const = default;

private:
    void check_arm(ArmIndex arm) const;

    std::vector<std::vector<ArmIndex>> adjacency_;
    std::vector<Edge> edges_;
    std::size_t max_degree_{0};
};

/// Path 0 - 1 - ... - (n-1). Requires n >= 2.
UnimodalGraph line_graph(std::size_t n);

UnimodalGraph complete_graph(std::size_t n);

/// Arm 0 joined to every other arm.
UnimodalGraph star_graph(std::size_t n);

}  // namespace imedub
