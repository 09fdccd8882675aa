#include "imedub/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "imedub/errors.hpp"

namespace imedub {

UnimodalGraph::UnimodalGraph(std::size_t arm_count, std::span<const Edge> edges) : adjacency_(arm_count) {
    if (arm_count == 0) throw ParameterError("graph needs at least one arm");
    for (auto [a, b] : edges) {
        if (a >= arm_count || b >= arm_count) {
            throw ParameterError("edge (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range for " +
                                 std::to_string(arm_count) + " arms");
        }
        if (a == b) throw ParameterError("self-loop at arm " + std::to_string(a));
        edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    for (auto [a, b] : edges_) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& row : adjacency_) {
        std::sort(row.begin(), row.end());
        max_degree_ = std::max(max_degree_, row.size());
    }

    const auto dist = distances_from(0);
    for (ArmIndex a = 0; a < arm_count; ++a) {
        if (dist[a] == std::numeric_limits<std::size_t>::max()) {
            throw ParameterError("graph is disconnected: arm " + std::to_string(a) + " unreachable from arm 0");
        }
    }
}

void UnimodalGraph::check_arm(ArmIndex arm) const {
    if (arm >= arm_count()) {
        throw ParameterError("arm index " + std::to_string(arm) + " out of range for " +
                             std::to_string(arm_count()) + " arms");
    }
}

std::span<const ArmIndex> UnimodalGraph::neighbors(ArmIndex arm) const {
    check_arm(arm);
    return adjacency_[arm];
}

bool UnimodalGraph::adjacent(ArmIndex a, ArmIndex b) const {
    const auto row = neighbors(a);
    check_arm(b);
    return std::binary_search(row.begin(), row.end(), b);
}

std::vector<std::size_t> UnimodalGraph::distances_from(ArmIndex source) const {
    check_arm(source);
    std::vector<std::size_t> dist(arm_count(), std::numeric_limits<std::size_t>::max());
    std::deque<ArmIndex> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const ArmIndex u = queue.front();
        queue.pop_front();
        for (ArmIndex v : adjacency_[u]) {
            if (dist[v] == std::numeric_limits<std::size_t>::max()) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

UnimodalityReport UnimodalGraph::validate_unimodal(std::span<const double> means) const {
    if (means.size() != arm_count()) {
        throw ParameterError("means has " + std::to_string(means.size()) + " entries, graph has " +
                             std::to_string(arm_count()) + " arms");
    }
    for (double m : means) {
        if (std::isnan(m)) throw ParameterError("means contain NaN");
    }

    UnimodalityReport report;
    const double best = *std::max_element(means.begin(), means.end());
    std::vector<ArmIndex> maximisers;
    for (ArmIndex a = 0; a < means.size(); ++a) {
        if (means[a] == best) maximisers.push_back(a);
    }
    if (maximisers.size() > 1) {
        report.ok = false;
        report.offending_arms = std::move(maximisers);
        report.message = "optimal arm is not unique";
        return report;
    }

    // Walk backwards from the optimum along strictly decreasing edges; an arm
    // is reached iff it has a strictly increasing path to the optimum.
    const ArmIndex optimum = maximisers.front();
    std::vector<bool> reached(arm_count(), false);
    std::vector<ArmIndex> stack{optimum};
    reached[optimum] = true;
    while (!stack.empty()) {
        const ArmIndex v = stack.back();
        stack.pop_back();
        for (ArmIndex u : adjacency_[v]) {
            if (!reached[u] && means[u] < means[v]) {
                reached[u] = true;
                stack.push_back(u);
            }
        }
    }
    for (ArmIndex a = 0; a < arm_count(); ++a) {
        if (!reached[a]) report.offending_arms.push_back(a);
    }
    if (!report.offending_arms.empty()) {
        report.ok = false;
        std::ostringstream os;
        os << "no strictly increasing path to arm " << optimum << " from arm(s)";
        for (ArmIndex a : report.offending_arms) os << ' ' << a;
        report.message = os.str();
    }
    return report;
}

UnimodalGraph line_graph(std::size_t n) {
    if (n < 2) throw ParameterError("line graph needs at least 2 arms");
    std::vector<Edge> edges;
    for (ArmIndex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return UnimodalGraph(n, edges);
}

UnimodalGraph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (ArmIndex i = 0; i < n; ++i) {
        for (ArmIndex j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return UnimodalGraph(n, edges);
}

UnimodalGraph star_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (ArmIndex i = 1; i < n; ++i) edges.emplace_back(0, i);
    return UnimodalGraph(n, edges);
}

}  // namespace imedub
