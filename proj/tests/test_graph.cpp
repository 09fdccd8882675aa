#include <random>
#include <vector>

#include "doctest.h"

#include "imedub/errors.hpp"
#include "imedub/graph.hpp"
#include "oracles.hpp"

using namespace imedub;

namespace {

std::vector<ArmIndex> as_vector(std::span<const ArmIndex> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_SUITE("unimodal-graph") {

TEST_CASE("neighbors") {
    const auto line = line_graph(9);
    CHECK(as_vector(line.neighbors(0)) == std::vector<ArmIndex>{1});
    CHECK(as_vector(line.neighbors(4)) == std::vector<ArmIndex>{3, 5});
    CHECK(as_vector(line.neighbors(8)) == std::vector<ArmIndex>{7});
    CHECK(as_vector(complete_graph(3).neighbors(1)) == std::vector<ArmIndex>{0, 2});
    CHECK_THROWS_AS(line.neighbors(9), ParameterError);
}

TEST_CASE("max_degree") {
    CHECK(line_graph(9).max_degree() == 2);
    CHECK(complete_graph(5).max_degree() == 4);
    CHECK(star_graph(6).max_degree() == 5);
}

TEST_CASE("line_graph") {
    CHECK(line_graph(2).edges() == std::vector<Edge>{{0, 1}});
    CHECK(line_graph(3).edges() == std::vector<Edge>{{0, 1}, {1, 2}});
    const auto nine = line_graph(9);
    CHECK(nine.edges().size() == 8);
    CHECK(nine.max_degree() == 2);
    CHECK_THROWS_AS(line_graph(1), ParameterError);
    CHECK_THROWS_AS(line_graph(0), ParameterError);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(UnimodalGraph(3, {{0, 0}, {1, 2}}), ParameterError);
    CHECK_THROWS_AS(UnimodalGraph(3, {{0, 3}}), ParameterError);
    CHECK_THROWS_AS(UnimodalGraph(4, {{0, 1}, {2, 3}}), ParameterError);
    CHECK_THROWS_AS(UnimodalGraph(0, std::span<const Edge>{}), ParameterError);
    // Duplicates and orientation are normalised.
    const UnimodalGraph g(3, {{1, 0}, {0, 1}, {2, 1}});
    CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
}

TEST_CASE("validate_unimodal examples") {
    const auto nine = line_graph(9);
    CHECK(nine.validate_unimodal(oracle::experiment_means()).ok);

    const auto bad = line_graph(3).validate_unimodal(std::vector<double>{0.3, 0.1, 0.3});
    CHECK_FALSE(bad.ok);
    CHECK(bad.offending_arms == std::vector<ArmIndex>{0, 2});

    const std::vector<double> two_peaks{0.1, 0.3, 0.2, 0.4, 0.1};
    CHECK_FALSE(oracle::unimodal_by_paths(5, line_graph(5).edges(), two_peaks));
    const auto local_max = line_graph(5).validate_unimodal(two_peaks);
    CHECK_FALSE(local_max.ok);
    CHECK(local_max.offending_arms == std::vector<ArmIndex>{0, 1});

    CHECK_THROWS_AS(nine.validate_unimodal(std::vector<double>{0.1, 0.2}), ParameterError);
}

TEST_CASE("validate_unimodal tolerates ties off the increasing paths") {
    // Arms 1 and 3 share a mean but each climbs to arm 2.
    CHECK(line_graph(5).validate_unimodal(std::vector<double>{0.1, 0.2, 0.5, 0.2, 0.1}).ok);
    // A plateau blocks the strict climb.
    CHECK_FALSE(line_graph(4).validate_unimodal(std::vector<double>{0.1, 0.2, 0.2, 0.5}).ok);
}

TEST_CASE("neighbor relation is symmetric") {
    for (const auto& edges : oracle::connected_graphs(5)) {
        const UnimodalGraph g(5, edges);
        for (ArmIndex a = 0; a < 5; ++a) {
            for (ArmIndex b : g.neighbors(a)) {
                CHECK(g.adjacent(b, a));
                CHECK(a != b);
            }
        }
    }
}

TEST_CASE("validate_unimodal agrees with path enumeration on random small graphs") {
    std::mt19937_64 rng(20211);
    std::vector<std::vector<std::vector<Edge>>> graphs(7);
    for (std::size_t n = 2; n <= 6; ++n) graphs[n] = oracle::connected_graphs(n);

    int accepted = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        const auto& edges = graphs[n][rng() % graphs[n].size()];
        std::vector<double> means(n);
        // Few distinct levels, so ties and plateaus are common.
        for (auto& m : means) m = 0.1 * static_cast<double>(1 + rng() % 6);
        const UnimodalGraph g(n, edges);
        const bool expected = oracle::unimodal_by_paths(n, edges, means);
        CHECK(g.validate_unimodal(means).ok == expected);
        accepted += expected;
    }
    // Both outcomes must actually be exercised.
    CHECK(accepted > 50);
    CHECK(accepted < 950);
}

TEST_CASE("distances_from") {
    const auto d = line_graph(9).distances_from(4);
    CHECK(d == std::vector<std::size_t>{4, 3, 2, 1, 0, 1, 2, 3, 4});
}

}  // TEST_SUITE
