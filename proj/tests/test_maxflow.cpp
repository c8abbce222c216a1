#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tgcut/error.hpp"
#include "tgcut/maxflow.hpp"

using namespace tgcut;

TEST_CASE("single arc s -> t") {
    FlowGraph g(2, 0, 1);
    g.add_arc(0, 1, 5.0);
    const auto r = max_flow(g);
    CHECK(r.flow == 5.0);
    CHECK(r.source_side == std::vector<bool>{true, false});
}

TEST_CASE("diamond") {
    // s=0 a=1 b=2 t=3
    FlowGraph g(4, 0, 3);
    g.add_arc(0, 1, 3);
    g.add_arc(0, 2, 2);
    g.add_arc(1, 3, 2);
    g.add_arc(2, 3, 3);
    const auto r = max_flow(g);
    CHECK(r.flow == 4.0);
    CHECK(r.cut_capacity == 4.0);
}

TEST_CASE("flow through interior arcs with back-tracking") {
    // classic case where a greedy path must be undone through a reverse arc
    FlowGraph g(6, 0, 5);
    g.add_arc(0, 1, 10);
    g.add_arc(0, 2, 10);
    g.add_arc(1, 2, 2);
    g.add_arc(1, 3, 4);
    g.add_arc(1, 4, 8);
    g.add_arc(2, 4, 9);
    g.add_arc(4, 3, 6);
    g.add_arc(3, 5, 10);
    g.add_arc(4, 5, 10);
    CHECK(max_flow(g).flow == 19.0);
    CHECK(oracle::brute_force_min_cut(g) == 19.0);
}

TEST_CASE("max flow equals brute-force minimum cut on random small graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t inner = 1 + rng() % 8;
        const std::size_t nodes = inner + 2;
        const std::size_t s = rng() % nodes;
        std::size_t t = rng() % nodes;
        while (t == s) t = rng() % nodes;
        FlowGraph g(nodes, s, t);
        const std::size_t arcs = rng() % (nodes * nodes);
        for (std::size_t a = 0; a < arcs; ++a) {
            g.add_arc(rng() % nodes, rng() % nodes, static_cast<double>(rng() % 11));
        }
        const auto r = max_flow(g);
        const double expected = oracle::brute_force_min_cut(g);
        CHECK(r.flow == expected);
        CHECK(r.cut_capacity == expected);
        CHECK(r.source_side[s]);
        CHECK(!r.source_side[t]);
    }
}

TEST_CASE("identical inputs give identical partitions") {
    std::mt19937_64 rng(21);
    FlowGraph g(12, 10, 11);
    for (int a = 0; a < 60; ++a) g.add_arc(rng() % 12, rng() % 12, static_cast<double>(rng() % 7));
    const auto a = max_flow(g);
    const auto b = max_flow(g);
    CHECK(a.flow == b.flow);
    CHECK(a.source_side == b.source_side);
}

TEST_CASE("an INF arc crossing the cut is reported") {
    // with a sentinel this small the cheapest cut has to cut the INF arc
    FlowGraph g(3, 0, 2, 1.0);
    g.add_inf_arc(0, 1);
    g.add_arc(1, 2, 5.0);
    CHECK_THROWS_AS(max_flow(g), InternalError);
}

TEST_CASE("invalid arcs are rejected") {
    FlowGraph g(3, 0, 2);
    CHECK_THROWS_AS(g.add_arc(0, 7, 1.0), ArgumentError);
    CHECK_THROWS_AS(g.add_arc(0, 1, -1.0), ArgumentError);
    CHECK_THROWS_AS(g.add_inf_arc(0, 1), InternalError);  // no sentinel configured
    CHECK_THROWS_AS(FlowGraph(3, 1, 1), ArgumentError);
}
