#include <stdexcept>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

#include "ergm/graph.hpp"

using namespace ergm;

TEST_CASE("empty graphs") {
    CHECK(GraphState::empty(3).edge_count() == 0);
    CHECK(GraphState::empty(1).edge_count() == 0);
    CHECK(pair_count(1) == 0);
    auto g = GraphState::empty(5);
    CHECK(pair_count(5) == 10);
    for (std::size_t i = 1; i <= 5; ++i)
        for (std::size_t j = i + 1; j <= 5; ++j) CHECK_FALSE(g.has_edge(i, j));
}

TEST_CASE("complete graphs") {
    CHECK(GraphState::complete(4).edge_count() == 6);
    CHECK(GraphState::complete(2).edge_count() == 1);
    CHECK(GraphState::complete(10).edge_count() == 45);
    CHECK(GraphState::complete(130).edge_count() == pair_count(130));
}

TEST_CASE("set_edge") {
    auto g = GraphState::empty(3);
    CHECK(g.set_edge(1, 2, true));
    CHECK(g.edge_count() == 1);
    CHECK_FALSE(g.set_edge(1, 2, true));
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(2, 1));
    g.set_edge(2, 1, false);
    CHECK(g.edge_count() == 0);
    CHECK_THROWS_AS(g.set_edge(1, 1, true), std::invalid_argument);
    CHECK_THROWS_AS(g.set_edge(0, 1, true), std::out_of_range);
    CHECK_THROWS_AS(g.has_edge(1, 4), std::out_of_range);
}

TEST_CASE("edge ids round-trip through the linear index") {
    for (std::size_t n : {2u, 3u, 7u, 70u}) {
        std::size_t expected = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = i + 1; j <= n; ++j) {
                const auto e = EdgeId::from_vertices(n, j, i);
                CHECK(e.index() == expected);
                const auto back = EdgeId::from_index(n, expected);
                CHECK(back.first() == i);
                CHECK(back.second() == j);
                ++expected;
            }
        }
        CHECK(expected == pair_count(n));
    }
    EdgeTable t(6);
    for (std::size_t k = 0; k < t.size(); ++k) {
        auto [a, b] = t.endpoints(k);
        CHECK(EdgeId::from_vertices(6, a + 1, b + 1).index() == k);
    }
}

TEST_CASE("hamming distance") {
    auto x = GraphState::empty(4);
    CHECK(hamming_distance(x, x) == 0);
    CHECK(hamming_distance(x, GraphState::complete(4)) == 6);
    auto y = x;
    y.set_edge(2, 3, true);
    CHECK(hamming_distance(x, y) == 1);
    CHECK_THROWS_AS(hamming_distance(x, GraphState::empty(5)), std::invalid_argument);
}

TEST_CASE("subconfiguration examples") {
    auto x = GraphState::empty(4);
    auto k = GraphState::complete(4);
    std::mt19937_64 gen(7);
    auto r = testing::random_graph(4, 0.5, gen);
    CHECK(is_subconfiguration(x, r));
    CHECK(is_subconfiguration(r, k));
    auto a = x, b = x;
    a.set_edge(1, 2, true);
    b.set_edge(1, 3, true);
    CHECK_FALSE(is_subconfiguration(a, b));
    CHECK_FALSE(is_subconfiguration(b, a));
}

TEST_CASE("property: hamming symmetric, zero iff equal") {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + gen() % 70;
        auto x = testing::random_graph(n, 0.4, gen);
        auto y = (t % 5 == 0) ? x : testing::random_graph(n, 0.4, gen);
        CHECK(hamming_distance(x, y) == hamming_distance(y, x));
        CHECK((hamming_distance(x, y) == 0) == (x == y));
    }
}

TEST_CASE("property: subconfiguration is a partial order") {
    std::mt19937_64 gen(12);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + gen() % 7;
        // Sparse-ish graphs so that comparable pairs actually occur.
        auto x = testing::random_graph(n, 0.2, gen);
        auto y = x, z = x;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j) {
                if (gen() % 3 == 0) y.set_edge(i, j, true);
                if (gen() % 2 == 0) z.set_edge(i, j, y.has_edge(i, j) || gen() % 4 == 0);
            }
        CHECK(is_subconfiguration(x, x));
        if (is_subconfiguration(x, y) && is_subconfiguration(y, x)) CHECK(x == y);
        if (is_subconfiguration(x, y) && is_subconfiguration(y, z)) CHECK(is_subconfiguration(x, z));
    }
}

TEST_CASE("property: flip and reversal restore the state") {
    std::mt19937_64 gen(13);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + gen() % 90;
        const auto x = testing::random_graph(n, 0.5, gen);
        auto y = x;
        auto [i, j] = testing::random_pair(n, gen);
        const bool before = y.has_edge(i, j);
        y.set_edge(i, j, !before);
        CHECK(y.edge_count() + (before ? 1 : 0) == x.edge_count() + (before ? 0 : 1));
        y.set_edge(i, j, before);
        CHECK(y == x);
        CHECK(y.edge_count() == x.edge_count());
    }
}

TEST_CASE("degrees and common neighbours") {
    std::mt19937_64 gen(14);
    const auto x = testing::random_graph(75, 0.3, gen);
    for (std::size_t a = 1; a <= 75; ++a) {
        std::size_t d = 0;
        for (std::size_t b = 1; b <= 75; ++b)
            if (a != b && x.has_edge(a, b)) ++d;
        CHECK(x.degree(a) == d);
    }
    std::size_t c = 0;
    for (std::size_t v = 1; v <= 75; ++v)
        if (v != 3 && v != 40 && x.has_edge(3, v) && x.has_edge(40, v)) ++c;
    CHECK(x.common_neighbours_raw(2, 39) == c);
}

TEST_CASE("mask round trip") {
    for (std::uint64_t m = 0; m < 64; ++m) {
        auto g = GraphState::from_mask(4, m);
        CHECK(g.to_mask() == m);
    }
    CHECK_THROWS(GraphState::from_mask(12, 0));
}

TEST_CASE("edge list format") {
    std::mt19937_64 gen(15);
    const auto x = testing::random_graph(17, 0.3, gen);
    std::stringstream ss;
    write_edge_list(ss, x);
    CHECK(ss.str().rfind("n=17\n", 0) == 0);
    CHECK(read_edge_list(ss) == x);

    std::istringstream in("# comment\nn=3\n2 1\n\n3 2\n");
    auto g = read_edge_list(in);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(1, 2));

    std::istringstream bad("n=3\n1 4\n");
    CHECK_THROWS(read_edge_list(bad));
    std::istringstream nohdr("1 2\n");
    CHECK_THROWS(read_edge_list(nohdr));
}
