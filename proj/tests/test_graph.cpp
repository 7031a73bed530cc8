#include "prgame/graph.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

using namespace prgame;

TEST_CASE("parse edge list") {
    Graph g = parse_graph("a b\nb c");
    CHECK(g.n() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.label(0) == "a");
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("parse deduplicates symmetric edges") {
    Graph g = parse_graph("0 1\n1 0");
    CHECK(g.n() == 2);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("parse rejects self-loop with line number") {
    CHECK_THROWS_AS(parse_graph("a b\nx x"), ParseError);
    try {
        parse_graph("a b\nx x");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("parse rejects empty and malformed documents") {
    CHECK_THROWS_AS(parse_graph(""), ParseError);
    CHECK_THROWS_AS(parse_graph("# only a comment\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("a b c\n"), ParseError);
}

TEST_CASE("comments, blanks, isolated vertices") {
    Graph g = parse_graph("# header\n\na b\n\nc\n");
    CHECK(g.n() == 3);
    CHECK(g.degree(2) == 0);
}

TEST_CASE("serialize round-trips generated graphs") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g;
        switch (trial % 5) {
            case 0: g = make_complete(2 + trial % 6); break;
            case 1: g = make_path(1 + trial % 7); break;
            case 2: g = make_cycle(3 + trial % 6); break;
            case 3: g = make_random_tree(2 + trial % 9, rng()); break;
            default: g = make_gnp(1 + trial % 9, 0.4, rng()); break;
        }
        Graph back = parse_graph(serialize_graph(g));
        CHECK(back == g);
    }
}

TEST_CASE("components after removal: star") {
    Graph s3 = make_star(3);
    auto dec = components_after_removal(s3, 0);
    REQUIRE(dec.components.size() == 3);
    for (const auto& c : dec.components) {
        CHECK(c.members.size() == 1);
        CHECK(c.members == c.attach);
    }
}

TEST_CASE("components after removal: complete graph stays whole") {
    Graph k4 = make_complete(4);
    auto dec = components_after_removal(k4, 1);
    REQUIRE(dec.components.size() == 1);
    CHECK(dec.components[0].members == std::vector<int>{0, 2, 3});
    CHECK(dec.components[0].attach == std::vector<int>{0, 2, 3});
}

TEST_CASE("components after removal: path splits") {
    Graph p4 = make_path(4);  // 0-1-2-3
    auto dec = components_after_removal(p4, 1);
    REQUIRE(dec.components.size() == 2);
    CHECK(dec.components[0].members == std::vector<int>{0});
    CHECK(dec.components[0].attach == std::vector<int>{0});
    CHECK(dec.components[1].members == std::vector<int>{2, 3});
    CHECK(dec.components[1].attach == std::vector<int>{2});
}

TEST_CASE("removal decomposition partitions the rest of the graph") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = make_gnp(8, 0.35, rng(), true);
        for (int v = 0; v < g.n(); ++v) {
            auto dec = components_after_removal(g, v);
            std::size_t total = 0;
            std::set<int> attach_union;
            for (const auto& c : dec.components) {
                total += c.members.size();
                attach_union.insert(c.attach.begin(), c.attach.end());
            }
            CHECK(total == static_cast<std::size_t>(g.n()) - 1);
            std::set<int> nbrs(g.neighbors(v).begin(), g.neighbors(v).end());
            CHECK(attach_union == nbrs);
        }
    }
}

TEST_CASE("k parameter") {
    CHECK(k_parameter(make_path(5)).k == 1);
    CHECK(k_parameter(make_random_tree(20, 99)).k == 1);
    CHECK(k_parameter(make_complete(4)).k == 3);
    // two triangles sharing a cut vertex
    Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}});
    CHECK(k_parameter(g).k == 2);
    CHECK(k_parameter(g).blocks.size() == 2);
}

TEST_CASE("every edge lands in exactly one block") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        Graph g = make_gnp(9, 0.3, rng());
        auto info = k_parameter(g);
        std::set<std::pair<int, int>> covered;
        std::size_t total = 0;
        for (const auto& block : info.blocks) {
            total += block.size();
            covered.insert(block.begin(), block.end());
        }
        CHECK(total == g.edge_count());
        CHECK(covered.size() == g.edge_count());
    }
}

TEST_CASE("swap automorphism checks") {
    Graph c4 = make_cycle(4);
    CHECK(check_swap_automorphism(c4, {2, 3, 0, 1}, 0, 2));
    CHECK_FALSE(check_swap_automorphism(c4, {0, 1, 2, 3}, 0, 2));
    Graph p3 = make_path(3);
    CHECK(check_swap_automorphism(p3, {2, 1, 0}, 0, 2));
    CHECK_THROWS_AS(check_swap_automorphism(p3, {0, 0, 1}, 0, 2), std::invalid_argument);
}

TEST_CASE("swap automorphism invariant under relabelling") {
    Graph c6 = make_cycle(6);
    std::vector<int> sigma = {3, 4, 5, 0, 1, 2};
    CHECK(check_swap_automorphism(c6, sigma, 0, 3));
    // relabel vertices by a random permutation and conjugate sigma
    std::mt19937_64 rng(5);
    std::vector<int> relab(6);
    for (int i = 0; i < 6; ++i) relab[i] = i;
    std::shuffle(relab.begin(), relab.end(), rng);
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : c6.edges()) edges.emplace_back(relab[u], relab[v]);
    Graph shuffled = Graph::from_edges(6, edges);
    std::vector<int> sigma2(6);
    for (int i = 0; i < 6; ++i) sigma2[relab[i]] = relab[sigma[i]];
    CHECK(check_swap_automorphism(shuffled, sigma2, relab[0], relab[3]));
}

TEST_CASE("generators") {
    CHECK(make_complete(4).edge_count() == 6);
    CHECK(make_path(3).edge_count() == 2);
    CHECK(make_star(4).degree(0) == 4);
    Graph t = make_random_tree(9, 42);
    CHECK(t.edge_count() == 8);
    CHECK(t.is_tree());
    CHECK(make_random_tree(9, 42) == t);  // deterministic
    Graph g = make_gnp(12, 0.3, 17, true);
    CHECK(g.is_connected());
    CHECK_THROWS_AS(make_gnp(5, 1.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_cycle(2), std::invalid_argument);
}

TEST_CASE("graph editing") {
    Graph p3 = make_path(3);
    Graph c3 = p3.with_edge(0, 2);
    CHECK(c3.edge_count() == 3);
    CHECK(c3.is_complete());
    Graph cut = c3.without_edges_of(1, {0});
    CHECK(cut.edge_count() == 2);
    CHECK(cut.has_edge(0, 1));
    CHECK(cut.has_edge(0, 2));
    CHECK_FALSE(cut.has_edge(1, 2));
    CHECK_THROWS_AS(c3.without_edges_of(1, {5}), std::invalid_argument);
}

TEST_CASE("canonical hash tracks the edge set") {
    Graph a = make_path(4);
    Graph b = make_path(4);
    CHECK(a.canonical_hash() == b.canonical_hash());
    CHECK(a.canonical_hash() != a.with_edge(0, 3).canonical_hash());
}

TEST_CASE("label order is numeric-aware") {
    Graph g = parse_graph("10 2\n2 z\nz abc");
    auto order = label_order(g);
    CHECK(g.label(order[0]) == "2");
    CHECK(g.label(order[1]) == "10");
    CHECK(g.label(order[2]) == "abc");
    CHECK(g.label(order[3]) == "z");
}
