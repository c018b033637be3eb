#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "topictax/query_subgraph.hpp"

using namespace topictax;

namespace {

TopicGraph graph_from_matrix(const std::vector<std::vector<std::int64_t>>& matrix,
                             const std::vector<std::string>& names) {
    TopicSet topics = testutil::topic_set_from(names);
    return build_graph(topics, testutil::counts_from_matrix(matrix),
                       GraphConfig{0.0, 0.0});
}

}  // namespace

TEST_CASE("membership applies all threshold conditions") {
    // Query 0 with three neighbors; neighbor 2 fails the degree floor.
    std::vector<std::vector<std::int64_t>> m(4, std::vector<std::int64_t>(4, 0));
    auto set = [&](int i, int j, std::int64_t c) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
        m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
    };
    set(0, 1, 6);
    set(0, 2, 6);
    set(0, 3, 6);
    set(1, 3, 2);
    const TopicGraph g = graph_from_matrix(m, testutil::topic_names(4));
    // strengths: 0 -> 18, 1 -> 8, 2 -> 6, 3 -> 8; degrees: 3, 2, 1, 2.
    QueryConfig cfg;
    cfg.r_max = 3;
    cfg.k_min = 2;
    cfg.s_min = 7;
    const Subgraph sub = select_subgraph(g, 0, cfg);
    CHECK(sub.vertices == std::vector<std::int32_t>{1, 3});

    // Vertex 2 has degree 1 = k_min - 1 under a higher floor: excluded even
    // though its rank is 1.
    QueryConfig strict = cfg;
    strict.k_min = 2;
    strict.s_min = 1;
    const Subgraph sub2 = select_subgraph(g, 0, strict);
    CHECK(sub2.vertices == std::vector<std::int32_t>{1, 3});
}

TEST_CASE("rank-1 neighbor with passing thresholds is included") {
    std::vector<std::vector<std::int64_t>> m(3, std::vector<std::int64_t>(3, 0));
    m[0][1] = m[1][0] = 5;
    m[0][2] = m[2][0] = 4;
    m[1][2] = m[2][1] = 2;
    const TopicGraph g = graph_from_matrix(m, testutil::topic_names(3));
    // strengths: 9, 7, 6. For t_i = 1 the only stronger co-occurring topic
    // is the query 0, so rank(0|1) = 1; vertex 2 fails the strength floor.
    QueryConfig cfg;
    cfg.r_max = 1;
    cfg.k_min = 1;
    cfg.s_min = 7;
    const Subgraph sub = select_subgraph(g, 0, cfg);
    CHECK(sub.vertices == std::vector<std::int32_t>{1});
    CHECK(sub.query == g.topics[0]);
}

TEST_CASE("query vertex never joins its own subgraph") {
    std::mt19937 rng(3);
    const auto matrix = testutil::random_count_matrix(rng, 15, 0.5, 9);
    const TopicGraph g = graph_from_matrix(matrix, testutil::topic_names(15));
    QueryConfig cfg;
    cfg.k_min = 1;
    cfg.s_min = 1;
    cfg.r_max = 10;
    for (int q = 0; q < 15; ++q) {
        const Subgraph sub = select_subgraph(g, q, cfg);
        for (std::int32_t v : sub.vertices) CHECK(v != q);
    }
}

TEST_CASE("membership equals the exhaustive filter on random fixtures") {
    std::mt19937 rng(57);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 40;
        const auto matrix = testutil::random_count_matrix(rng, n, 0.25, 9);
        const TopicGraph g = graph_from_matrix(matrix, testutil::topic_names(n));
        QueryConfig cfg;
        cfg.r_max = 2 + trial % 3;
        cfg.k_min = 3 + trial % 4;
        cfg.s_min = 10 + trial;
        cfg.max_vertices = 0;  // uncapped
        std::uniform_int_distribution<int> pick(0, n - 1);
        const int q = pick(rng);
        const Subgraph sub = select_subgraph(g, q, cfg);
        const auto expected = oracle::subgraph_reference(
            matrix, g.strength, q, cfg.r_max, cfg.k_min, cfg.s_min);
        REQUIRE(sub.vertices.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(sub.vertices[i] == expected[i]);
        }
        // Induced-edge property.
        for (std::int32_t e : sub.edge_indices) {
            const auto& edge = g.edges[static_cast<std::size_t>(e)];
            CHECK(std::count(sub.vertices.begin(), sub.vertices.end(), edge.u) == 1);
            CHECK(std::count(sub.vertices.begin(), sub.vertices.end(), edge.v) == 1);
        }
    }
}

TEST_CASE("tightening thresholds never adds members") {
    std::mt19937 rng(91);
    const auto matrix = testutil::random_count_matrix(rng, 30, 0.3, 9);
    const TopicGraph g = graph_from_matrix(matrix, testutil::topic_names(30));
    QueryConfig loose;
    loose.r_max = 5;
    loose.k_min = 2;
    loose.s_min = 5;
    loose.max_vertices = 0;
    for (int q = 0; q < 30; ++q) {
        const Subgraph base = select_subgraph(g, q, loose);
        for (int variant = 0; variant < 3; ++variant) {
            QueryConfig tight = loose;
            if (variant == 0) tight.r_max = 2;
            if (variant == 1) tight.k_min = 5;
            if (variant == 2) tight.s_min = 15;
            const Subgraph smaller = select_subgraph(g, q, tight);
            for (std::int32_t v : smaller.vertices) {
                CHECK(std::count(base.vertices.begin(), base.vertices.end(), v) == 1);
            }
        }
    }
}

TEST_CASE("size cap keeps the strongest query associations") {
    std::vector<std::vector<std::int64_t>> m(6, std::vector<std::int64_t>(6, 0));
    auto set = [&](int i, int j, std::int64_t c) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
        m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
    };
    set(0, 1, 9);
    set(0, 2, 7);
    set(0, 3, 5);
    set(0, 4, 3);
    set(0, 5, 1);
    set(1, 2, 1);
    const TopicGraph g = graph_from_matrix(m, testutil::topic_names(6));
    QueryConfig cfg;
    cfg.r_max = 10;
    cfg.k_min = 1;
    cfg.s_min = 1;
    cfg.max_vertices = 2;
    const Subgraph sub = select_subgraph(g, 0, cfg);
    CHECK(sub.vertices == std::vector<std::int32_t>{1, 2});
}

TEST_CASE("unknown single words expand through similar topics") {
    const std::vector<std::string> names = {
        "database system",     "relational database", "large database",
        "database query optimization", "neural network",
    };
    std::vector<std::vector<std::int64_t>> m(5, std::vector<std::int64_t>(5, 0));
    auto set = [&](int i, int j, std::int64_t c) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
        m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
    };
    set(0, 1, 8);
    set(0, 2, 6);
    set(1, 2, 5);
    set(0, 3, 4);
    set(1, 3, 3);
    set(2, 4, 1);
    const TopicGraph g = graph_from_matrix(m, names);

    QueryConfig cfg;
    cfg.r_max = 5;
    cfg.k_min = 1;
    cfg.s_min = 1;
    cfg.expansion_k = 3;
    const Subgraph sub = expand_query(g, "database", cfg);
    // Jaccard 1/2 for the three two-word database topics; the four-word
    // topic scores 1/4 and misses the cut.
    REQUIRE(sub.expansion.size() == 3);
    CHECK(std::count(sub.expansion.begin(), sub.expansion.end(),
                     "database system") == 1);
    CHECK(std::count(sub.expansion.begin(), sub.expansion.end(),
                     "relational database") == 1);
    CHECK(std::count(sub.expansion.begin(), sub.expansion.end(),
                     "large database") == 1);
    CHECK(!sub.query_id.has_value());
    // Union of member sets with no duplicates.
    for (std::size_t i = 1; i < sub.vertices.size(); ++i) {
        CHECK(sub.vertices[i] > sub.vertices[i - 1]);
    }

    CHECK_THROWS(expand_query(g, "astrophysics", cfg));
    CHECK_THROWS(expand_query(g, "database system", cfg));
}

TEST_CASE("expansion with a single sharing topic degenerates to its subgraph") {
    const std::vector<std::string> names = {"neural network", "query expansion",
                                            "graph model"};
    std::vector<std::vector<std::int64_t>> m(3, std::vector<std::int64_t>(3, 0));
    m[0][1] = m[1][0] = 4;
    m[0][2] = m[2][0] = 3;
    m[1][2] = m[2][1] = 1;
    const TopicGraph g = graph_from_matrix(m, names);
    QueryConfig cfg;
    cfg.r_max = 5;
    cfg.k_min = 1;
    cfg.s_min = 1;
    cfg.expansion_k = 3;
    const Subgraph expanded = expand_query(g, "neural", cfg);
    REQUIRE(expanded.expansion == std::vector<std::string>{"neural network"});
    const Subgraph direct = select_subgraph(g, 0, cfg);
    CHECK(expanded.vertices == direct.vertices);
}
