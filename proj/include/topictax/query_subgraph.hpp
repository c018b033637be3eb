#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topictax/topic_graph.hpp"

namespace topictax {

// Thresholds controlling topic-specific subgraph selection.
struct QueryConfig {
    int r_max = 3;
    int k_min = 10;
    std::int64_t s_min = 20;
    int expansion_k = 3;
    int max_vertices = 200;
};

// The topic-specific subgraph G_0 for a query. The query vertex itself is
// never a member; edges are exactly those induced on the member set.
struct Subgraph {
    const TopicGraph* parent = nullptr;
    std::string query;
    std::optional<std::int32_t> query_id;      // empty for expanded queries
    std::vector<std::string> expansion;        // expansion topics when used
    std::vector<std::int32_t> vertices;        // sorted parent ids
    std::vector<std::int32_t> edge_indices;    // indices into parent->edges

    std::size_t size() const { return vertices.size(); }
};

// T_0 = topics co-occurring with t_0 whose rank(t_0 | t_i) <= r_max,
// degree >= k_min, strength >= s_min and strength < s_0. When the result
// exceeds max_vertices, the members with the highest count(t_0, t_i) are
// kept (ties by strength, then id).
Subgraph select_subgraph(const TopicGraph& graph, std::int32_t t_0,
                         const QueryConfig& config);

// For a term absent from the topic set: selects the expansion_k most
// similar topics (word-set Jaccard, ties by strength then topic string) and
// returns the union of their subgraphs under a pseudo-query.
Subgraph expand_query(const TopicGraph& graph, const std::string& term,
                      const QueryConfig& config);

// Subgraph over an explicit member list, used when the member set is fixed
// externally (gold-standard runs and synthetic fixtures).
Subgraph subgraph_from_topics(const TopicGraph& graph, const std::string& query,
                              const std::vector<std::int32_t>& members);

}  // namespace topictax
