#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "topictax/topic_extraction.hpp"

namespace topictax {

// Relative weights of the rank boost and the lexical-similarity boost in
// the edge weight. Both are set heuristically; lambda2 = 0 gives the
// co-occurrence-only ablation.
struct GraphConfig {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
};

// Undirected weighted topic association graph. One vertex per topic with
// strength s_i (sum of incident co-occurrence counts) and degree k_i; one
// edge per co-occurring pair, stored once with u < v.
struct TopicGraph {
    struct Edge {
        std::int32_t u;
        std::int32_t v;
        std::int64_t count;
        double weight;
    };

    std::vector<std::string> topics;
    std::vector<std::int64_t> doc_freq;
    std::vector<std::int64_t> strength;
    std::vector<std::int32_t> degree;
    std::vector<Edge> edges;                           // sorted by (u, v)
    std::vector<std::vector<std::int32_t>> incident;   // vertex -> edge indices
    std::unordered_map<std::string, std::int32_t> index;
    GraphConfig config;

    std::size_t num_vertices() const { return topics.size(); }
    std::size_t num_edges() const { return edges.size(); }

    // -1 if absent
    std::int32_t id_of(const std::string& topic) const {
        auto it = index.find(topic);
        return it == index.end() ? -1 : it->second;
    }

    // 0 when no edge exists.
    std::int64_t count_between(std::int32_t i, std::int32_t j) const;
    // -1 when no edge exists.
    std::int32_t edge_between(std::int32_t i, std::int32_t j) const;

    // rank(t_i | t_j) over the graph's own counts and strengths.
    int conditional_rank(std::int32_t t_i, std::int32_t t_j) const;
};

// Sum of all co-occurrence counts of one topic. Errors on unknown ids.
std::int64_t compute_strength(const CooccurrenceCounts& counts, std::int32_t topic);

// rank(t_i | t_j): one plus the number of topics t_h with strength above
// s_j whose count with t_j exceeds count(t_i, t_j). The conditional
// probability denominator is shared across competitors, so raw counts are
// compared. Errors when count(t_i, t_j) is zero.
int conditional_rank(const CooccurrenceCounts& counts,
                     const std::vector<std::int64_t>& strengths, std::int32_t t_i,
                     std::int32_t t_j);

// Jaccard similarity of the word-token sets of two topic strings.
double jaccard(const std::string& t_i, const std::string& t_j);

// w_ij = [1 + lambda1 * 1(rank(t_i|t_j)=1 or rank(t_j|t_i)=1)
//           + lambda2 * jac(t_i, t_j)] * count(t_i, t_j)
double edge_weight(std::int32_t t_i, std::int32_t t_j,
                   const CooccurrenceCounts& counts,
                   const std::vector<std::int64_t>& strengths,
                   const std::vector<std::string>& topics,
                   const GraphConfig& config);

TopicGraph build_graph(const TopicSet& topics, const CooccurrenceCounts& counts,
                       const GraphConfig& config);

// Two-section text file. Header line "H<TAB>lambda1<TAB>lambda2" records the
// config so cached graphs are never reused under different weights; vertex
// lines "V<TAB>id<TAB>strength<TAB>degree"; edge lines
// "E<TAB>i<TAB>j<TAB>count<TAB>weight" with the weight at full precision.
void save_graph(const TopicGraph& graph, const std::filesystem::path& path);
// Topic strings and document frequencies come from the topics file.
TopicGraph load_graph(const std::filesystem::path& path, const TopicSet& topics);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace topictax
