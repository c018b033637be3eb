#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "topictax/query_subgraph.hpp"
#include "topictax/taxonomy.hpp"

namespace topictax {

struct PartitionConfig {
    int alpha = 200;                 // partition-count numerator cap
    int beta = 20;                   // vertices per partition
    int min_partition_size = 5;      // recursion stops below this size
    double balance_epsilon = 0.2;    // allowed strength imbalance
    int coarsen_stop = 0;            // 0 = auto: max(30, 4k)
    std::uint64_t seed = 1;
};

// Working graph for partitioning: vertex weights are topic strengths,
// adjacency carries edge weights in both directions.
struct WeightedGraph {
    std::vector<double> vertex_weight;
    std::vector<std::vector<std::pair<std::int32_t, double>>> adj;

    std::int32_t n() const { return static_cast<std::int32_t>(vertex_weight.size()); }
    void add_vertex(double weight);
    void add_edge(std::int32_t u, std::int32_t v, double w);
    double total_vertex_weight() const;
};

struct PartitionAssignment {
    std::vector<int> part;           // vertex -> part index in [0, k)
    int k = 1;
    bool balance_violated = false;   // no assignment met the strength cap
    bool spectral_fallback = false;  // eigensolver failed to converge somewhere
};

// Number of subpartitions for a partition of the given size:
// floor(size / beta) when size < alpha, else alpha / beta; at least 1.
int num_partitions(std::int64_t size, const PartitionConfig& config);

// Total weight of edges whose endpoints lie in different parts.
double edge_cut(const WeightedGraph& graph, const std::vector<int>& part);

struct CoarseLevel {
    WeightedGraph graph;
    // Maps the previous (finer) level's vertices onto this graph; empty for
    // the first level.
    std::vector<std::int32_t> fine_to_coarse;
};

// Heavy-edge-matching coarsening. Level 0 is the input graph; successive
// levels merge matched pairs, summing strengths and parallel edge weights.
// Stops at `stop` vertices or when a level shrinks by less than 10%.
std::vector<CoarseLevel> coarsen(const WeightedGraph& graph,
                                 const PartitionConfig& config, int stop);

// Recursive spectral bisection of the (coarsest) graph: order vertices by
// Fiedler value and split where cumulative strength best matches the sub-k
// ratio. Disconnected graphs are split along component lines first.
PartitionAssignment initial_partition(const WeightedGraph& graph, int k,
                                      const PartitionConfig& config);

// Greedy boundary refinement: repeatedly applies the balanced move with the
// largest positive cut gain. Never increases the edge-cut.
void refine(const WeightedGraph& graph, int k, const PartitionConfig& config,
            std::vector<int>& part);

// coarsen -> initial_partition -> project + refine per level.
PartitionAssignment partition_kway(const WeightedGraph& graph, int k,
                                   const PartitionConfig& config);

// The partition member with the highest total edge weight to other members;
// ties broken by vertex weight, then by name. Returns a graph vertex id.
std::int32_t select_label(const WeightedGraph& graph,
                          const std::vector<std::int32_t>& members,
                          const std::vector<std::string>& names);

// Recursively partitions the subgraph into a labeled taxonomy rooted at the
// query topic.
Taxonomy build_taxonomy(const Subgraph& subgraph, const PartitionConfig& config);

// As build_taxonomy, but also reports partition diagnostics.
struct TaxonomyResult {
    Taxonomy taxonomy;
    bool balance_violated = false;
    bool spectral_fallback = false;
    // Subgraph vertex ids per first-level partition, in child order.
    std::vector<std::vector<std::int32_t>> first_level_parts;
};
TaxonomyResult build_taxonomy_result(const Subgraph& subgraph,
                                     const PartitionConfig& config);

}  // namespace topictax
