#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "topictax/partitioner.hpp"
#include "topictax/query_subgraph.hpp"
#include "topictax/topic_graph.hpp"

namespace topictax {

// Every pipeline tunable in one place. Defaults match the owning modules;
// command-line flags override file values.
struct PipelineConfig {
    // extraction
    int min_count = 3;
    std::string stopwords_path;      // empty = built-in default list
    std::string prepositions_path;   // empty = built-in default list
    // graph weights
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    // subgraph selection
    int r_max = 3;
    int k_min = 10;
    std::int64_t s_min = 20;
    int expansion_k = 3;
    int max_vertices = 200;
    // partitioning
    int alpha = 200;
    int beta = 20;
    int min_partition_size = 5;
    double balance_epsilon = 0.2;
    int coarsen_stop = 0;            // 0 = automatic
    std::uint64_t seed = 1;

    GraphConfig graph_config() const { return {lambda1, lambda2}; }
    QueryConfig query_config() const {
        return {r_max, k_min, s_min, expansion_k, max_vertices};
    }
    PartitionConfig partition_config() const {
        return {alpha, beta, min_partition_size, balance_epsilon, coarsen_stop, seed};
    }

    // Flat JSON object; rejects unknown keys, naming the offender.
    static PipelineConfig load(const std::filesystem::path& path);
    std::string dump() const;
};

}  // namespace topictax
