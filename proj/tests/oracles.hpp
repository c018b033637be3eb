// Independent brute-force reference implementations used to derive expected
// values. These deliberately use the most direct computation available and
// share no code with the library internals they check.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "topictax/corpus.hpp"
#include "topictax/topic_extraction.hpp"

namespace oracle {

struct NgramInfo {
    std::vector<std::string> tokens;
    std::int64_t raw = 0;
    std::int64_t discounted = 0;
};

// Full extraction reference: sliding-window enumeration, interval-based
// containment discounting, lexicographic merge.
struct ExtractionResult {
    std::map<std::string, NgramInfo> bigrams;
    std::map<std::string, NgramInfo> trigrams;
    std::map<std::string, NgramInfo> fourgrams;
    std::vector<std::string> merged;  // final topic list in id order
};
ExtractionResult extract_reference(const std::vector<topictax::TokenSequence>& titles,
                                   const topictax::WordSet& stopwords,
                                   const topictax::WordSet& prepositions,
                                   int min_count);

// Document-level counting reference over the merged topic list: naive
// token-by-token containment scans and a quadratic pair loop.
struct CountingResult {
    std::vector<std::int64_t> doc_freq;                       // by topic id
    std::map<std::pair<int, int>, std::int64_t> pair_counts;  // i < j
};
CountingResult count_reference(const std::vector<topictax::Document>& documents,
                               const std::vector<std::string>& topics);

// Dense strength/degree/rank/weight recomputation from a raw count matrix.
struct GraphReference {
    std::vector<std::int64_t> strength;
    std::vector<int> degree;
    // weight by (i, j) with i < j for each nonzero pair
    std::map<std::pair<int, int>, double> weight;
};
GraphReference graph_reference(const std::vector<std::vector<std::int64_t>>& counts,
                               const std::vector<std::string>& topics,
                               double lambda1, double lambda2);

// Exhaustive rank: 1 + |{h : s_h > s_j, counts[h][j] > counts[i][j]}|.
int rank_reference(const std::vector<std::vector<std::int64_t>>& counts,
                   const std::vector<std::int64_t>& strengths, int t_i, int t_j);

// Exhaustive subgraph membership filter.
std::vector<int> subgraph_reference(const std::vector<std::vector<std::int64_t>>& counts,
                                    const std::vector<std::int64_t>& strengths,
                                    int t_0, int r_max, int k_min,
                                    std::int64_t s_min);

// Exhaustive balanced two-way minimum cut; n <= 20. Returns the best cut, or
// a negative value when no nonempty split meets the balance bound.
double min_balanced_bisection(const std::vector<double>& vertex_weight,
                              const std::vector<std::vector<double>>& edge_weight,
                              double balance_epsilon);

// O(n^3) centroid-linkage recomputation: every step recomputes all centroids
// from member lists and rescans all pair distances. Returns, per merge, the
// sorted member sets of the two clusters merged.
struct HacStep {
    std::vector<int> first_members;
    std::vector<int> second_members;
};
std::vector<HacStep> hac_reference(const std::vector<std::vector<double>>& vectors,
                                   const std::vector<std::int64_t>& strengths,
                                   const std::vector<std::string>& topics,
                                   double tie_epsilon);

// Adjusted Rand index between two labelings.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace oracle
