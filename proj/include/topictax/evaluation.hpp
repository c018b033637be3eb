#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topictax/taxonomy.hpp"

namespace topictax {

// Per-judge relevance assessments of taxonomy topics. A topic judged
// semantically relevant (correctly placed under its parent) must itself be
// relevant.
struct Judgment {
    bool relevant = false;
    bool semantically_relevant = false;
};

struct JudgmentSet {
    // judge id -> topic -> judgment; ordered for deterministic reports
    std::map<std::string, std::unordered_map<std::string, Judgment>> by_judge;

    void add(const std::string& judge, const std::string& topic, bool relevant,
             bool semantically_relevant);

    // judge_id<TAB>topic<TAB>relevant{0,1}<TAB>semantically_relevant{0,1}
    static JudgmentSet load(const std::filesystem::path& path);
};

// Fraction of taxonomy topics judged relevant, averaged across judges.
// Every non-root node must be judged by at least one judge.
double precision(const JudgmentSet& judgments, const Taxonomy& taxonomy);

// Fraction of taxonomy topics that are relevant and placed under their
// semantically correct parent, averaged across judges. Never exceeds
// precision.
double semantic_precision(const JudgmentSet& judgments, const Taxonomy& taxonomy);

struct AgreementStats {
    double agreement = 0.0;  // fraction of identical labels
    double kappa = 0.0;      // chance-corrected, marginal-product expectation
};

// Inter-judge agreement over two parallel boolean label vectors.
AgreementStats agreement_and_kappa(const std::vector<bool>& a,
                                   const std::vector<bool>& b);

struct CategoryEdge {
    std::string parent;
    std::string child;
    std::string kind;  // "category" or "page"
};

// parent<TAB>child<TAB>kind lines.
std::vector<CategoryEdge> load_category_edges(const std::filesystem::path& path);

// Reference tree grown breadth-first from the root category to max_depth,
// tree-ified with the first-encountered parent (BFS expands children in
// lexicographic order). A node survives only when its topic is a candidate
// and its parent survived; dropped nodes take their subtrees with them.
Taxonomy build_gold_standard(const std::vector<CategoryEdge>& edges,
                             const std::string& root,
                             const std::unordered_set<std::string>& candidates,
                             int max_depth = 4);

// Gold-standard comparison. Exact credits a node whose taxonomy parent
// equals its gold parent; partial credits 1/(p*q) through the nearest
// common intermediate concept (the root alone never qualifies, but an
// exact match always scores 1). Denominators count all gold non-root
// nodes; the *_present variants restrict to nodes the taxonomy contains.
struct MatchReport {
    std::size_t gold_nodes = 0;
    std::size_t present_nodes = 0;
    double exact_fraction = 0.0;
    double partial_mean = 0.0;
    double exact_fraction_present = 0.0;
    double partial_mean_present = 0.0;
    std::vector<std::pair<std::string, double>> node_partial;  // per gold node
    std::vector<std::pair<std::string, bool>> node_exact;
};

MatchReport match_report(const Taxonomy& taxonomy, const Taxonomy& gold);
double exact_match(const Taxonomy& taxonomy, const Taxonomy& gold);
double partial_match(const Taxonomy& taxonomy, const Taxonomy& gold);

// Agglomerative centroid-linkage clustering baseline over per-topic
// document incidence vectors, with distance 1 - Pearson(centroids). The
// merge tree is emitted as a taxonomy under `root`: each merge attaches the
// losing cluster's label beneath the winning cluster's label. Merging with
// a singleton promotes the singleton; two multi-topic clusters keep the
// label of the stronger cluster.
struct HacOptions {
    std::string root = "root";
    double tie_epsilon = 1e-9;  // distances this close count as tied
};

struct HacMerge {
    std::int32_t first;   // cluster ids; initial clusters are 0..n-1
    std::int32_t second;
    double distance;
    std::int32_t merged;  // id of the new cluster
};

struct HacResult {
    Taxonomy taxonomy;
    std::vector<HacMerge> merges;
    bool constant_vector = false;  // a zero-variance centroid was seen
};

HacResult hac_baseline(const std::vector<std::string>& topics,
                       const std::vector<std::vector<double>>& doc_vectors,
                       const std::vector<std::int64_t>& strengths,
                       const HacOptions& options);

// Pearson correlation of two equal-length vectors; 0 when either side has
// zero variance (flagged by the caller).
double pearson(const std::vector<double>& x, const std::vector<double>& y,
               bool* degenerate = nullptr);

}  // namespace topictax
