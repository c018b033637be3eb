#include "topictax/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace topictax {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, '\t')) {
        fields.push_back(field);
    }
    return fields;
}

bool parse_flag(const std::string& s) {
    if (s == "0") return false;
    if (s == "1") return true;
    throw std::runtime_error("expected 0 or 1, got '" + s + "'");
}

// Non-root ancestor topics of a node, nearest first, paired with distance.
std::vector<std::pair<std::string, int>> ancestor_chain(const Taxonomy& tax,
                                                        std::int32_t id) {
    std::vector<std::pair<std::string, int>> chain;
    int dist = 1;
    std::int32_t cur = tax.node(id).parent;
    while (cur > 0) {
        chain.emplace_back(tax.node(cur).topic, dist);
        cur = tax.node(cur).parent;
        ++dist;
    }
    return chain;
}

}  // namespace

void JudgmentSet::add(const std::string& judge, const std::string& topic,
                      bool relevant, bool semantically_relevant) {
    if (semantically_relevant && !relevant) {
        throw std::runtime_error("judgment for '" + topic + "' by '" + judge +
                                 "' marks a non-relevant topic as semantically "
                                 "relevant");
    }
    by_judge[judge][topic] = Judgment{relevant, semantically_relevant};
}

JudgmentSet JudgmentSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open judgment file: " + path.string());
    }
    JudgmentSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 4) {
            throw std::runtime_error("malformed judgment line " +
                                     std::to_string(lineno) + " in " + path.string());
        }
        set.add(fields[0], fields[1], parse_flag(fields[2]), parse_flag(fields[3]));
    }
    return set;
}

namespace {

// Shared scaffolding for P and SP: verifies coverage and walks judges.
double averaged_metric(const JudgmentSet& judgments, const Taxonomy& taxonomy,
                       bool semantic) {
    std::vector<std::string> topics;
    for (std::size_t i = 1; i < taxonomy.nodes().size(); ++i) {
        topics.push_back(taxonomy.nodes()[i].topic);
    }
    if (topics.empty()) {
        throw std::runtime_error("taxonomy has no non-root topics to judge");
    }
    std::vector<std::string> missing;
    for (const std::string& topic : topics) {
        bool judged = false;
        for (const auto& [_, records] : judgments.by_judge) {
            if (records.count(topic) > 0) {
                judged = true;
                break;
            }
        }
        if (!judged) missing.push_back(topic);
    }
    if (!missing.empty()) {
        std::string msg = "unjudged taxonomy topics:";
        for (const std::string& t : missing) msg += " '" + t + "'";
        throw std::runtime_error(msg);
    }
    double sum = 0.0;
    std::size_t judges = 0;
    for (const auto& [_, records] : judgments.by_judge) {
        std::size_t covered = 0;
        std::size_t hits = 0;
        for (const std::string& topic : topics) {
            auto it = records.find(topic);
            if (it == records.end()) continue;
            ++covered;
            const bool hit = semantic ? it->second.semantically_relevant
                                      : it->second.relevant;
            if (hit) ++hits;
        }
        if (covered == 0) continue;
        sum += static_cast<double>(hits) / static_cast<double>(covered);
        ++judges;
    }
    if (judges == 0) {
        throw std::runtime_error("no judge covers any taxonomy topic");
    }
    return sum / static_cast<double>(judges);
}

}  // namespace

double precision(const JudgmentSet& judgments, const Taxonomy& taxonomy) {
    return averaged_metric(judgments, taxonomy, false);
}

double semantic_precision(const JudgmentSet& judgments, const Taxonomy& taxonomy) {
    return averaged_metric(judgments, taxonomy, true);
}

AgreementStats agreement_and_kappa(const std::vector<bool>& a,
                                   const std::vector<bool>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument(
            "agreement requires two nonempty label vectors over the same nodes");
    }
    const auto n = static_cast<double>(a.size());
    double matches = 0.0, a_pos = 0.0, b_pos = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) matches += 1.0;
        if (a[i]) a_pos += 1.0;
        if (b[i]) b_pos += 1.0;
    }
    AgreementStats stats;
    stats.agreement = matches / n;
    const double pa = a_pos / n;
    const double pb = b_pos / n;
    const double expected = pa * pb + (1.0 - pa) * (1.0 - pb);
    if (1.0 - expected < 1e-12) {
        stats.kappa = stats.agreement >= 1.0 - 1e-12 ? 1.0 : 0.0;
    } else {
        stats.kappa = (stats.agreement - expected) / (1.0 - expected);
    }
    return stats;
}

std::vector<CategoryEdge> load_category_edges(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open category edge file: " + path.string());
    }
    std::vector<CategoryEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3 || (fields[2] != "category" && fields[2] != "page")) {
            throw std::runtime_error("malformed category edge line " +
                                     std::to_string(lineno) + " in " + path.string());
        }
        edges.push_back({fields[0], fields[1], fields[2]});
    }
    return edges;
}

Taxonomy build_gold_standard(const std::vector<CategoryEdge>& edges,
                             const std::string& root,
                             const std::unordered_set<std::string>& candidates,
                             int max_depth) {
    std::map<std::string, std::vector<std::string>> children;
    bool root_seen = false;
    for (const CategoryEdge& edge : edges) {
        children[edge.parent].push_back(edge.child);
        if (edge.parent == root || edge.child == root) root_seen = true;
    }
    if (!root_seen) {
        throw std::runtime_error("root category '" + root +
                                 "' does not appear in the edge file");
    }
    for (auto& [_, kids] : children) {
        std::sort(kids.begin(), kids.end());
        kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    }

    // Level-order expansion with the frontier sorted by node string, so the
    // first-encountered parent of a multi-parent node does not depend on
    // edge file order.
    std::map<std::string, std::string> parent_of;  // tree-ified edges
    std::map<std::string, std::vector<std::string>> tree_children;
    std::unordered_set<std::string> visited = {root};
    std::vector<std::string> frontier = {root};
    for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
        std::sort(frontier.begin(), frontier.end());
        std::vector<std::string> next;
        for (const std::string& node : frontier) {
            auto it = children.find(node);
            if (it == children.end()) continue;
            for (const std::string& child : it->second) {
                if (visited.count(child) > 0) continue;
                visited.insert(child);
                parent_of[child] = node;
                tree_children[node].push_back(child);
                next.push_back(child);
            }
        }
        frontier = std::move(next);
    }

    // Keep a node only when it is a candidate and its parent survived; the
    // root is exempt. Dropped nodes take their whole subtree with them.
    Taxonomy gold(root);
    struct Item {
        std::string topic;
        std::int32_t parent_node;
    };
    std::deque<Item> queue;
    for (const std::string& child : tree_children[root]) {
        queue.push_back({child, 0});
    }
    while (!queue.empty()) {
        const Item item = queue.front();
        queue.pop_front();
        if (candidates.count(item.topic) == 0) continue;
        const std::int32_t node = gold.add_node(item.topic, item.parent_node);
        auto it = tree_children.find(item.topic);
        if (it == tree_children.end()) continue;
        for (const std::string& child : it->second) {
            queue.push_back({child, node});
        }
    }
    return gold;
}

MatchReport match_report(const Taxonomy& taxonomy, const Taxonomy& gold) {
    if (taxonomy.root_topic() != gold.root_topic()) {
        throw std::invalid_argument("taxonomy root '" + taxonomy.root_topic() +
                                    "' differs from gold root '" +
                                    gold.root_topic() + "'");
    }
    std::unordered_map<std::string, std::int32_t> tax_index;
    for (std::size_t i = 0; i < taxonomy.nodes().size(); ++i) {
        tax_index.emplace(taxonomy.nodes()[i].topic, static_cast<std::int32_t>(i));
    }

    MatchReport report;
    double exact_sum = 0.0, partial_sum = 0.0;
    double exact_present = 0.0, partial_present = 0.0;
    for (std::size_t gi = 1; gi < gold.nodes().size(); ++gi) {
        const auto& gnode = gold.nodes()[gi];
        ++report.gold_nodes;
        bool exact = false;
        double partial = 0.0;
        auto it = tax_index.find(gnode.topic);
        if (it != tax_index.end()) {
            ++report.present_nodes;
            const auto& tnode = taxonomy.node(it->second);
            const std::string& tax_parent =
                taxonomy.node(tnode.parent).topic;
            const std::string& gold_parent =
                gold.node(gnode.parent).topic;
            if (tax_parent == gold_parent) {
                // An exact match always earns full partial credit, even
                // directly under the root.
                exact = true;
                partial = 1.0;
            } else {
                const auto tax_chain = ancestor_chain(taxonomy, it->second);
                const auto gold_chain =
                    ancestor_chain(gold, static_cast<std::int32_t>(gi));
                int best_pq = 0;
                for (const auto& [topic, p] : tax_chain) {
                    if (topic == gnode.topic) continue;
                    for (const auto& [gtopic, q] : gold_chain) {
                        if (gtopic != topic) continue;
                        const int pq = p * q;
                        if (best_pq == 0 || pq < best_pq) best_pq = pq;
                    }
                }
                if (best_pq > 0) partial = 1.0 / static_cast<double>(best_pq);
            }
            exact_present += exact ? 1.0 : 0.0;
            partial_present += partial;
        }
        exact_sum += exact ? 1.0 : 0.0;
        partial_sum += partial;
        report.node_exact.emplace_back(gnode.topic, exact);
        report.node_partial.emplace_back(gnode.topic, partial);
    }
    std::sort(report.node_exact.begin(), report.node_exact.end());
    std::sort(report.node_partial.begin(), report.node_partial.end());
    if (report.gold_nodes > 0) {
        report.exact_fraction = exact_sum / static_cast<double>(report.gold_nodes);
        report.partial_mean = partial_sum / static_cast<double>(report.gold_nodes);
    }
    if (report.present_nodes > 0) {
        report.exact_fraction_present =
            exact_present / static_cast<double>(report.present_nodes);
        report.partial_mean_present =
            partial_present / static_cast<double>(report.present_nodes);
    }
    return report;
}

double exact_match(const Taxonomy& taxonomy, const Taxonomy& gold) {
    return match_report(taxonomy, gold).exact_fraction;
}

double partial_match(const Taxonomy& taxonomy, const Taxonomy& gold) {
    return match_report(taxonomy, gold).partial_mean;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y,
               bool* degenerate) {
    if (x.size() != y.size() || x.empty()) {
        throw std::invalid_argument("pearson requires equal-length nonempty vectors");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx <= 0.0 || vy <= 0.0) {
        if (degenerate != nullptr) *degenerate = true;
        return 0.0;
    }
    return cov / std::sqrt(vx * vy);
}

HacResult hac_baseline(const std::vector<std::string>& topics,
                       const std::vector<std::vector<double>>& doc_vectors,
                       const std::vector<std::int64_t>& strengths,
                       const HacOptions& options) {
    const std::size_t n = topics.size();
    if (n < 2) {
        throw std::invalid_argument("clustering requires at least two topics");
    }
    if (doc_vectors.size() != n || strengths.size() != n) {
        throw std::invalid_argument("topics, vectors and strengths must be parallel");
    }
    const std::size_t dim = doc_vectors.front().size();
    for (const auto& v : doc_vectors) {
        if (v.size() != dim) {
            throw std::invalid_argument("document vectors must share one index");
        }
    }

    struct Cluster {
        std::vector<std::int32_t> members;  // sorted topic indices
        std::int32_t label;                 // topic index
        std::int64_t strength;
        std::vector<double> centroid;
    };
    auto make_centroid = [&](const std::vector<std::int32_t>& members) {
        std::vector<double> c(dim, 0.0);
        for (std::int32_t m : members) {
            for (std::size_t d = 0; d < dim; ++d) {
                c[d] += doc_vectors[static_cast<std::size_t>(m)][d];
            }
        }
        for (double& v : c) v /= static_cast<double>(members.size());
        return c;
    };

    std::vector<Cluster> clusters;
    clusters.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        Cluster c;
        c.members = {static_cast<std::int32_t>(i)};
        c.label = static_cast<std::int32_t>(i);
        c.strength = strengths[i];
        c.centroid = make_centroid(c.members);
        clusters.push_back(std::move(c));
    }
    std::vector<std::int32_t> active(n);
    std::iota(active.begin(), active.end(), 0);

    HacResult result{Taxonomy(options.root), {}, false};
    std::map<std::int32_t, std::vector<std::int32_t>> label_children;

    while (active.size() > 1) {
        double best_dist = 0.0;
        std::int32_t best_a = -1, best_b = -1;
        for (std::size_t ia = 0; ia < active.size(); ++ia) {
            for (std::size_t ib = ia + 1; ib < active.size(); ++ib) {
                bool degenerate = false;
                const double dist =
                    1.0 - pearson(clusters[static_cast<std::size_t>(active[ia])].centroid,
                                  clusters[static_cast<std::size_t>(active[ib])].centroid,
                                  &degenerate);
                if (degenerate) result.constant_vector = true;
                if (best_a < 0 || dist < best_dist - options.tie_epsilon) {
                    best_dist = dist;
                    best_a = active[ia];
                    best_b = active[ib];
                }
            }
        }

        const Cluster& ca = clusters[static_cast<std::size_t>(best_a)];
        const Cluster& cb = clusters[static_cast<std::size_t>(best_b)];
        Cluster merged;
        merged.members = ca.members;
        merged.members.insert(merged.members.end(), cb.members.begin(),
                              cb.members.end());
        std::sort(merged.members.begin(), merged.members.end());
        merged.strength = ca.strength + cb.strength;

        // Label choice: a singleton names the merged cluster; otherwise the
        // stronger side keeps its label.
        std::int32_t winner, loser;
        const bool a_single = ca.members.size() == 1;
        const bool b_single = cb.members.size() == 1;
        auto stronger_of = [&](const Cluster& x, const Cluster& y) {
            if (x.strength != y.strength) return x.strength > y.strength;
            return topics[static_cast<std::size_t>(x.label)] <
                   topics[static_cast<std::size_t>(y.label)];
        };
        if (a_single != b_single) {
            winner = a_single ? ca.label : cb.label;
            loser = a_single ? cb.label : ca.label;
        } else {
            const bool a_wins = stronger_of(ca, cb);
            winner = a_wins ? ca.label : cb.label;
            loser = a_wins ? cb.label : ca.label;
        }
        merged.label = winner;
        merged.centroid = make_centroid(merged.members);
        label_children[winner].push_back(loser);

        const auto merged_id = static_cast<std::int32_t>(clusters.size());
        result.merges.push_back({best_a, best_b, best_dist, merged_id});
        clusters.push_back(std::move(merged));
        active.erase(std::remove(active.begin(), active.end(), best_a), active.end());
        active.erase(std::remove(active.begin(), active.end(), best_b), active.end());
        active.push_back(merged_id);
    }

    // Emit the label tree under the requested root.
    const std::int32_t top = clusters[static_cast<std::size_t>(active.front())].label;
    std::vector<std::pair<std::int32_t, std::int32_t>> stack = {{top, 0}};
    while (!stack.empty()) {
        const auto [topic_idx, parent_node] = stack.back();
        stack.pop_back();
        const std::int32_t node = result.taxonomy.add_node(
            topics[static_cast<std::size_t>(topic_idx)], parent_node);
        auto it = label_children.find(topic_idx);
        if (it == label_children.end()) continue;
        for (std::int32_t child : it->second) {
            stack.push_back({child, node});
        }
    }
    return result;
}

}  // namespace topictax
