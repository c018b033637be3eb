#include "topictax/query_subgraph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace topictax {

namespace {

void induce_edges(Subgraph& sub) {
    const TopicGraph& g = *sub.parent;
    std::unordered_set<std::int32_t> members(sub.vertices.begin(),
                                             sub.vertices.end());
    sub.edge_indices.clear();
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (members.count(g.edges[e].u) > 0 && members.count(g.edges[e].v) > 0) {
            sub.edge_indices.push_back(static_cast<std::int32_t>(e));
        }
    }
}

// Keep the max_vertices members closest to the query: highest
// count(t_0, t_i), ties by strength, then by id.
void apply_size_cap(std::vector<std::int32_t>& members, const TopicGraph& g,
                    std::int32_t t_0, int max_vertices) {
    if (max_vertices <= 0 ||
        members.size() <= static_cast<std::size_t>(max_vertices)) {
        return;
    }
    std::stable_sort(members.begin(), members.end(),
                     [&](std::int32_t a, std::int32_t b) {
                         const std::int64_t ca = g.count_between(t_0, a);
                         const std::int64_t cb = g.count_between(t_0, b);
                         if (ca != cb) return ca > cb;
                         const std::int64_t sa = g.strength[static_cast<std::size_t>(a)];
                         const std::int64_t sb = g.strength[static_cast<std::size_t>(b)];
                         if (sa != sb) return sa > sb;
                         return a < b;
                     });
    members.resize(static_cast<std::size_t>(max_vertices));
    std::sort(members.begin(), members.end());
}

std::vector<std::int32_t> member_candidates(const TopicGraph& g, std::int32_t t_0,
                                            const QueryConfig& config) {
    std::vector<std::int32_t> members;
    const std::int64_t s_0 = g.strength[static_cast<std::size_t>(t_0)];
    for (std::int32_t e : g.incident[static_cast<std::size_t>(t_0)]) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        const std::int32_t t_i = edge.u == t_0 ? edge.v : edge.u;
        if (g.degree[static_cast<std::size_t>(t_i)] < config.k_min) continue;
        if (g.strength[static_cast<std::size_t>(t_i)] < config.s_min) continue;
        if (g.strength[static_cast<std::size_t>(t_i)] >= s_0) continue;
        if (g.conditional_rank(t_0, t_i) > config.r_max) continue;
        members.push_back(t_i);
    }
    std::sort(members.begin(), members.end());
    return members;
}

}  // namespace

Subgraph select_subgraph(const TopicGraph& graph, std::int32_t t_0,
                         const QueryConfig& config) {
    if (t_0 < 0 || static_cast<std::size_t>(t_0) >= graph.num_vertices()) {
        throw std::out_of_range("unknown query topic id " + std::to_string(t_0));
    }
    Subgraph sub;
    sub.parent = &graph;
    sub.query = graph.topics[static_cast<std::size_t>(t_0)];
    sub.query_id = t_0;
    sub.vertices = member_candidates(graph, t_0, config);
    apply_size_cap(sub.vertices, graph, t_0, config.max_vertices);
    induce_edges(sub);
    return sub;
}

Subgraph expand_query(const TopicGraph& graph, const std::string& term,
                      const QueryConfig& config) {
    if (graph.id_of(term) >= 0) {
        throw std::invalid_argument("query '" + term +
                                    "' is a known topic; expansion not needed");
    }
    struct Scored {
        double sim;
        std::int64_t strength;
        std::int32_t id;
    };
    std::vector<Scored> scored;
    for (std::size_t i = 0; i < graph.num_vertices(); ++i) {
        const double sim = jaccard(term, graph.topics[i]);
        if (sim > 0.0) {
            scored.push_back({sim, graph.strength[i], static_cast<std::int32_t>(i)});
        }
    }
    if (scored.empty()) {
        throw std::runtime_error("no expansion: no topic shares a word with '" +
                                 term + "'");
    }
    std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        if (a.strength != b.strength) return a.strength > b.strength;
        return graph.topics[static_cast<std::size_t>(a.id)] <
               graph.topics[static_cast<std::size_t>(b.id)];
    });
    if (scored.size() > static_cast<std::size_t>(config.expansion_k)) {
        scored.resize(static_cast<std::size_t>(config.expansion_k));
    }

    Subgraph sub;
    sub.parent = &graph;
    sub.query = term;
    std::set<std::int32_t> members;
    for (const Scored& s : scored) {
        sub.expansion.push_back(graph.topics[static_cast<std::size_t>(s.id)]);
        const Subgraph part = select_subgraph(graph, s.id, config);
        members.insert(part.vertices.begin(), part.vertices.end());
    }
    sub.vertices.assign(members.begin(), members.end());
    induce_edges(sub);
    return sub;
}

Subgraph subgraph_from_topics(const TopicGraph& graph, const std::string& query,
                              const std::vector<std::int32_t>& members) {
    Subgraph sub;
    sub.parent = &graph;
    sub.query = query;
    sub.query_id = graph.id_of(query) >= 0
                       ? std::optional<std::int32_t>(graph.id_of(query))
                       : std::nullopt;
    sub.vertices = members;
    std::sort(sub.vertices.begin(), sub.vertices.end());
    sub.vertices.erase(std::unique(sub.vertices.begin(), sub.vertices.end()),
                       sub.vertices.end());
    for (std::int32_t v : sub.vertices) {
        if (v < 0 || static_cast<std::size_t>(v) >= graph.num_vertices()) {
            throw std::out_of_range("subgraph member id out of range: " +
                                    std::to_string(v));
        }
    }
    if (sub.query_id) {
        sub.vertices.erase(
            std::remove(sub.vertices.begin(), sub.vertices.end(), *sub.query_id),
            sub.vertices.end());
    }
    induce_edges(sub);
    return sub;
}

}  // namespace topictax
