#include "topictax/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace topictax {

namespace {

constexpr double kFiedlerTol = 1e-8;
constexpr int kFiedlerMaxIters = 10000;
constexpr double kGainEps = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Path-dependent child seeds keep sibling recursions independent of
// scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt + 1));
}

std::vector<std::vector<std::int32_t>> connected_components(
    const WeightedGraph& g, const std::vector<std::int32_t>& vertices) {
    std::unordered_map<std::int32_t, std::int32_t> local;
    local.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        local.emplace(vertices[i], static_cast<std::int32_t>(i));
    }
    std::vector<int> comp(vertices.size(), -1);
    std::vector<std::vector<std::int32_t>> out;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (comp[i] >= 0) continue;
        std::vector<std::int32_t> stack = {static_cast<std::int32_t>(i)};
        comp[i] = static_cast<int>(out.size());
        std::vector<std::int32_t> members;
        while (!stack.empty()) {
            const std::int32_t cur = stack.back();
            stack.pop_back();
            members.push_back(vertices[static_cast<std::size_t>(cur)]);
            for (const auto& [nb, w] :
                 g.adj[static_cast<std::size_t>(vertices[static_cast<std::size_t>(cur)])]) {
                auto it = local.find(nb);
                if (it == local.end() || comp[static_cast<std::size_t>(it->second)] >= 0) {
                    continue;
                }
                comp[static_cast<std::size_t>(it->second)] = static_cast<int>(out.size());
                stack.push_back(it->second);
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

struct LocalGraph {
    WeightedGraph graph;
    std::vector<std::int32_t> to_outer;
    std::unordered_map<std::int32_t, std::int32_t> to_local;
};

LocalGraph induce(const WeightedGraph& g, const std::vector<std::int32_t>& vertices) {
    LocalGraph out;
    out.to_outer = vertices;
    out.to_local.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        out.to_local.emplace(vertices[i], static_cast<std::int32_t>(i));
        out.graph.add_vertex(g.vertex_weight[static_cast<std::size_t>(vertices[i])]);
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (const auto& [nb, w] : g.adj[static_cast<std::size_t>(vertices[i])]) {
            auto it = out.to_local.find(nb);
            if (it == out.to_local.end()) continue;
            if (it->second > static_cast<std::int32_t>(i)) {
                out.graph.add_edge(static_cast<std::int32_t>(i), it->second, w);
            }
        }
    }
    return out;
}

// Power iteration for the eigenvector of the second-smallest Laplacian
// eigenvalue, run on the shifted operator sigma*I - L with the constant
// vector deflated. Returns false when the residual fails to reach the
// tolerance within the iteration cap.
bool fiedler_vector(const WeightedGraph& g, std::uint64_t seed,
                    std::vector<double>& out) {
    const std::int32_t n = g.n();
    if (n < 2) return false;
    std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
    for (std::int32_t v = 0; v < n; ++v) {
        for (const auto& [nb, w] : g.adj[static_cast<std::size_t>(v)]) {
            degree[static_cast<std::size_t>(v)] += w;
        }
    }
    const double max_degree = *std::max_element(degree.begin(), degree.end());
    const double sigma = 2.0 * max_degree + 1.0;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 8; ++attempt) {
        for (double& xi : x) xi = unit(rng);
        double dot = 0.0;
        for (double xi : x) dot += xi * inv_sqrt_n;
        double norm = 0.0;
        for (double& xi : x) {
            xi -= dot * inv_sqrt_n;
            norm += xi * xi;
        }
        norm = std::sqrt(norm);
        if (norm > 1e-9) {
            for (double& xi : x) xi /= norm;
            break;
        }
        if (attempt == 7) return false;
    }

    std::vector<double> y(static_cast<std::size_t>(n));
    for (int iter = 0; iter < kFiedlerMaxIters; ++iter) {
        for (std::int32_t v = 0; v < n; ++v) {
            double acc = (sigma - degree[static_cast<std::size_t>(v)]) *
                         x[static_cast<std::size_t>(v)];
            for (const auto& [nb, w] : g.adj[static_cast<std::size_t>(v)]) {
                acc += w * x[static_cast<std::size_t>(nb)];
            }
            y[static_cast<std::size_t>(v)] = acc;
        }
        double dot = 0.0;
        for (double yi : y) dot += yi * inv_sqrt_n;
        for (double& yi : y) yi -= dot * inv_sqrt_n;

        double lambda = 0.0;
        for (std::int32_t v = 0; v < n; ++v) {
            lambda += x[static_cast<std::size_t>(v)] * y[static_cast<std::size_t>(v)];
        }
        double residual = 0.0;
        for (std::int32_t v = 0; v < n; ++v) {
            const double r =
                y[static_cast<std::size_t>(v)] - lambda * x[static_cast<std::size_t>(v)];
            residual += r * r;
        }
        residual = std::sqrt(residual);

        double norm = 0.0;
        for (double yi : y) norm += yi * yi;
        norm = std::sqrt(norm);
        if (norm < 1e-30) return false;
        for (std::int32_t v = 0; v < n; ++v) {
            x[static_cast<std::size_t>(v)] = y[static_cast<std::size_t>(v)] / norm;
        }
        if (residual <= kFiedlerTol * std::max(1.0, std::abs(lambda))) {
            out = x;
            return true;
        }
    }
    return false;
}

struct BisectState {
    const WeightedGraph* graph = nullptr;
    const PartitionConfig* config = nullptr;
    std::vector<int>* part = nullptr;
    int next_part = 0;
    bool fallback = false;
};

void assign_part(BisectState& st, const std::vector<std::int32_t>& members) {
    for (std::int32_t v : members) {
        (*st.part)[static_cast<std::size_t>(v)] = st.next_part;
    }
    ++st.next_part;
}

// Strength-weighted greedy bisection used when the eigensolver does not
// converge: heaviest-first assignment toward the target strength split.
// Side sizes stay within [min_left, n - min_right] x [min_right, n - min_left].
std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> greedy_bisect(
    const WeightedGraph& g, const std::vector<std::int32_t>& members, int min_left,
    int min_right, double target_left) {
    std::vector<std::int32_t> order = members;
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        const double wa = g.vertex_weight[static_cast<std::size_t>(a)];
        const double wb = g.vertex_weight[static_cast<std::size_t>(b)];
        if (wa != wb) return wa > wb;
        return a < b;
    });
    double total = 0.0;
    for (std::int32_t v : members) total += g.vertex_weight[static_cast<std::size_t>(v)];
    std::vector<std::int32_t> left, right;
    double left_w = 0.0, right_w = 0.0;
    const double target_right = total - target_left;
    const std::size_t max_left = members.size() - static_cast<std::size_t>(min_right);
    const std::size_t max_right = members.size() - static_cast<std::size_t>(min_left);
    for (std::int32_t v : order) {
        const double w = g.vertex_weight[static_cast<std::size_t>(v)];
        const bool left_open = left.size() < max_left;
        const bool right_open = right.size() < max_right;
        if (left_open && (!right_open || target_left - left_w >= target_right - right_w)) {
            left.push_back(v);
            left_w += w;
        } else {
            right.push_back(v);
            right_w += w;
        }
    }
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    return {left, right};
}

void bisect_recurse(BisectState& st, const std::vector<std::int32_t>& members, int k,
                    std::uint64_t seed);

// Splits k across connected components proportionally to strength, at least
// one part per component while parts remain.
void split_components(BisectState& st,
                      std::vector<std::vector<std::int32_t>> components, int k,
                      std::uint64_t seed) {
    std::sort(components.begin(), components.end(),
              [&](const auto& a, const auto& b) {
                  double wa = 0.0, wb = 0.0;
                  for (std::int32_t v : a) {
                      wa += st.graph->vertex_weight[static_cast<std::size_t>(v)];
                  }
                  for (std::int32_t v : b) {
                      wb += st.graph->vertex_weight[static_cast<std::size_t>(v)];
                  }
                  if (wa != wb) return wa > wb;
                  return a.front() < b.front();
              });
    const auto num_components = static_cast<int>(components.size());
    if (k < num_components) {
        // Not enough parts: strongest components get their own, the rest
        // share the final one.
        std::vector<std::int32_t> rest;
        for (int c = 0; c < num_components; ++c) {
            if (c < k - 1) {
                assign_part(st, components[static_cast<std::size_t>(c)]);
            } else {
                rest.insert(rest.end(), components[static_cast<std::size_t>(c)].begin(),
                            components[static_cast<std::size_t>(c)].end());
            }
        }
        assign_part(st, rest);
        return;
    }
    std::vector<double> weight(components.size(), 0.0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        for (std::int32_t v : components[c]) {
            weight[c] += st.graph->vertex_weight[static_cast<std::size_t>(v)];
        }
    }
    std::vector<int> quota(components.size(), 1);
    int remaining = k - num_components;
    while (remaining > 0) {
        std::size_t best = components.size();
        double best_score = -1.0;
        for (std::size_t c = 0; c < components.size(); ++c) {
            if (quota[c] >= static_cast<int>(components[c].size())) continue;
            const double score = weight[c] / static_cast<double>(quota[c]);
            if (score > best_score) {
                best_score = score;
                best = c;
            }
        }
        if (best == components.size()) break;
        ++quota[best];
        --remaining;
    }
    for (std::size_t c = 0; c < components.size(); ++c) {
        bisect_recurse(st, components[c], quota[c], derive_seed(seed, c + 17));
    }
}

void bisect_recurse(BisectState& st, const std::vector<std::int32_t>& members, int k,
                    std::uint64_t seed) {
    if (k <= 1) {
        assign_part(st, members);
        return;
    }
    if (static_cast<int>(members.size()) == k) {
        for (std::int32_t v : members) assign_part(st, {v});
        return;
    }
    auto components = connected_components(*st.graph, members);
    if (components.size() > 1) {
        split_components(st, std::move(components), k, seed);
        return;
    }

    const int k_left = (k + 1) / 2;
    const int k_right = k - k_left;
    double total = 0.0;
    for (std::int32_t v : members) {
        total += st.graph->vertex_weight[static_cast<std::size_t>(v)];
    }
    const double target_left =
        total * static_cast<double>(k_left) / static_cast<double>(k);

    const LocalGraph local = induce(*st.graph, members);
    std::vector<double> fiedler;
    std::vector<std::int32_t> left, right;
    if (fiedler_vector(local.graph, derive_seed(seed, 0x0F1ED), fiedler)) {
        std::vector<std::int32_t> order(members.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            const double fa = fiedler[static_cast<std::size_t>(a)];
            const double fb = fiedler[static_cast<std::size_t>(b)];
            if (fa != fb) return fa < fb;
            return local.to_outer[static_cast<std::size_t>(a)] <
                   local.to_outer[static_cast<std::size_t>(b)];
        });
        // Sweep cut over the Fiedler ordering: among split points whose
        // sides respect the per-side strength cap (and can still host their
        // share of parts), take the cheapest cut; the most even strength
        // split breaks ties and is the fallback when no point is feasible.
        const int lo = k_left;
        const int hi = static_cast<int>(members.size()) - k_right;
        const double eps = st.config->balance_epsilon;
        const double cap_left =
            (1.0 + eps) * total * static_cast<double>(k_left) / static_cast<double>(k);
        const double cap_right = (1.0 + eps) * total * static_cast<double>(k_right) /
                                 static_cast<double>(k);
        std::vector<int> position(members.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
        }
        double prefix = 0.0;
        double cut = 0.0;
        double best_diff = 0.0;
        int even_idx = -1;
        double best_cut = 0.0;
        double best_cut_diff = 0.0;
        int cut_idx = -1;
        for (int i = 1; i <= hi; ++i) {
            const std::int32_t moved = order[static_cast<std::size_t>(i - 1)];
            prefix += local.graph.vertex_weight[static_cast<std::size_t>(moved)];
            for (const auto& [nb, w] : local.graph.adj[static_cast<std::size_t>(moved)]) {
                cut += position[static_cast<std::size_t>(nb)] >= i ? w : -w;
            }
            if (i < lo) continue;
            const double diff = std::abs(prefix - target_left);
            if (even_idx < 0 || diff < best_diff) {
                best_diff = diff;
                even_idx = i;
            }
            if (prefix <= cap_left + 1e-9 && total - prefix <= cap_right + 1e-9) {
                if (cut_idx < 0 || cut < best_cut ||
                    (cut == best_cut && diff < best_cut_diff)) {
                    best_cut = cut;
                    best_cut_diff = diff;
                    cut_idx = i;
                }
            }
        }
        const int best_idx = cut_idx >= 0 ? cut_idx : even_idx;
        for (int i = 0; i < static_cast<int>(members.size()); ++i) {
            const std::int32_t outer =
                local.to_outer[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            if (i < best_idx) {
                left.push_back(outer);
            } else {
                right.push_back(outer);
            }
        }
        std::sort(left.begin(), left.end());
        std::sort(right.begin(), right.end());
    } else {
        st.fallback = true;
        std::tie(left, right) =
            greedy_bisect(*st.graph, members, k_left, k_right, target_left);
    }
    bisect_recurse(st, left, k_left, derive_seed(seed, 1));
    bisect_recurse(st, right, k_right, derive_seed(seed, 2));
}

double part_weight_cap(const WeightedGraph& g, int k, double epsilon) {
    return (1.0 + epsilon) * g.total_vertex_weight() / static_cast<double>(k);
}

}  // namespace

void WeightedGraph::add_vertex(double weight) {
    vertex_weight.push_back(weight);
    adj.emplace_back();
}

void WeightedGraph::add_edge(std::int32_t u, std::int32_t v, double w) {
    if (u == v) {
        throw std::invalid_argument("self loops are not allowed");
    }
    adj[static_cast<std::size_t>(u)].emplace_back(v, w);
    adj[static_cast<std::size_t>(v)].emplace_back(u, w);
}

double WeightedGraph::total_vertex_weight() const {
    return std::accumulate(vertex_weight.begin(), vertex_weight.end(), 0.0);
}

int num_partitions(std::int64_t size, const PartitionConfig& config) {
    if (config.alpha <= 0 || config.beta <= 0) {
        throw std::invalid_argument("alpha and beta must be positive");
    }
    const std::int64_t n = size < config.alpha
                               ? size / config.beta
                               : static_cast<std::int64_t>(config.alpha / config.beta);
    return static_cast<int>(std::max<std::int64_t>(n, 1));
}

double edge_cut(const WeightedGraph& graph, const std::vector<int>& part) {
    if (part.size() != graph.vertex_weight.size()) {
        throw std::invalid_argument("assignment does not cover every vertex");
    }
    for (int p : part) {
        if (p < 0) throw std::invalid_argument("assignment does not cover every vertex");
    }
    double cut = 0.0;
    for (std::int32_t u = 0; u < graph.n(); ++u) {
        for (const auto& [v, w] : graph.adj[static_cast<std::size_t>(u)]) {
            if (u < v && part[static_cast<std::size_t>(u)] != part[static_cast<std::size_t>(v)]) {
                cut += w;
            }
        }
    }
    return cut;
}

std::vector<CoarseLevel> coarsen(const WeightedGraph& graph,
                                 const PartitionConfig& config, int stop) {
    std::vector<CoarseLevel> levels;
    levels.push_back({graph, {}});
    std::mt19937_64 rng(derive_seed(config.seed, 0xC0A53));
    while (levels.back().graph.n() > stop) {
        const WeightedGraph& cur = levels.back().graph;
        const std::int32_t n = cur.n();
        std::vector<std::int32_t> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);

        // Heavy-edge matching over the random visit order.
        std::vector<std::int32_t> match(static_cast<std::size_t>(n), -1);
        for (std::int32_t u : order) {
            if (match[static_cast<std::size_t>(u)] >= 0) continue;
            std::int32_t best = -1;
            double best_w = -1.0;
            for (const auto& [v, w] : cur.adj[static_cast<std::size_t>(u)]) {
                if (v == u || match[static_cast<std::size_t>(v)] >= 0) continue;
                if (w > best_w || (w == best_w && (best < 0 || v < best))) {
                    best = v;
                    best_w = w;
                }
            }
            if (best >= 0) {
                match[static_cast<std::size_t>(u)] = best;
                match[static_cast<std::size_t>(best)] = u;
            } else {
                match[static_cast<std::size_t>(u)] = u;
            }
        }

        std::vector<std::int32_t> fine_to_coarse(static_cast<std::size_t>(n), -1);
        std::int32_t m = 0;
        for (std::int32_t u = 0; u < n; ++u) {
            if (fine_to_coarse[static_cast<std::size_t>(u)] >= 0) continue;
            fine_to_coarse[static_cast<std::size_t>(u)] = m;
            const std::int32_t mu = match[static_cast<std::size_t>(u)];
            if (mu != u) fine_to_coarse[static_cast<std::size_t>(mu)] = m;
            ++m;
        }
        // Require at least a 10% shrink to keep going.
        if (10 * (n - m) < n) break;

        WeightedGraph coarse;
        for (std::int32_t c = 0; c < m; ++c) coarse.add_vertex(0.0);
        for (std::int32_t u = 0; u < n; ++u) {
            coarse.vertex_weight[static_cast<std::size_t>(
                fine_to_coarse[static_cast<std::size_t>(u)])] +=
                cur.vertex_weight[static_cast<std::size_t>(u)];
        }
        std::map<std::pair<std::int32_t, std::int32_t>, double> coarse_edges;
        for (std::int32_t u = 0; u < n; ++u) {
            for (const auto& [v, w] : cur.adj[static_cast<std::size_t>(u)]) {
                if (v <= u) continue;
                const std::int32_t cu = fine_to_coarse[static_cast<std::size_t>(u)];
                const std::int32_t cv = fine_to_coarse[static_cast<std::size_t>(v)];
                if (cu == cv) continue;
                coarse_edges[{std::min(cu, cv), std::max(cu, cv)}] += w;
            }
        }
        for (const auto& [uv, w] : coarse_edges) {
            coarse.add_edge(uv.first, uv.second, w);
        }
        levels.push_back({std::move(coarse), std::move(fine_to_coarse)});
    }
    return levels;
}

PartitionAssignment initial_partition(const WeightedGraph& graph, int k,
                                      const PartitionConfig& config) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > graph.n()) {
        throw std::invalid_argument("cannot split " + std::to_string(graph.n()) +
                                    " vertices into " + std::to_string(k) + " parts");
    }
    const std::int32_t n = graph.n();
    PartitionAssignment out;
    out.k = k;
    out.part.assign(static_cast<std::size_t>(n), -1);
    BisectState st;
    st.graph = &graph;
    st.config = &config;
    st.part = &out.part;
    std::vector<std::int32_t> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    bisect_recurse(st, all, k, derive_seed(config.seed, 0xB15EC7));
    out.spectral_fallback = st.fallback;
    if (k == 1 || n == k) return out;

    // Keep the best of the refined spectral solution and a few refined
    // random balanced starts; random restarts routinely escape layouts the
    // spectral ordering cannot express.
    const double cap = part_weight_cap(graph, k, config.balance_epsilon);
    auto score = [&](const std::vector<int>& part) {
        std::vector<double> pw(static_cast<std::size_t>(k), 0.0);
        for (std::int32_t v = 0; v < n; ++v) {
            pw[static_cast<std::size_t>(part[static_cast<std::size_t>(v)])] +=
                graph.vertex_weight[static_cast<std::size_t>(v)];
        }
        const bool feasible =
            *std::max_element(pw.begin(), pw.end()) <= cap + 1e-9;
        return std::make_pair(feasible ? 0 : 1, edge_cut(graph, part));
    };

    refine(graph, k, config, out.part);
    auto best_score = score(out.part);
    constexpr int kRestarts = 4;
    for (int restart = 0; restart < kRestarts; ++restart) {
        std::mt19937_64 rng(
            derive_seed(config.seed, 0x5EED00 + static_cast<std::uint64_t>(restart)));
        std::vector<std::int32_t> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> candidate(static_cast<std::size_t>(n), -1);
        std::vector<double> pw(static_cast<std::size_t>(k), 0.0);
        for (std::int32_t i = 0; i < n; ++i) {
            int target;
            if (i < k) {
                target = static_cast<int>(i);
            } else {
                target = static_cast<int>(std::min_element(pw.begin(), pw.end()) -
                                          pw.begin());
            }
            candidate[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
                target;
            pw[static_cast<std::size_t>(target)] +=
                graph.vertex_weight[static_cast<std::size_t>(
                    order[static_cast<std::size_t>(i)])];
        }
        refine(graph, k, config, candidate);
        const auto candidate_score = score(candidate);
        if (candidate_score < best_score) {
            best_score = candidate_score;
            out.part = std::move(candidate);
        }
    }
    return out;
}

void refine(const WeightedGraph& graph, int k, const PartitionConfig& config,
            std::vector<int>& part) {
    if (part.size() != graph.vertex_weight.size()) {
        throw std::invalid_argument("assignment does not cover every vertex");
    }
    const std::int32_t n = graph.n();
    const double cap = part_weight_cap(graph, k, config.balance_epsilon);
    std::vector<double> part_weight(static_cast<std::size_t>(k), 0.0);
    std::vector<int> part_count(static_cast<std::size_t>(k), 0);
    for (std::int32_t v = 0; v < n; ++v) {
        part_weight[static_cast<std::size_t>(part[static_cast<std::size_t>(v)])] +=
            graph.vertex_weight[static_cast<std::size_t>(v)];
        part_count[static_cast<std::size_t>(part[static_cast<std::size_t>(v)])] += 1;
    }

    // Kernighan-Lin passes: greedily apply the best boundary move (possibly
    // negative gain), lock the vertex, and at the end of the pass commit
    // the move prefix with the largest cumulative gain. A pass may exceed
    // the strength cap by up to one vertex while in flight, but a prefix is
    // only committed when it strictly improves the cut without worsening
    // the worst cap overshoot, so the cut never increases and balanced
    // inputs stay balanced.
    double max_vertex_weight = 0.0;
    for (double w : graph.vertex_weight) {
        max_vertex_weight = std::max(max_vertex_weight, w);
    }
    auto overweight = [&](const std::vector<double>& weights) {
        double worst = 0.0;
        for (double w : weights) worst = std::max(worst, w - cap);
        return worst;
    };
    struct Move {
        std::int32_t v;
        int from;
        int to;
    };
    std::vector<double> weight_to(static_cast<std::size_t>(k), 0.0);
    bool improved = true;
    while (improved) {
        improved = false;
        std::vector<int> tentative = part;
        std::vector<double> tent_weight = part_weight;
        std::vector<int> tent_count = part_count;
        std::vector<bool> locked(static_cast<std::size_t>(n), false);
        std::vector<Move> moves;
        const double start_overweight = overweight(part_weight);
        double cumulative = 0.0;
        double best_cumulative = 0.0;
        std::size_t best_prefix = 0;

        for (std::int32_t step = 0; step < n; ++step) {
            double best_gain = 0.0;
            std::int32_t best_v = -1;
            int best_target = -1;
            for (std::int32_t v = 0; v < n; ++v) {
                if (locked[static_cast<std::size_t>(v)]) continue;
                const int src = tentative[static_cast<std::size_t>(v)];
                if (tent_count[static_cast<std::size_t>(src)] <= 1) continue;
                const auto& nbrs = graph.adj[static_cast<std::size_t>(v)];
                if (nbrs.empty()) continue;
                std::vector<int> touched;
                for (const auto& [nb, w] : nbrs) {
                    const int p = tentative[static_cast<std::size_t>(nb)];
                    if (weight_to[static_cast<std::size_t>(p)] == 0.0) {
                        touched.push_back(p);
                    }
                    weight_to[static_cast<std::size_t>(p)] += w;
                }
                const double internal = weight_to[static_cast<std::size_t>(src)];
                const double vw = graph.vertex_weight[static_cast<std::size_t>(v)];
                for (int p : touched) {
                    if (p == src) continue;
                    if (tent_weight[static_cast<std::size_t>(p)] + vw >
                        cap + max_vertex_weight + 1e-9) {
                        continue;
                    }
                    const double gain =
                        weight_to[static_cast<std::size_t>(p)] - internal;
                    if (best_v < 0 || gain > best_gain) {
                        best_gain = gain;
                        best_v = v;
                        best_target = p;
                    }
                }
                for (int p : touched) weight_to[static_cast<std::size_t>(p)] = 0.0;
            }
            if (best_v < 0) break;
            const int src = tentative[static_cast<std::size_t>(best_v)];
            const double vw = graph.vertex_weight[static_cast<std::size_t>(best_v)];
            tent_weight[static_cast<std::size_t>(src)] -= vw;
            tent_count[static_cast<std::size_t>(src)] -= 1;
            tent_weight[static_cast<std::size_t>(best_target)] += vw;
            tent_count[static_cast<std::size_t>(best_target)] += 1;
            tentative[static_cast<std::size_t>(best_v)] = best_target;
            locked[static_cast<std::size_t>(best_v)] = true;
            moves.push_back({best_v, src, best_target});
            cumulative += best_gain;
            if (cumulative > best_cumulative + kGainEps &&
                overweight(tent_weight) <= start_overweight + 1e-9) {
                best_cumulative = cumulative;
                best_prefix = moves.size();
            }
        }
        if (best_prefix > 0) {
            for (std::size_t i = 0; i < best_prefix; ++i) {
                const Move& m = moves[i];
                const double vw = graph.vertex_weight[static_cast<std::size_t>(m.v)];
                part[static_cast<std::size_t>(m.v)] = m.to;
                part_weight[static_cast<std::size_t>(m.from)] -= vw;
                part_count[static_cast<std::size_t>(m.from)] -= 1;
                part_weight[static_cast<std::size_t>(m.to)] += vw;
                part_count[static_cast<std::size_t>(m.to)] += 1;
            }
            improved = true;
            continue;
        }

        // Swap pass: exchanging a pair across parts sidesteps strength caps
        // that block both single moves. Applied only when no move prefix
        // improved.
        auto gain_of = [&](std::int32_t v, int target) {
            double to_target = 0.0, internal = 0.0;
            const int src = part[static_cast<std::size_t>(v)];
            for (const auto& [nb, w] : graph.adj[static_cast<std::size_t>(v)]) {
                const int p = part[static_cast<std::size_t>(nb)];
                if (p == target) to_target += w;
                if (p == src) internal += w;
            }
            return to_target - internal;
        };
        auto edge_between_pair = [&](std::int32_t u, std::int32_t v) {
            double w_uv = 0.0;
            for (const auto& [nb, w] : graph.adj[static_cast<std::size_t>(u)]) {
                if (nb == v) w_uv += w;
            }
            return w_uv;
        };
        const double start_over = overweight(part_weight);
        bool swapped = true;
        while (swapped) {
            swapped = false;
            double best_delta = kGainEps;
            std::int32_t best_u = -1, best_v = -1;
            for (std::int32_t u = 0; u < n; ++u) {
                for (std::int32_t v = u + 1; v < n; ++v) {
                    const int pu = part[static_cast<std::size_t>(u)];
                    const int pv = part[static_cast<std::size_t>(v)];
                    if (pu == pv) continue;
                    const double delta = gain_of(u, pv) + gain_of(v, pu) -
                                         2.0 * edge_between_pair(u, v);
                    if (delta <= best_delta) continue;
                    const double wu = graph.vertex_weight[static_cast<std::size_t>(u)];
                    const double wv = graph.vertex_weight[static_cast<std::size_t>(v)];
                    std::vector<double> after = part_weight;
                    after[static_cast<std::size_t>(pu)] += wv - wu;
                    after[static_cast<std::size_t>(pv)] += wu - wv;
                    if (overweight(after) > start_over + 1e-9) continue;
                    best_delta = delta;
                    best_u = u;
                    best_v = v;
                }
            }
            if (best_u < 0) break;
            const int pu = part[static_cast<std::size_t>(best_u)];
            const int pv = part[static_cast<std::size_t>(best_v)];
            const double wu = graph.vertex_weight[static_cast<std::size_t>(best_u)];
            const double wv = graph.vertex_weight[static_cast<std::size_t>(best_v)];
            part[static_cast<std::size_t>(best_u)] = pv;
            part[static_cast<std::size_t>(best_v)] = pu;
            part_weight[static_cast<std::size_t>(pu)] += wv - wu;
            part_weight[static_cast<std::size_t>(pv)] += wu - wv;
            swapped = true;
            improved = true;  // give the move passes another chance
        }
    }
}

PartitionAssignment partition_kway(const WeightedGraph& graph, int k,
                                   const PartitionConfig& config) {
    if (graph.n() == 0) throw std::invalid_argument("cannot partition an empty graph");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > graph.n()) {
        throw std::invalid_argument("cannot split " + std::to_string(graph.n()) +
                                    " vertices into " + std::to_string(k) + " parts");
    }
    PartitionAssignment result;
    result.k = k;
    if (k == 1) {
        result.part.assign(static_cast<std::size_t>(graph.n()), 0);
        return result;
    }

    const int stop = config.coarsen_stop > 0
                         ? std::max(config.coarsen_stop, k)
                         : std::max(30, 4 * k);
    const std::vector<CoarseLevel> levels = coarsen(graph, config, stop);

    PartitionAssignment coarse = initial_partition(levels.back().graph, k, config);
    result.spectral_fallback = coarse.spectral_fallback;
    refine(levels.back().graph, k, config, coarse.part);

    for (std::size_t li = levels.size() - 1; li > 0; --li) {
        const auto& f2c = levels[li].fine_to_coarse;
        const WeightedGraph& fine = levels[li - 1].graph;
        std::vector<int> projected(static_cast<std::size_t>(fine.n()));
        for (std::int32_t v = 0; v < fine.n(); ++v) {
            projected[static_cast<std::size_t>(v)] =
                coarse.part[static_cast<std::size_t>(f2c[static_cast<std::size_t>(v)])];
        }
        coarse.part = std::move(projected);
        refine(fine, k, config, coarse.part);
    }
    result.part = std::move(coarse.part);

    const double cap = part_weight_cap(graph, k, config.balance_epsilon);
    std::vector<double> part_weight(static_cast<std::size_t>(k), 0.0);
    for (std::int32_t v = 0; v < graph.n(); ++v) {
        part_weight[static_cast<std::size_t>(result.part[static_cast<std::size_t>(v)])] +=
            graph.vertex_weight[static_cast<std::size_t>(v)];
    }
    for (double w : part_weight) {
        if (w > cap * (1.0 + 1e-12) + 1e-9) {
            result.balance_violated = true;
            break;
        }
    }
    return result;
}

std::int32_t select_label(const WeightedGraph& graph,
                          const std::vector<std::int32_t>& members,
                          const std::vector<std::string>& names) {
    if (members.empty()) {
        throw std::invalid_argument("cannot label an empty partition");
    }
    std::unordered_set<std::int32_t> member_set(members.begin(), members.end());
    std::int32_t best = -1;
    double best_weight = -1.0;
    for (std::int32_t v : members) {
        double internal = 0.0;
        for (const auto& [nb, w] : graph.adj[static_cast<std::size_t>(v)]) {
            if (member_set.count(nb) > 0) internal += w;
        }
        if (best < 0) {
            best = v;
            best_weight = internal;
            continue;
        }
        if (internal > best_weight) {
            best = v;
            best_weight = internal;
        } else if (internal == best_weight) {
            const double sv = graph.vertex_weight[static_cast<std::size_t>(v)];
            const double sb = graph.vertex_weight[static_cast<std::size_t>(best)];
            if (sv > sb || (sv == sb && names[static_cast<std::size_t>(v)] <
                                            names[static_cast<std::size_t>(best)])) {
                best = v;
            }
        }
    }
    return best;
}

namespace {

struct TaxonomyBuilder {
    const PartitionConfig* config = nullptr;
    WeightedGraph full;                     // subgraph in local indices
    std::vector<std::string> names;         // local index -> topic string
    std::vector<std::int32_t> outer_ids;    // local index -> parent graph id
    Taxonomy* taxonomy = nullptr;
    TaxonomyResult* result = nullptr;

    void recurse(const std::vector<std::int32_t>& members, std::int32_t parent_node,
                 std::uint64_t seed, int depth) {
        if (members.empty()) return;
        const LocalGraph local = induce(full, members);
        bool has_edges = false;
        for (const auto& nbrs : local.graph.adj) {
            if (!nbrs.empty()) {
                has_edges = true;
                break;
            }
        }
        if (static_cast<int>(members.size()) < config->min_partition_size ||
            !has_edges) {
            std::vector<std::int32_t> leaves = members;
            std::sort(leaves.begin(), leaves.end(),
                      [&](std::int32_t a, std::int32_t b) {
                          return names[static_cast<std::size_t>(a)] <
                                 names[static_cast<std::size_t>(b)];
                      });
            for (std::int32_t v : leaves) {
                taxonomy->add_node(names[static_cast<std::size_t>(v)], parent_node);
            }
            return;
        }

        const int k = std::min<int>(
            num_partitions(static_cast<std::int64_t>(members.size()), *config),
            static_cast<int>(members.size()));
        PartitionConfig sub_config = *config;
        sub_config.seed = derive_seed(seed, 0);
        const PartitionAssignment assignment =
            partition_kway(local.graph, k, sub_config);
        result->balance_violated |= assignment.balance_violated;
        result->spectral_fallback |= assignment.spectral_fallback;

        std::vector<std::string> local_names(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            local_names[i] = names[static_cast<std::size_t>(members[i])];
        }
        for (int p = 0; p < k; ++p) {
            std::vector<std::int32_t> part_local;
            for (std::int32_t v = 0; v < local.graph.n(); ++v) {
                if (assignment.part[static_cast<std::size_t>(v)] == p) {
                    part_local.push_back(v);
                }
            }
            if (part_local.empty()) continue;
            const std::int32_t label_local =
                select_label(local.graph, part_local, local_names);
            const std::int32_t label =
                local.to_outer[static_cast<std::size_t>(label_local)];
            const std::int32_t child =
                taxonomy->add_node(names[static_cast<std::size_t>(label)], parent_node);
            if (depth == 0) {
                std::vector<std::int32_t> outer_part;
                for (std::int32_t v : part_local) {
                    outer_part.push_back(outer_ids[static_cast<std::size_t>(
                        local.to_outer[static_cast<std::size_t>(v)])]);
                }
                result->first_level_parts.push_back(std::move(outer_part));
            }
            std::vector<std::int32_t> remainder;
            for (std::int32_t v : part_local) {
                const std::int32_t outer = local.to_outer[static_cast<std::size_t>(v)];
                if (outer != label) remainder.push_back(outer);
            }
            recurse(remainder, child, derive_seed(seed, static_cast<std::uint64_t>(p) + 1),
                    depth + 1);
        }
    }
};

}  // namespace

TaxonomyResult build_taxonomy_result(const Subgraph& subgraph,
                                     const PartitionConfig& config) {
    TaxonomyResult result{Taxonomy(subgraph.query), false, false, {}};
    TaxonomyBuilder builder;
    builder.config = &config;
    builder.taxonomy = &result.taxonomy;
    builder.result = &result;
    builder.outer_ids = subgraph.vertices;

    const TopicGraph& parent = *subgraph.parent;
    std::unordered_map<std::int32_t, std::int32_t> to_local;
    for (std::size_t i = 0; i < subgraph.vertices.size(); ++i) {
        const std::int32_t v = subgraph.vertices[i];
        to_local.emplace(v, static_cast<std::int32_t>(i));
        builder.full.add_vertex(
            static_cast<double>(parent.strength[static_cast<std::size_t>(v)]));
        builder.names.push_back(parent.topics[static_cast<std::size_t>(v)]);
    }
    for (std::int32_t e : subgraph.edge_indices) {
        const auto& edge = parent.edges[static_cast<std::size_t>(e)];
        builder.full.add_edge(to_local.at(edge.u), to_local.at(edge.v), edge.weight);
    }

    std::vector<std::int32_t> all(subgraph.vertices.size());
    std::iota(all.begin(), all.end(), 0);
    builder.recurse(all, 0, config.seed, 0);
    return result;
}

Taxonomy build_taxonomy(const Subgraph& subgraph, const PartitionConfig& config) {
    return build_taxonomy_result(subgraph, config).taxonomy;
}

}  // namespace topictax
