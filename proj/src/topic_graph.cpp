#include "topictax/topic_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "topictax/corpus.hpp"

namespace topictax {

namespace {

void check_topic_id(std::int32_t topic, std::int32_t num_topics) {
    if (topic < 0 || topic >= num_topics) {
        throw std::out_of_range("unknown topic id " + std::to_string(topic));
    }
}

}  // namespace

std::int64_t TopicGraph::count_between(std::int32_t i, std::int32_t j) const {
    const std::int32_t e = edge_between(i, j);
    return e < 0 ? 0 : edges[static_cast<std::size_t>(e)].count;
}

std::int32_t TopicGraph::edge_between(std::int32_t i, std::int32_t j) const {
    if (i == j) return -1;
    const auto& inc = incident[static_cast<std::size_t>(i)];
    for (std::int32_t e : inc) {
        const Edge& edge = edges[static_cast<std::size_t>(e)];
        if (edge.u == j || edge.v == j) return e;
    }
    return -1;
}

int TopicGraph::conditional_rank(std::int32_t t_i, std::int32_t t_j) const {
    check_topic_id(t_i, static_cast<std::int32_t>(num_vertices()));
    check_topic_id(t_j, static_cast<std::int32_t>(num_vertices()));
    const std::int64_t c_ij = count_between(t_i, t_j);
    if (c_ij == 0) {
        throw std::invalid_argument("conditional rank undefined: topics " +
                                    std::to_string(t_i) + " and " +
                                    std::to_string(t_j) + " never co-occur");
    }
    int stronger_with_higher_count = 0;
    const std::int64_t s_j = strength[static_cast<std::size_t>(t_j)];
    for (std::int32_t e : incident[static_cast<std::size_t>(t_j)]) {
        const Edge& edge = edges[static_cast<std::size_t>(e)];
        const std::int32_t t_h = edge.u == t_j ? edge.v : edge.u;
        if (strength[static_cast<std::size_t>(t_h)] > s_j && edge.count > c_ij) {
            ++stronger_with_higher_count;
        }
    }
    return 1 + stronger_with_higher_count;
}

std::int64_t compute_strength(const CooccurrenceCounts& counts, std::int32_t topic) {
    check_topic_id(topic, counts.num_topics());
    std::int64_t sum = 0;
    for (const auto& [key, c] : counts.pairs()) {
        const auto i = static_cast<std::int32_t>(key >> 32);
        const auto j = static_cast<std::int32_t>(key & 0xffffffffULL);
        if (i == topic || j == topic) sum += c;
    }
    return sum;
}

int conditional_rank(const CooccurrenceCounts& counts,
                     const std::vector<std::int64_t>& strengths, std::int32_t t_i,
                     std::int32_t t_j) {
    check_topic_id(t_i, counts.num_topics());
    check_topic_id(t_j, counts.num_topics());
    const std::int64_t c_ij = counts.count(t_i, t_j);
    if (c_ij == 0) {
        throw std::invalid_argument("conditional rank undefined: topics " +
                                    std::to_string(t_i) + " and " +
                                    std::to_string(t_j) + " never co-occur");
    }
    const std::int64_t s_j = strengths[static_cast<std::size_t>(t_j)];
    int stronger_with_higher_count = 0;
    for (const auto& [key, c] : counts.pairs()) {
        const auto a = static_cast<std::int32_t>(key >> 32);
        const auto b = static_cast<std::int32_t>(key & 0xffffffffULL);
        std::int32_t t_h;
        if (a == t_j) {
            t_h = b;
        } else if (b == t_j) {
            t_h = a;
        } else {
            continue;
        }
        if (strengths[static_cast<std::size_t>(t_h)] > s_j && c > c_ij) {
            ++stronger_with_higher_count;
        }
    }
    return 1 + stronger_with_higher_count;
}

double jaccard(const std::string& t_i, const std::string& t_j) {
    if (t_i.empty() || t_j.empty()) {
        throw std::invalid_argument("jaccard requires nonempty topic strings");
    }
    const TokenSequence w_i = normalize(t_i);
    const TokenSequence w_j = normalize(t_j);
    const std::set<std::string> set_i(w_i.begin(), w_i.end());
    const std::set<std::string> set_j(w_j.begin(), w_j.end());
    std::size_t intersection = 0;
    for (const std::string& w : set_i) {
        if (set_j.count(w) > 0) ++intersection;
    }
    const std::size_t unions = set_i.size() + set_j.size() - intersection;
    if (unions == 0) return 0.0;
    return static_cast<double>(intersection) / static_cast<double>(unions);
}

double edge_weight(std::int32_t t_i, std::int32_t t_j,
                   const CooccurrenceCounts& counts,
                   const std::vector<std::int64_t>& strengths,
                   const std::vector<std::string>& topics,
                   const GraphConfig& config) {
    const std::int64_t c = counts.count(t_i, t_j);
    if (c == 0) {
        throw std::invalid_argument("no edge between topics " + std::to_string(t_i) +
                                    " and " + std::to_string(t_j));
    }
    const bool top_ranked = conditional_rank(counts, strengths, t_i, t_j) == 1 ||
                            conditional_rank(counts, strengths, t_j, t_i) == 1;
    const double jac = jaccard(topics[static_cast<std::size_t>(t_i)],
                               topics[static_cast<std::size_t>(t_j)]);
    return (1.0 + config.lambda1 * (top_ranked ? 1.0 : 0.0) +
            config.lambda2 * jac) *
           static_cast<double>(c);
}

TopicGraph build_graph(const TopicSet& topics, const CooccurrenceCounts& counts,
                       const GraphConfig& config) {
    if (!std::isfinite(config.lambda1) || !std::isfinite(config.lambda2) ||
        config.lambda1 < 0 || config.lambda2 < 0) {
        throw std::invalid_argument("lambda1 and lambda2 must be finite and >= 0");
    }
    const auto n = static_cast<std::int32_t>(topics.size());
    TopicGraph g;
    g.topics = topics.topics;
    g.doc_freq = topics.doc_freq;
    g.index = topics.index;
    g.config = config;
    g.strength.assign(topics.size(), 0);
    g.degree.assign(topics.size(), 0);
    g.incident.assign(topics.size(), {});

    const auto pairs = counts.sorted_pairs();
    g.edges.reserve(pairs.size());
    for (const auto& [i, j, c] : pairs) {
        if (i < 0 || j >= n) {
            throw std::out_of_range("co-occurrence pair (" + std::to_string(i) +
                                    ", " + std::to_string(j) +
                                    ") references an unknown topic id");
        }
        if (c <= 0) {
            throw std::invalid_argument("stored co-occurrence counts must be >= 1");
        }
        g.edges.push_back({i, j, c, 0.0});
        g.strength[static_cast<std::size_t>(i)] += c;
        g.strength[static_cast<std::size_t>(j)] += c;
        g.degree[static_cast<std::size_t>(i)] += 1;
        g.degree[static_cast<std::size_t>(j)] += 1;
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        g.incident[static_cast<std::size_t>(g.edges[e].u)].push_back(
            static_cast<std::int32_t>(e));
        g.incident[static_cast<std::size_t>(g.edges[e].v)].push_back(
            static_cast<std::int32_t>(e));
    }

    // max_count[j] = largest count to a neighbor stronger than j; an edge
    // (i, j) has rank(i|j) = 1 exactly when count >= max_count[j].
    std::vector<std::int64_t> max_count(topics.size(), 0);
    for (const auto& edge : g.edges) {
        if (g.strength[static_cast<std::size_t>(edge.u)] >
            g.strength[static_cast<std::size_t>(edge.v)]) {
            max_count[static_cast<std::size_t>(edge.v)] =
                std::max(max_count[static_cast<std::size_t>(edge.v)], edge.count);
        }
        if (g.strength[static_cast<std::size_t>(edge.v)] >
            g.strength[static_cast<std::size_t>(edge.u)]) {
            max_count[static_cast<std::size_t>(edge.u)] =
                std::max(max_count[static_cast<std::size_t>(edge.u)], edge.count);
        }
    }
    for (auto& edge : g.edges) {
        const bool top_ranked =
            edge.count >= max_count[static_cast<std::size_t>(edge.u)] ||
            edge.count >= max_count[static_cast<std::size_t>(edge.v)];
        const double jac = jaccard(g.topics[static_cast<std::size_t>(edge.u)],
                                   g.topics[static_cast<std::size_t>(edge.v)]);
        edge.weight = (1.0 + config.lambda1 * (top_ranked ? 1.0 : 0.0) +
                       config.lambda2 * jac) *
                      static_cast<double>(edge.count);
    }
    return g;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void save_graph(const TopicGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw std::runtime_error("cannot write graph file: " + path.string());
    }
    out << "H\t" << format_double(graph.config.lambda1) << '\t'
        << format_double(graph.config.lambda2) << '\n';
    for (std::size_t i = 0; i < graph.num_vertices(); ++i) {
        out << "V\t" << i << '\t' << graph.strength[i] << '\t' << graph.degree[i]
            << '\n';
    }
    for (const auto& edge : graph.edges) {
        out << "E\t" << edge.u << '\t' << edge.v << '\t' << edge.count << '\t'
            << format_double(edge.weight) << '\n';
    }
}

TopicGraph load_graph(const std::filesystem::path& path, const TopicSet& topics) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open graph file: " + path.string());
    }
    TopicGraph g;
    g.topics = topics.topics;
    g.doc_freq = topics.doc_freq;
    g.index = topics.index;
    g.strength.assign(topics.size(), 0);
    g.degree.assign(topics.size(), 0);
    g.incident.assign(topics.size(), {});

    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tag;
        std::getline(ss, tag, '\t');
        const std::string where =
            " at line " + std::to_string(lineno) + " in " + path.string();
        if (tag == "H") {
            std::string l1, l2;
            if (!std::getline(ss, l1, '\t') || !std::getline(ss, l2)) {
                throw std::runtime_error("malformed graph header" + where);
            }
            g.config.lambda1 = std::stod(l1);
            g.config.lambda2 = std::stod(l2);
            saw_header = true;
        } else if (tag == "V") {
            std::string id_str, s_str, k_str;
            if (!std::getline(ss, id_str, '\t') || !std::getline(ss, s_str, '\t') ||
                !std::getline(ss, k_str)) {
                throw std::runtime_error("malformed vertex line" + where);
            }
            const auto id = static_cast<std::size_t>(std::stoll(id_str));
            if (id >= g.strength.size()) {
                throw std::runtime_error("vertex id out of range" + where);
            }
            g.strength[id] = std::stoll(s_str);
            g.degree[id] = static_cast<std::int32_t>(std::stoll(k_str));
        } else if (tag == "E") {
            std::string u_str, v_str, c_str, w_str;
            if (!std::getline(ss, u_str, '\t') || !std::getline(ss, v_str, '\t') ||
                !std::getline(ss, c_str, '\t') || !std::getline(ss, w_str)) {
                throw std::runtime_error("malformed edge line" + where);
            }
            TopicGraph::Edge edge;
            edge.u = static_cast<std::int32_t>(std::stoll(u_str));
            edge.v = static_cast<std::int32_t>(std::stoll(v_str));
            edge.count = std::stoll(c_str);
            edge.weight = std::stod(w_str);
            if (edge.u < 0 || edge.v <= edge.u ||
                static_cast<std::size_t>(edge.v) >= g.strength.size()) {
                throw std::runtime_error("edge ids out of range" + where);
            }
            g.incident[static_cast<std::size_t>(edge.u)].push_back(
                static_cast<std::int32_t>(g.edges.size()));
            g.incident[static_cast<std::size_t>(edge.v)].push_back(
                static_cast<std::int32_t>(g.edges.size()));
            g.edges.push_back(edge);
        } else {
            throw std::runtime_error("unknown record tag '" + tag + "'" + where);
        }
    }
    if (!saw_header) {
        throw std::runtime_error("graph file missing header: " + path.string());
    }
    return g;
}

}  // namespace topictax
