#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "topictax/config.hpp"
#include "topictax/corpus.hpp"
#include "topictax/evaluation.hpp"
#include "topictax/partitioner.hpp"
#include "topictax/query_subgraph.hpp"
#include "topictax/taxonomy.hpp"
#include "topictax/topic_extraction.hpp"
#include "topictax/topic_graph.hpp"

namespace py = pybind11;
using namespace topictax;

namespace {

// extract_ngrams + discount + merge + co-occurrence in one call.
std::pair<TopicSet, CooccurrenceCounts> run_extraction(
    const std::vector<Document>& docs, int min_count,
    const std::vector<std::string>& stopwords,
    const std::vector<std::string>& prepositions) {
    std::vector<TokenSequence> titles;
    titles.reserve(docs.size());
    for (const Document& doc : docs) titles.push_back(normalize(doc.title));
    const WordSet stop = stopwords.empty()
                             ? default_stopwords()
                             : WordSet(stopwords.begin(), stopwords.end());
    const WordSet prep = prepositions.empty()
                             ? default_prepositions()
                             : WordSet(prepositions.begin(), prepositions.end());
    CandidateSet candidates = extract_ngrams(titles, stop, prep, min_count);
    discount_counts(candidates, min_count);
    TopicSet topics = merge_candidates(candidates);
    CooccurrenceCounts counts(static_cast<std::int32_t>(topics.size()));
    if (topics.size() > 0) {
        counts = count_cooccurrence(docs, topics);
    }
    return {std::move(topics), std::move(counts)};
}

}  // namespace

PYBIND11_MODULE(_topictax, m) {
    m.doc() = "query-dependent topic taxonomy generation";

    py::class_<Document>(m, "Document")
        .def(py::init<>())
        .def(py::init([](std::string id, std::string title, std::string abstract) {
                 return Document{std::move(id), std::move(title), std::move(abstract)};
             }),
             py::arg("id"), py::arg("title"), py::arg("abstract") = "")
        .def_readwrite("id", &Document::doc_id)
        .def_readwrite("title", &Document::title)
        .def_readwrite("abstract", &Document::abstract_text);

    py::class_<TopicSet>(m, "TopicSet")
        .def_readonly("topics", &TopicSet::topics)
        .def_readonly("doc_freq", &TopicSet::doc_freq)
        .def("id_of", &TopicSet::id_of)
        .def("__len__", [](const TopicSet& t) { return t.size(); });

    py::class_<CooccurrenceCounts>(m, "CooccurrenceCounts")
        .def("count", &CooccurrenceCounts::count)
        .def("pairs", &CooccurrenceCounts::sorted_pairs)
        .def("__len__", [](const CooccurrenceCounts& c) { return c.num_pairs(); });

    py::class_<TopicGraph>(m, "TopicGraph")
        .def_readonly("topics", &TopicGraph::topics)
        .def_readonly("strength", &TopicGraph::strength)
        .def_readonly("degree", &TopicGraph::degree)
        .def("id_of", &TopicGraph::id_of)
        .def("count_between", &TopicGraph::count_between)
        .def("conditional_rank", &TopicGraph::conditional_rank)
        .def("num_edges", &TopicGraph::num_edges)
        .def("__len__", [](const TopicGraph& g) { return g.num_vertices(); });

    py::class_<Subgraph>(m, "Subgraph")
        .def_readonly("query", &Subgraph::query)
        .def_readonly("expansion", &Subgraph::expansion)
        .def_readonly("vertices", &Subgraph::vertices)
        .def("__len__", [](const Subgraph& s) { return s.size(); });

    py::class_<Taxonomy>(m, "Taxonomy")
        .def_static("from_json", &Taxonomy::from_json)
        .def("to_json", &Taxonomy::to_json)
        .def("to_dot", &Taxonomy::to_dot)
        .def("root_topic", &Taxonomy::root_topic)
        .def("__len__", [](const Taxonomy& t) { return t.size(); });

    m.def("normalize", [](const std::string& text) { return normalize(text); },
          py::arg("text"));
    m.def("load_corpus",
          [](const std::filesystem::path& path) { return load_corpus(path); },
          py::arg("path"));
    m.def("extract_topics", &run_extraction, py::arg("documents"),
          py::arg("min_count") = 3,
          py::arg("stopwords") = std::vector<std::string>{},
          py::arg("prepositions") = std::vector<std::string>{},
          "Extract candidate topics and document co-occurrence counts.");
    m.def(
        "build_graph",
        [](const TopicSet& topics, const CooccurrenceCounts& counts, double lambda1,
           double lambda2) {
            return build_graph(topics, counts, GraphConfig{lambda1, lambda2});
        },
        py::arg("topics"), py::arg("counts"), py::arg("lambda1") = 1.0,
        py::arg("lambda2") = 1.0);
    m.def("jaccard", &jaccard, py::arg("a"), py::arg("b"));
    m.def(
        "select_subgraph",
        [](const TopicGraph& graph, const std::string& query, int r_max, int k_min,
           std::int64_t s_min, int expansion_k, int max_vertices) {
            QueryConfig cfg{r_max, k_min, s_min, expansion_k, max_vertices};
            const std::int32_t id = graph.id_of(query);
            if (id >= 0) return select_subgraph(graph, id, cfg);
            return expand_query(graph, query, cfg);
        },
        py::arg("graph"), py::arg("query"), py::arg("r_max") = 3,
        py::arg("k_min") = 10, py::arg("s_min") = 20, py::arg("expansion_k") = 3,
        py::arg("max_vertices") = 200, py::keep_alive<0, 1>());
    m.def(
        "build_taxonomy",
        [](const Subgraph& sub, int alpha, int beta, int min_partition_size,
           double balance_epsilon, std::uint64_t seed) {
            PartitionConfig cfg;
            cfg.alpha = alpha;
            cfg.beta = beta;
            cfg.min_partition_size = min_partition_size;
            cfg.balance_epsilon = balance_epsilon;
            cfg.seed = seed;
            return build_taxonomy(sub, cfg);
        },
        py::arg("subgraph"), py::arg("alpha") = 200, py::arg("beta") = 20,
        py::arg("min_partition_size") = 5, py::arg("balance_epsilon") = 0.2,
        py::arg("seed") = 1);
    m.def(
        "exact_match",
        [](const std::string& taxonomy_json, const std::string& gold_json) {
            return exact_match(Taxonomy::from_json(taxonomy_json),
                               Taxonomy::from_json(gold_json));
        },
        py::arg("taxonomy_json"), py::arg("gold_json"));
    m.def(
        "partial_match",
        [](const std::string& taxonomy_json, const std::string& gold_json) {
            return partial_match(Taxonomy::from_json(taxonomy_json),
                                 Taxonomy::from_json(gold_json));
        },
        py::arg("taxonomy_json"), py::arg("gold_json"));
    m.def(
        "build_gold_standard",
        [](const std::vector<std::tuple<std::string, std::string, std::string>>& edges,
           const std::string& root, const std::vector<std::string>& candidates,
           int max_depth) {
            std::vector<CategoryEdge> parsed;
            parsed.reserve(edges.size());
            for (const auto& [p, c, kind] : edges) parsed.push_back({p, c, kind});
            return build_gold_standard(
                parsed, root,
                std::unordered_set<std::string>(candidates.begin(), candidates.end()),
                max_depth);
        },
        py::arg("edges"), py::arg("root"), py::arg("candidates"),
        py::arg("max_depth") = 4);
    m.def(
        "hac_baseline",
        [](const std::vector<std::string>& topics,
           const std::vector<std::vector<double>>& vectors,
           const std::vector<std::int64_t>& strengths, const std::string& root) {
            HacOptions options;
            options.root = root;
            return hac_baseline(topics, vectors, strengths, options).taxonomy;
        },
        py::arg("topics"), py::arg("doc_vectors"), py::arg("strengths"),
        py::arg("root") = "root");
}
