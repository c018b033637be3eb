#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "topictax/config.hpp"
#include "topictax/corpus.hpp"
#include "topictax/evaluation.hpp"
#include "topictax/partitioner.hpp"
#include "topictax/query_subgraph.hpp"
#include "topictax/taxonomy.hpp"
#include "topictax/topic_extraction.hpp"
#include "topictax/topic_graph.hpp"

namespace {

using namespace topictax;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw std::runtime_error("cannot write output file: " + path);
    }
    out << text;
}

WordSet resolve_words(const std::string& path, const WordSet& fallback) {
    if (path.empty()) return fallback;
    return load_word_set(path);
}

struct CommonOpts {
    std::string config_path;
    std::string dump_config_path;
};

// File config first, then explicit flags on top.
void add_config_flags(CLI::App* cmd, CommonOpts& common, PipelineConfig& cfg) {
    cmd->add_option("--config", common.config_path, "JSON config file");
    cmd->add_option("--dump-config", common.dump_config_path,
                    "write the effective config to this path");
    cmd->add_option("--min-count", cfg.min_count, "minimum ngram title count");
    cmd->add_option("--stopwords", cfg.stopwords_path, "stopword list file");
    cmd->add_option("--prepositions", cfg.prepositions_path,
                    "preposition list file");
    cmd->add_option("--lambda1", cfg.lambda1, "rank-boost coefficient");
    cmd->add_option("--lambda2", cfg.lambda2, "lexical-similarity coefficient");
    cmd->add_option("--rmax", cfg.r_max, "maximum conditional rank");
    cmd->add_option("--kmin", cfg.k_min, "minimum vertex degree");
    cmd->add_option("--smin", cfg.s_min, "minimum vertex strength");
    cmd->add_option("--expansion-k", cfg.expansion_k,
                    "expansion topics for unknown single-word queries");
    cmd->add_option("--max-vertices", cfg.max_vertices,
                    "cap on subgraph size (0 = unlimited)");
    cmd->add_option("--alpha", cfg.alpha, "partition-count numerator cap");
    cmd->add_option("--beta", cfg.beta, "vertices per partition");
    cmd->add_option("--min-partition-size", cfg.min_partition_size,
                    "recursion stops below this partition size");
    cmd->add_option("--balance-epsilon", cfg.balance_epsilon,
                    "allowed strength imbalance");
    cmd->add_option("--coarsen-stop", cfg.coarsen_stop,
                    "coarsening floor (0 = automatic)");
    cmd->add_option("--seed", cfg.seed, "random seed");
}

void finish_config(const CLI::App* cmd, const CommonOpts& common,
                   PipelineConfig& cfg) {
    if (!common.config_path.empty()) {
        PipelineConfig file_cfg = PipelineConfig::load(common.config_path);
        // Keep any value set explicitly on the command line.
        PipelineConfig merged = file_cfg;
        auto keep = [&](const std::string& flag) {
            return cmd->count(flag) > 0;
        };
        if (keep("--min-count")) merged.min_count = cfg.min_count;
        if (keep("--stopwords")) merged.stopwords_path = cfg.stopwords_path;
        if (keep("--prepositions")) merged.prepositions_path = cfg.prepositions_path;
        if (keep("--lambda1")) merged.lambda1 = cfg.lambda1;
        if (keep("--lambda2")) merged.lambda2 = cfg.lambda2;
        if (keep("--rmax")) merged.r_max = cfg.r_max;
        if (keep("--kmin")) merged.k_min = cfg.k_min;
        if (keep("--smin")) merged.s_min = cfg.s_min;
        if (keep("--expansion-k")) merged.expansion_k = cfg.expansion_k;
        if (keep("--max-vertices")) merged.max_vertices = cfg.max_vertices;
        if (keep("--alpha")) merged.alpha = cfg.alpha;
        if (keep("--beta")) merged.beta = cfg.beta;
        if (keep("--min-partition-size")) {
            merged.min_partition_size = cfg.min_partition_size;
        }
        if (keep("--balance-epsilon")) merged.balance_epsilon = cfg.balance_epsilon;
        if (keep("--coarsen-stop")) merged.coarsen_stop = cfg.coarsen_stop;
        if (keep("--seed")) merged.seed = cfg.seed;
        cfg = merged;
    }
    if (!common.dump_config_path.empty()) {
        write_text(common.dump_config_path, cfg.dump());
    }
}

int cmd_extract(const std::string& corpus_path, const PipelineConfig& cfg,
                const std::string& out_topics, const std::string& out_cooc) {
    std::size_t skipped = 0;
    std::vector<Document> docs = load_corpus(corpus_path, &skipped);
    if (skipped > 0) {
        std::cerr << "warning: skipped " << skipped << " malformed corpus lines\n";
    }
    std::vector<TokenSequence> titles;
    titles.reserve(docs.size());
    for (const Document& doc : docs) {
        titles.push_back(normalize(doc.title));
    }
    const WordSet stopwords = resolve_words(cfg.stopwords_path, default_stopwords());
    const WordSet prepositions =
        resolve_words(cfg.prepositions_path, default_prepositions());

    CandidateSet candidates =
        extract_ngrams(titles, stopwords, prepositions, cfg.min_count);
    discount_counts(candidates, cfg.min_count);
    TopicSet topics = merge_candidates(candidates);
    if (topics.size() == 0) {
        std::cerr << "warning: no topics survived extraction\n";
        save_topics(topics, out_topics);
        write_text(out_cooc, "");
        return 0;
    }
    const CooccurrenceCounts counts = count_cooccurrence(docs, topics);
    save_topics(topics, out_topics);
    save_cooccurrence(counts, out_cooc);
    std::cout << "documents\t" << docs.size() << "\n"
              << "skipped\t" << skipped << "\n"
              << "topics\t" << topics.size() << "\n"
              << "pairs\t" << counts.num_pairs() << "\n";
    return 0;
}

int cmd_build_graph(const std::string& topics_path, const std::string& cooc_path,
                    const PipelineConfig& cfg, const std::string& out_path) {
    TopicSet topics = load_topics(topics_path);
    const CooccurrenceCounts counts =
        load_cooccurrence(cooc_path, static_cast<std::int32_t>(topics.size()));
    const TopicGraph graph = build_graph(topics, counts, cfg.graph_config());
    save_graph(graph, out_path);
    std::cout << "vertices\t" << graph.num_vertices() << "\n"
              << "edges\t" << graph.num_edges() << "\n";
    return 0;
}

int cmd_query(const std::string& graph_path, const std::string& topics_path,
              const std::string& query, const PipelineConfig& cfg,
              const std::string& out_path, const std::string& dot_path) {
    const TopicSet topics = load_topics(topics_path);
    const TopicGraph graph = load_graph(graph_path, topics);

    Subgraph sub;
    const std::int32_t query_id = graph.id_of(query);
    if (query_id >= 0) {
        sub = select_subgraph(graph, query_id, cfg.query_config());
    } else {
        const TokenSequence query_tokens = normalize(query);
        if (query_tokens.size() != 1) {
            std::cerr << "error: unknown multi-word query '" << query << "'\n";
            return 1;
        }
        sub = expand_query(graph, join_tokens(query_tokens), cfg.query_config());
        std::cout << "expansion";
        for (const std::string& t : sub.expansion) std::cout << '\t' << t;
        std::cout << "\n";
    }
    std::cout << "subgraph_vertices\t" << sub.size() << "\n"
              << "subgraph_edges\t" << sub.edge_indices.size() << "\n";

    const TaxonomyResult result = build_taxonomy_result(sub, cfg.partition_config());
    if (result.balance_violated) {
        std::cerr << "warning: strength balance infeasible for some partition\n";
    }
    if (result.spectral_fallback) {
        std::cerr << "warning: eigensolver fallback used for some partition\n";
    }
    if (out_path.empty()) {
        std::cout << result.taxonomy.to_json();
    } else {
        write_text(out_path, result.taxonomy.to_json());
    }
    if (!dot_path.empty()) {
        write_text(dot_path, result.taxonomy.to_dot());
    }
    std::cout << "taxonomy_nodes\t" << result.taxonomy.size() << "\n";
    return 0;
}

std::string load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int eval_gold(const std::string& taxonomy_path, const std::string& edges_path,
              const std::string& topics_path, const std::string& out_path) {
    const Taxonomy taxonomy = Taxonomy::from_json(load_file(taxonomy_path));
    const std::vector<CategoryEdge> edges = load_category_edges(edges_path);
    const TopicSet topics = load_topics(topics_path);
    std::unordered_set<std::string> candidates(topics.topics.begin(),
                                               topics.topics.end());
    const Taxonomy gold =
        build_gold_standard(edges, taxonomy.root_topic(), candidates);
    const MatchReport report = match_report(taxonomy, gold);

    std::ostringstream out;
    out << "relations\t" << report.gold_nodes << "\n"
        << "present\t" << report.present_nodes << "\n"
        << "exact\t" << format_double(report.exact_fraction) << "\n"
        << "partial\t" << format_double(report.partial_mean) << "\n"
        << "exact_present\t" << format_double(report.exact_fraction_present) << "\n"
        << "partial_present\t" << format_double(report.partial_mean_present) << "\n";
    for (std::size_t i = 0; i < report.node_partial.size(); ++i) {
        out << "node\t" << report.node_partial[i].first << '\t'
            << (report.node_exact[i].second ? 1 : 0) << '\t'
            << format_double(report.node_partial[i].second) << "\n";
    }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        write_text(out_path, out.str());
    }
    return 0;
}

int eval_judgments(const std::string& taxonomy_path,
                   const std::string& judgments_path, const std::string& out_path) {
    const Taxonomy taxonomy = Taxonomy::from_json(load_file(taxonomy_path));
    const JudgmentSet judgments = JudgmentSet::load(judgments_path);

    std::ostringstream out;
    out << "precision\t" << format_double(precision(judgments, taxonomy)) << "\n"
        << "semantic_precision\t"
        << format_double(semantic_precision(judgments, taxonomy)) << "\n";

    // Pairwise agreement over the taxonomy topics, averaged across pairs.
    std::vector<std::string> topics;
    for (std::size_t i = 1; i < taxonomy.nodes().size(); ++i) {
        topics.push_back(taxonomy.nodes()[i].topic);
    }
    std::vector<std::string> judges;
    for (const auto& [judge, _] : judgments.by_judge) judges.push_back(judge);
    double agree_p = 0.0, kappa_p = 0.0, agree_sp = 0.0, kappa_sp = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < judges.size(); ++a) {
        for (std::size_t b = a + 1; b < judges.size(); ++b) {
            const auto& ja = judgments.by_judge.at(judges[a]);
            const auto& jb = judgments.by_judge.at(judges[b]);
            std::vector<bool> rel_a, rel_b, sem_a, sem_b;
            for (const std::string& topic : topics) {
                const auto ita = ja.find(topic);
                const auto itb = jb.find(topic);
                if ((ita == ja.end()) != (itb == jb.end())) {
                    throw std::runtime_error("judges '" + judges[a] + "' and '" +
                                             judges[b] +
                                             "' cover different node sets");
                }
                if (ita == ja.end()) continue;
                rel_a.push_back(ita->second.relevant);
                rel_b.push_back(itb->second.relevant);
                sem_a.push_back(ita->second.semantically_relevant);
                sem_b.push_back(itb->second.semantically_relevant);
            }
            if (rel_a.empty()) continue;
            const AgreementStats p_stats = agreement_and_kappa(rel_a, rel_b);
            const AgreementStats sp_stats = agreement_and_kappa(sem_a, sem_b);
            agree_p += p_stats.agreement;
            kappa_p += p_stats.kappa;
            agree_sp += sp_stats.agreement;
            kappa_sp += sp_stats.kappa;
            ++pairs;
        }
    }
    if (pairs > 0) {
        const auto np = static_cast<double>(pairs);
        out << "agreement_p\t" << format_double(agree_p / np) << "\n"
            << "kappa_p\t" << format_double(kappa_p / np) << "\n"
            << "agreement_sp\t" << format_double(agree_sp / np) << "\n"
            << "kappa_sp\t" << format_double(kappa_sp / np) << "\n";
    }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        write_text(out_path, out.str());
    }
    return 0;
}

int eval_hac(const std::string& taxonomy_path, const std::string& corpus_path,
             const std::string& graph_path, const std::string& topics_path,
             const std::string& out_path) {
    const Taxonomy taxonomy = Taxonomy::from_json(load_file(taxonomy_path));
    const TopicSet all_topics = load_topics(topics_path);
    const TopicGraph graph = load_graph(graph_path, all_topics);

    std::vector<std::string> topic_list;
    for (std::size_t i = 1; i < taxonomy.nodes().size(); ++i) {
        topic_list.push_back(taxonomy.nodes()[i].topic);
    }
    std::sort(topic_list.begin(), topic_list.end());
    if (topic_list.size() < 2) {
        std::cerr << "error: taxonomy has fewer than two topics to cluster\n";
        return 1;
    }

    // A reduced topic set holding just the taxonomy's topics, used to scan
    // the corpus for incidence vectors.
    TopicSet scan;
    scan.topics = topic_list;
    scan.doc_freq.assign(topic_list.size(), 0);
    for (std::size_t i = 0; i < topic_list.size(); ++i) {
        scan.index.emplace(topic_list[i], static_cast<std::int32_t>(i));
    }
    const std::vector<Document> docs = load_corpus(corpus_path);
    std::vector<std::vector<double>> vectors(topic_list.size(),
                                             std::vector<double>(docs.size(), 0.0));
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const TokenSequence tokens =
            normalize(docs[d].title + " " + docs[d].abstract_text);
        for (std::int32_t t : topics_in_tokens(tokens, scan)) {
            vectors[static_cast<std::size_t>(t)][d] = 1.0;
        }
    }
    std::vector<std::int64_t> strengths;
    for (const std::string& topic : topic_list) {
        const std::int32_t id = graph.id_of(topic);
        if (id < 0) {
            std::cerr << "error: taxonomy topic '" << topic
                      << "' is not in the topic set\n";
            return 1;
        }
        strengths.push_back(graph.strength[static_cast<std::size_t>(id)]);
    }

    HacOptions options;
    options.root = taxonomy.root_topic();
    const HacResult result = hac_baseline(topic_list, vectors, strengths, options);
    if (result.constant_vector) {
        std::cerr << "warning: zero-variance centroid encountered; correlation "
                     "treated as 0\n";
    }
    if (out_path.empty()) {
        std::cout << result.taxonomy.to_json();
    } else {
        write_text(out_path, result.taxonomy.to_json());
    }
    std::cout << "merges\t" << result.merges.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"query-dependent topic taxonomy generation"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    CommonOpts common;

    // extract
    auto* extract = app.add_subcommand(
        "extract", "extract topics and co-occurrence counts from a corpus");
    std::string corpus_path, out_topics = "topics.tsv", out_cooc = "cooc.tsv";
    extract->add_option("corpus", corpus_path, "corpus file (JSON lines)")
        ->required();
    extract->add_option("--out-topics", out_topics, "topic list output");
    extract->add_option("--out-cooc", out_cooc, "co-occurrence output");
    add_config_flags(extract, common, cfg);

    // build-graph
    auto* build = app.add_subcommand(
        "build-graph", "build the weighted topic association graph");
    std::string topics_path, cooc_path, graph_out = "graph.tsv";
    build->add_option("--topics", topics_path, "topic list file")->required();
    build->add_option("--cooc", cooc_path, "co-occurrence file")->required();
    build->add_option("--out", graph_out, "graph output");
    add_config_flags(build, common, cfg);

    // query
    auto* query = app.add_subcommand(
        "query", "select a query subgraph and build its taxonomy");
    std::string graph_path, query_topics_path, query_string, tax_out, dot_out;
    query->add_option("--graph", graph_path, "graph file")->required();
    query->add_option("--topics", query_topics_path, "topic list file")->required();
    query->add_option("--query", query_string, "query topic")->required();
    query->add_option("--out", tax_out, "taxonomy JSON output (default stdout)");
    query->add_option("--dot", dot_out, "also write DOT output here");
    add_config_flags(query, common, cfg);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a generated taxonomy");
    std::string mode, eval_taxonomy, gold_edges, eval_topics, judgments_path,
        eval_corpus, eval_graph, eval_out;
    eval->add_option("--mode", mode, "gold | judgments | hac-baseline")
        ->required()
        ->check(CLI::IsMember({"gold", "judgments", "hac-baseline"}));
    eval->add_option("--taxonomy", eval_taxonomy, "taxonomy JSON file")->required();
    eval->add_option("--gold-edges", gold_edges, "category edge file (gold mode)");
    eval->add_option("--topics", eval_topics,
                     "topic list file (gold and hac-baseline modes)");
    eval->add_option("--judgments", judgments_path,
                     "judgment file (judgments mode)");
    eval->add_option("--corpus", eval_corpus, "corpus file (hac-baseline mode)");
    eval->add_option("--graph", eval_graph, "graph file (hac-baseline mode)");
    eval->add_option("--out", eval_out, "report / baseline output (default stdout)");
    add_config_flags(eval, common, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) {
            finish_config(extract, common, cfg);
            return cmd_extract(corpus_path, cfg, out_topics, out_cooc);
        }
        if (build->parsed()) {
            finish_config(build, common, cfg);
            return cmd_build_graph(topics_path, cooc_path, cfg, graph_out);
        }
        if (query->parsed()) {
            finish_config(query, common, cfg);
            return cmd_query(graph_path, query_topics_path, query_string, cfg,
                             tax_out, dot_out);
        }
        if (eval->parsed()) {
            finish_config(eval, common, cfg);
            if (mode == "gold") {
                if (gold_edges.empty() || eval_topics.empty()) {
                    std::cerr << "error: gold mode needs --gold-edges and --topics\n";
                    return 1;
                }
                return eval_gold(eval_taxonomy, gold_edges, eval_topics, eval_out);
            }
            if (mode == "judgments") {
                if (judgments_path.empty()) {
                    std::cerr << "error: judgments mode needs --judgments\n";
                    return 1;
                }
                return eval_judgments(eval_taxonomy, judgments_path, eval_out);
            }
            if (eval_corpus.empty() || eval_graph.empty() || eval_topics.empty()) {
                std::cerr << "error: hac-baseline mode needs --corpus, --graph "
                             "and --topics\n";
                return 1;
            }
            return eval_hac(eval_taxonomy, eval_corpus, eval_graph, eval_topics,
                            eval_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
