// End-to-end tests that drive the command-line binary against the bundled
// fixture corpus. The binary path and data directory come from the
// environment (set by ctest).
#include "doctest.h"

#include <cstdlib>
#include <string>

#include "oracles.hpp"
#include "test_util.hpp"
#include "topictax/config.hpp"
#include "topictax/taxonomy.hpp"
#include "topictax/topic_extraction.hpp"

using namespace topictax;

namespace {

std::string env_or_fail(const char* name) {
    const char* value = std::getenv(name);
    REQUIRE_MESSAGE(value != nullptr, name << " must be set");
    return value;
}

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const testutil::TempDir& dir,
                  const std::string& tag) {
    const std::string out_path = dir.file("cli_" + tag + ".log").string();
    const std::string command =
        env_or_fail("TOPICTAX_BIN") + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = testutil::read_file(out_path);
    return result;
}

std::string data_file(const std::string& name) {
    return env_or_fail("TOPICTAX_DATA") + "/" + name;
}

std::string golden_file(const std::string& name) {
    return env_or_fail("TOPICTAX_GOLDEN") + "/" + name;
}

}  // namespace

TEST_CASE("bundled stopword files match the built-in defaults") {
    CHECK(load_word_set(data_file("stopwords.txt")) == default_stopwords());
    CHECK(load_word_set(data_file("prepositions.txt")) == default_prepositions());
}

TEST_CASE("extract output matches the brute-force reference on the fixture") {
    testutil::TempDir dir("pipeline");
    const std::string topics_path = dir.file("topics.tsv").string();
    const std::string cooc_path = dir.file("cooc.tsv").string();
    const RunResult run = run_cli("extract " + data_file("fixture_corpus.jsonl") +
                                      " --out-topics " + topics_path +
                                      " --out-cooc " + cooc_path,
                                  dir, "extract");
    REQUIRE(run.exit_code == 0);

    const auto docs = load_corpus(data_file("fixture_corpus.jsonl"));
    std::vector<TokenSequence> titles;
    for (const auto& d : docs) titles.push_back(normalize(d.title));
    const auto ref = oracle::extract_reference(titles, default_stopwords(),
                                               default_prepositions(), 3);
    const TopicSet topics = load_topics(topics_path);
    REQUIRE(topics.topics == ref.merged);

    const auto ref_counts = oracle::count_reference(docs, topics.topics);
    CHECK(topics.doc_freq == ref_counts.doc_freq);
    const CooccurrenceCounts counts =
        load_cooccurrence(cooc_path, static_cast<std::int32_t>(topics.size()));
    REQUIRE(counts.num_pairs() == ref_counts.pair_counts.size());
    for (const auto& [pair, c] : ref_counts.pair_counts) {
        CHECK(counts.count(pair.first, pair.second) == c);
    }
}

TEST_CASE("extract and build-graph reproduce the golden files") {
    testutil::TempDir dir("pipeline");
    const std::string topics_path = dir.file("topics.tsv").string();
    const std::string cooc_path = dir.file("cooc.tsv").string();
    REQUIRE(run_cli("extract " + data_file("fixture_corpus.jsonl") +
                        " --out-topics " + topics_path + " --out-cooc " + cooc_path,
                    dir, "extract")
                .exit_code == 0);
    CHECK(testutil::read_file(topics_path) ==
          testutil::read_file(golden_file("fixture_topics.tsv")));
    CHECK(testutil::read_file(cooc_path) ==
          testutil::read_file(golden_file("fixture_cooc.tsv")));

    const std::string graph_path = dir.file("graph.tsv").string();
    REQUIRE(run_cli("build-graph --topics " + topics_path + " --cooc " + cooc_path +
                        " --out " + graph_path,
                    dir, "graph")
                .exit_code == 0);
    CHECK(testutil::read_file(graph_path) ==
          testutil::read_file(golden_file("fixture_graph.tsv")));
    // The header stamps the weight configuration.
    CHECK(testutil::read_file(graph_path).substr(0, 6) == "H\t1\t1\n");
}

TEST_CASE("missing corpus file fails and names the path") {
    testutil::TempDir dir("pipeline");
    const RunResult run =
        run_cli("extract /definitely/missing.jsonl", dir, "missing");
    CHECK(run.exit_code != 0);
    CHECK(run.output.find("/definitely/missing.jsonl") != std::string::npos);
}

TEST_CASE("full pipeline is byte-identical across reruns") {
    testutil::TempDir dir("pipeline");
    auto run_once = [&](const std::string& tag) {
        const std::string topics_path = dir.file(tag + "_topics.tsv").string();
        const std::string cooc_path = dir.file(tag + "_cooc.tsv").string();
        const std::string graph_path = dir.file(tag + "_graph.tsv").string();
        const std::string tax_path = dir.file(tag + "_tax.json").string();
        REQUIRE(run_cli("extract " + data_file("fixture_corpus.jsonl") +
                            " --out-topics " + topics_path + " --out-cooc " +
                            cooc_path,
                        dir, tag + "_extract")
                    .exit_code == 0);
        REQUIRE(run_cli("build-graph --topics " + topics_path + " --cooc " +
                            cooc_path + " --out " + graph_path,
                        dir, tag + "_graph")
                    .exit_code == 0);
        REQUIRE(run_cli("query --graph " + graph_path + " --topics " + topics_path +
                            " --query \"machine translation\" --kmin 2 --smin 2 "
                            "--beta 4 --min-partition-size 3 --seed 7 --out " +
                            tax_path,
                        dir, tag + "_query")
                    .exit_code == 0);
        return testutil::read_file(topics_path) + testutil::read_file(cooc_path) +
               testutil::read_file(graph_path) + testutil::read_file(tax_path);
    };
    CHECK(run_once("a") == run_once("b"));
}

TEST_CASE("known query reproduces the golden taxonomy") {
    testutil::TempDir dir("pipeline");
    const std::string tax_path = dir.file("tax.json").string();
    const std::string dot_path = dir.file("tax.dot").string();
    const RunResult run = run_cli(
        "query --graph " + golden_file("fixture_graph.tsv") + " --topics " +
            golden_file("fixture_topics.tsv") +
            " --query \"machine translation\" --kmin 2 --smin 2 --beta 4 "
            "--min-partition-size 3 --seed 7 --out " +
            tax_path + " --dot " + dot_path,
        dir, "query");
    REQUIRE(run.exit_code == 0);
    CHECK(testutil::read_file(tax_path) ==
          testutil::read_file(golden_file("fixture_taxonomy.json")));

    // Structure class of the worked figure: a multi-branch two-level tree.
    const Taxonomy tax = Taxonomy::from_json(testutil::read_file(tax_path));
    CHECK(tax.root_topic() == "machine translation");
    CHECK(tax.node(0).children.size() >= 2);
    int max_depth = 0;
    for (const auto& node : tax.nodes()) max_depth = std::max(max_depth, node.depth);
    CHECK(max_depth >= 2);
    CHECK(testutil::read_file(dot_path).substr(0, 8) == "digraph ");
}

TEST_CASE("unknown multiword query fails, unknown unigram expands") {
    testutil::TempDir dir("pipeline");
    const std::string base = " --graph " + golden_file("fixture_graph.tsv") +
                             " --topics " + golden_file("fixture_topics.tsv") +
                             " --kmin 2 --smin 2 ";
    const RunResult bad =
        run_cli("query" + base + "--query \"no such topic\"", dir, "bad");
    CHECK(bad.exit_code != 0);
    CHECK(bad.output.find("no such topic") != std::string::npos);

    const std::string tax_path = dir.file("expanded.json").string();
    const RunResult good = run_cli(
        "query" + base + "--query database --out " + tax_path, dir, "expand");
    REQUIRE(good.exit_code == 0);
    CHECK(good.output.find("expansion\t") != std::string::npos);
    CHECK(good.output.find("database system") != std::string::npos);
    const Taxonomy tax = Taxonomy::from_json(testutil::read_file(tax_path));
    CHECK(tax.root_topic() == "database");
}

TEST_CASE("query with an empty subgraph emits a root-only taxonomy") {
    testutil::TempDir dir("pipeline");
    const std::string tax_path = dir.file("empty.json").string();
    // Impossible strength floor empties the subgraph.
    const RunResult run = run_cli(
        "query --graph " + golden_file("fixture_graph.tsv") + " --topics " +
            golden_file("fixture_topics.tsv") +
            " --query \"machine translation\" --smin 100000 --out " + tax_path,
        dir, "empty");
    REQUIRE(run.exit_code == 0);
    const Taxonomy tax = Taxonomy::from_json(testutil::read_file(tax_path));
    CHECK(tax.size() == 1);
}

TEST_CASE("gold evaluation reports the worked partial score") {
    testutil::TempDir dir("pipeline");
    // Taxonomy R -> A -> B -> C; gold edges give R -> A -> C.
    testutil::write_file(dir.file("tax.json"),
                         R"({"topic":"R","children":[{"topic":"A","children":[
                             {"topic":"B","children":[{"topic":"C","children":[]}]}]}]})");
    testutil::write_file(dir.file("edges.tsv"),
                         "R\tA\tcategory\nA\tC\tpage\n");
    testutil::write_file(dir.file("topics.tsv"), "0\tA\t1\n1\tC\t1\n");
    const RunResult run = run_cli("eval --mode gold --taxonomy " +
                                      dir.file("tax.json").string() +
                                      " --gold-edges " + dir.file("edges.tsv").string() +
                                      " --topics " + dir.file("topics.tsv").string(),
                                  dir, "gold");
    REQUIRE(run.exit_code == 0);
    CHECK(run.output.find("relations\t2") != std::string::npos);
    CHECK(run.output.find("node\tC\t0\t0.5") != std::string::npos);
    CHECK(run.output.find("node\tA\t1\t1") != std::string::npos);

    // A taxonomy evaluated against its own structure is fully exact.
    testutil::write_file(dir.file("self.json"),
                         R"({"topic":"R","children":[{"topic":"A","children":[
                             {"topic":"C","children":[]}]}]})");
    const RunResult self_run =
        run_cli("eval --mode gold --taxonomy " + dir.file("self.json").string() +
                    " --gold-edges " + dir.file("edges.tsv").string() +
                    " --topics " + dir.file("topics.tsv").string(),
                dir, "gold_self");
    REQUIRE(self_run.exit_code == 0);
    CHECK(self_run.output.find("exact\t1\n") != std::string::npos);
    CHECK(self_run.output.find("partial\t1\n") != std::string::npos);
}

TEST_CASE("judgment evaluation reports precision, agreement and kappa") {
    testutil::TempDir dir("pipeline");
    testutil::write_file(dir.file("tax.json"),
                         R"({"topic":"R","children":[{"topic":"alpha beta","children":[]},
                             {"topic":"gamma delta","children":[]}]})");
    testutil::write_file(dir.file("judgments.tsv"),
                         "j1\talpha beta\t1\t1\n"
                         "j1\tgamma delta\t1\t0\n"
                         "j2\talpha beta\t1\t1\n"
                         "j2\tgamma delta\t0\t0\n");
    const RunResult run =
        run_cli("eval --mode judgments --taxonomy " + dir.file("tax.json").string() +
                    " --judgments " + dir.file("judgments.tsv").string(),
                dir, "judgments");
    REQUIRE(run.exit_code == 0);
    // j1: P 1, SP 0.5; j2: P 0.5, SP 0.5.
    CHECK(run.output.find("precision\t0.75") != std::string::npos);
    CHECK(run.output.find("semantic_precision\t0.5") != std::string::npos);
    CHECK(run.output.find("agreement_p\t0.5") != std::string::npos);
    CHECK(run.output.find("kappa_p\t") != std::string::npos);
    CHECK(run.output.find("kappa_sp\t1") != std::string::npos);
}

TEST_CASE("hac baseline emits a clustered taxonomy") {
    testutil::TempDir dir("pipeline");
    const std::string tax_path = dir.file("tax.json").string();
    REQUIRE(run_cli("query --graph " + golden_file("fixture_graph.tsv") +
                        " --topics " + golden_file("fixture_topics.tsv") +
                        " --query \"machine translation\" --kmin 2 --smin 2 "
                        "--beta 4 --min-partition-size 3 --seed 7 --out " +
                        tax_path,
                    dir, "query")
                .exit_code == 0);
    const std::string hac_path = dir.file("hac.json").string();
    const RunResult run = run_cli(
        "eval --mode hac-baseline --taxonomy " + tax_path + " --corpus " +
            data_file("fixture_corpus.jsonl") + " --graph " +
            golden_file("fixture_graph.tsv") + " --topics " +
            golden_file("fixture_topics.tsv") + " --out " + hac_path,
        dir, "hac");
    REQUIRE(run.exit_code == 0);
    const Taxonomy original = Taxonomy::from_json(testutil::read_file(tax_path));
    const Taxonomy clustered = Taxonomy::from_json(testutil::read_file(hac_path));
    CHECK(clustered.root_topic() == "machine translation");
    CHECK(clustered.size() == original.size());
}

TEST_CASE("dumped config reproduces identical outputs") {
    testutil::TempDir dir("pipeline");
    const std::string cfg_path = dir.file("effective.json").string();
    const std::string tax_a = dir.file("tax_a.json").string();
    const std::string tax_b = dir.file("tax_b.json").string();
    const std::string base = "query --graph " + golden_file("fixture_graph.tsv") +
                             " --topics " + golden_file("fixture_topics.tsv") +
                             " --query \"machine translation\"";
    REQUIRE(run_cli(base + " --kmin 2 --smin 2 --beta 4 --seed 11 --out " + tax_a +
                        " --dump-config " + cfg_path,
                    dir, "dump")
                .exit_code == 0);
    const PipelineConfig cfg = PipelineConfig::load(cfg_path);
    CHECK(cfg.k_min == 2);
    CHECK(cfg.seed == 11);
    REQUIRE(run_cli(base + " --config " + cfg_path + " --out " + tax_b, dir,
                    "reload")
                .exit_code == 0);
    CHECK(testutil::read_file(tax_a) == testutil::read_file(tax_b));
}
