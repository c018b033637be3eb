#include "doctest.h"

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "topictax/topic_extraction.hpp"

using namespace topictax;

namespace {

std::vector<TokenSequence> titles_of(const std::vector<std::string>& texts) {
    std::vector<TokenSequence> out;
    for (const auto& t : texts) out.push_back(normalize(t));
    return out;
}

const WordSet& stop() { return default_stopwords(); }
const WordSet& prep() { return default_prepositions(); }

}  // namespace

TEST_CASE("repeated trigram produces trigram and embedded bigrams") {
    const auto titles = titles_of({
        "support vector machine classification",
        "fast support vector machine",
        "support vector machine",
    });
    const CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    REQUIRE(set.trigrams.count("support vector machine") == 1);
    CHECK(set.trigrams.at("support vector machine").raw_count == 3);
    REQUIRE(set.bigrams.count("support vector") == 1);
    CHECK(set.bigrams.at("support vector").raw_count == 3);
    CHECK(set.bigrams.at("vector machine").raw_count == 3);
    CHECK(set.fourgrams.empty());
}

TEST_CASE("no candidate spans a stopword") {
    const auto titles = titles_of({
        "analysis of the web",
        "analysis of the web",
        "analysis of the web",
    });
    const CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    for (const auto& [key, _] : set.bigrams) {
        CHECK(key.find("the") == std::string::npos);
    }
    for (const auto& [key, _] : set.trigrams) {
        CHECK(key.find("the") == std::string::npos);
    }
    CHECK(set.trigrams.count("of the web") == 0);
    CHECK(set.bigrams.count("the web") == 0);
}

TEST_CASE("interior prepositions are allowed, edge prepositions are not") {
    const auto titles = titles_of({
        "quality of service guarantees",
        "quality of service routing",
        "measuring quality of service",
    });
    const CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    REQUIRE(set.trigrams.count("quality of service") == 1);
    CHECK(set.trigrams.at("quality of service").raw_count == 3);
    CHECK(set.bigrams.count("quality of") == 0);
    CHECK(set.bigrams.count("of service") == 0);
}

TEST_CASE("discounting subtracts embedded occurrences") {
    // "alpha beta" appears 5 times; 3 of those sit inside the kept trigram
    // "alpha beta gamma".
    const auto titles = titles_of({
        "alpha beta gamma",
        "alpha beta gamma",
        "alpha beta gamma",
        "alpha beta delta",
        "alpha beta code",
    });
    CandidateSet set = extract_ngrams(titles, stop(), prep(), 2);
    REQUIRE(set.bigrams.at("alpha beta").raw_count == 5);
    REQUIRE(set.trigrams.at("alpha beta gamma").raw_count == 3);
    discount_counts(set, 2);
    REQUIRE(set.bigrams.count("alpha beta") == 1);
    CHECK(set.bigrams.at("alpha beta").discounted_count == 2);
    // beta gamma appears only inside the kept trigram: discounted to 0.
    CHECK(set.bigrams.count("beta gamma") == 0);
}

TEST_CASE("bigram fully embedded in a kept trigram is dropped") {
    const auto titles = titles_of({
        "alpha beta gamma",
        "alpha beta gamma",
        "alpha beta gamma",
    });
    CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    REQUIRE(set.bigrams.at("alpha beta").raw_count == 3);
    discount_counts(set, 3);
    CHECK(set.bigrams.empty());
    CHECK(set.trigrams.count("alpha beta gamma") == 1);
}

TEST_CASE("bigram outside any kept higher ngram keeps its raw count") {
    const auto titles = titles_of({
        "alpha beta",
        "alpha beta",
        "alpha beta",
        "gamma delta unrelated",
    });
    CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    discount_counts(set, 3);
    REQUIRE(set.bigrams.count("alpha beta") == 1);
    CHECK(set.bigrams.at("alpha beta").discounted_count == 3);
}

TEST_CASE("merge assigns lexicographic ids") {
    const auto titles = titles_of({
        "alpha beta gamma",
        "alpha beta gamma",
        "alpha beta gamma",
        "alpha beta",
        "alpha beta",
    });
    CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    discount_counts(set, 3);
    const TopicSet topics = merge_candidates(set);
    // "alpha beta" has raw 5, 3 embedded -> discounted 2 -> dropped.
    REQUIRE(topics.size() == 1);
    CHECK(topics.topics[0] == "alpha beta gamma");

    const TopicSet empty = merge_candidates(CandidateSet{});
    CHECK(empty.size() == 0);
}

TEST_CASE("merge orders mixed-length candidates lexicographically") {
    CandidateSet set;
    set.bigrams["a b"] = {{"a", "b"}, 4, 4, {}};
    set.trigrams["a b c"] = {{"a", "b", "c"}, 3, 3, {}};
    const TopicSet topics = merge_candidates(set);
    REQUIRE(topics.size() == 2);
    CHECK(topics.topics[0] == "a b");
    CHECK(topics.topics[1] == "a b c");
    CHECK(topics.id_of("a b") == 0);
    CHECK(topics.id_of("a b c") == 1);
}

TEST_CASE("co-occurrence counts are document level") {
    TopicSet topics = testutil::topic_set_from({"a b", "c d"});
    std::vector<Document> docs = {
        {"1", "a b then c d", ""},
        {"2", "a b a b a b", "c d only once but a b three times a b"},
    };
    const CooccurrenceCounts counts = count_cooccurrence(docs, topics);
    CHECK(counts.count(0, 1) == 2);
    CHECK(topics.doc_freq[0] == 2);
    CHECK(topics.doc_freq[1] == 2);
}

TEST_CASE("two docs sharing three topics give three pairs of two") {
    TopicSet topics = testutil::topic_set_from({"x y", "y z", "z w"});
    std::vector<Document> docs = {
        {"1", "x y z w", ""},
        {"2", "prefix x y z w suffix", ""},
    };
    const CooccurrenceCounts counts = count_cooccurrence(docs, topics);
    CHECK(counts.count(0, 1) == 2);
    CHECK(counts.count(0, 2) == 2);
    CHECK(counts.count(1, 2) == 2);
    for (const auto& [i, j, c] : counts.sorted_pairs()) {
        CHECK(c <= std::min(topics.doc_freq[static_cast<std::size_t>(i)],
                            topics.doc_freq[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("counting is order independent and shards merge exactly") {
    std::mt19937 rng(23);
    auto docs = testutil::random_corpus(rng, 30);
    std::vector<TokenSequence> titles;
    for (const auto& d : docs) titles.push_back(normalize(d.title));
    CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    discount_counts(set, 3);
    TopicSet topics = merge_candidates(set);
    if (topics.size() == 0) return;  // degenerate draw

    const CooccurrenceCounts sequential = count_cooccurrence(docs, topics);

    std::vector<Document> shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    TopicSet topics2 = topics;
    CHECK(count_cooccurrence(shuffled, topics2) == sequential);
    CHECK(topics2.doc_freq == topics.doc_freq);

    std::vector<Document> shard_a(docs.begin(), docs.begin() + 11);
    std::vector<Document> shard_b(docs.begin() + 11, docs.end());
    TopicSet ta = topics, tb = topics;
    CooccurrenceCounts merged = count_cooccurrence(shard_a, ta);
    merged.merge(count_cooccurrence(shard_b, tb));
    CHECK(merged == sequential);
}

TEST_CASE("extraction and counting match the brute-force reference") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        const auto docs = testutil::random_corpus(rng, 20 + trial * 4);
        std::vector<TokenSequence> titles;
        for (const auto& d : docs) titles.push_back(normalize(d.title));

        CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
        discount_counts(set, 3);
        TopicSet topics = merge_candidates(set);

        const auto ref = oracle::extract_reference(titles, stop(), prep(), 3);
        REQUIRE(topics.topics == ref.merged);
        for (const auto& [key, info] : ref.bigrams) {
            REQUIRE(set.bigrams.count(key) == 1);
            CHECK(set.bigrams.at(key).raw_count == info.raw);
            CHECK(set.bigrams.at(key).discounted_count == info.discounted);
        }
        CHECK(set.bigrams.size() == ref.bigrams.size());
        CHECK(set.trigrams.size() == ref.trigrams.size());
        CHECK(set.fourgrams.size() == ref.fourgrams.size());

        if (topics.size() == 0) continue;
        const CooccurrenceCounts counts = count_cooccurrence(docs, topics);
        const auto ref_counts = oracle::count_reference(docs, topics.topics);
        CHECK(topics.doc_freq == ref_counts.doc_freq);
        REQUIRE(counts.num_pairs() == ref_counts.pair_counts.size());
        for (const auto& [pair, c] : ref_counts.pair_counts) {
            CHECK(counts.count(pair.first, pair.second) == c);
        }
    }
}

TEST_CASE("every kept candidate meets the minimum count") {
    std::mt19937 rng(5);
    const auto docs = testutil::random_corpus(rng, 40);
    std::vector<TokenSequence> titles;
    for (const auto& d : docs) titles.push_back(normalize(d.title));
    CandidateSet set = extract_ngrams(titles, stop(), prep(), 3);
    discount_counts(set, 3);
    for (const auto* map : {&set.bigrams, &set.trigrams, &set.fourgrams}) {
        for (const auto& [_, cand] : *map) {
            CHECK(cand.discounted_count >= 3);
            CHECK(cand.discounted_count <= cand.raw_count);
        }
    }
}

TEST_CASE("topics file round-trips") {
    testutil::TempDir dir("topics");
    TopicSet topics = testutil::topic_set_from({"a b", "c d e"});
    topics.doc_freq = {4, 7};
    save_topics(topics, dir.file("topics.tsv"));
    const TopicSet loaded = load_topics(dir.file("topics.tsv"));
    CHECK(loaded.topics == topics.topics);
    CHECK(loaded.doc_freq == topics.doc_freq);

    CooccurrenceCounts counts(2);
    counts.add(0, 1, 5);
    save_cooccurrence(counts, dir.file("cooc.tsv"));
    const CooccurrenceCounts loaded_counts =
        load_cooccurrence(dir.file("cooc.tsv"), 2);
    CHECK(loaded_counts == counts);
}
