#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "topictax/corpus.hpp"

namespace topictax {

using WordSet = std::unordered_set<std::string>;

// A candidate topic ngram (2-4 tokens) with its title occurrence counts.
// Occurrences record (title index, start position) so that discounting can
// test containment inside higher-order candidates.
struct NgramCandidate {
    std::vector<std::string> tokens;
    std::int64_t raw_count = 0;
    std::int64_t discounted_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> occurrences;

    int order() const { return static_cast<int>(tokens.size()); }
};

// Keyed by the space-joined token sequence.
using CandidateMap = std::unordered_map<std::string, NgramCandidate>;

struct CandidateSet {
    CandidateMap bigrams;
    CandidateMap trigrams;
    CandidateMap fourgrams;
};

// The merged candidate topic list. Ids are assigned in lexicographic order
// of the topic string. doc_freq is N(t), filled by count_cooccurrence.
struct TopicSet {
    std::vector<std::string> topics;
    std::vector<std::int64_t> doc_freq;
    std::unordered_map<std::string, std::int32_t> index;

    std::size_t size() const { return topics.size(); }
    bool contains(const std::string& topic) const {
        return index.find(topic) != index.end();
    }
    // -1 if absent
    std::int32_t id_of(const std::string& topic) const {
        auto it = index.find(topic);
        return it == index.end() ? -1 : it->second;
    }
};

// Sparse symmetric document co-occurrence counts over topic id pairs.
// Stored once per unordered pair with i < j; the diagonal is always zero.
class CooccurrenceCounts {
  public:
    CooccurrenceCounts() = default;
    explicit CooccurrenceCounts(std::int32_t num_topics)
        : num_topics_(num_topics) {}

    std::int32_t num_topics() const { return num_topics_; }
    void set_num_topics(std::int32_t n) { num_topics_ = n; }

    void add(std::int32_t i, std::int32_t j, std::int64_t delta);
    std::int64_t count(std::int32_t i, std::int32_t j) const;

    const std::unordered_map<std::uint64_t, std::int64_t>& pairs() const {
        return pairs_;
    }
    std::size_t num_pairs() const { return pairs_.size(); }

    // Pairs as (i, j, count) with i < j, sorted by (i, j).
    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> sorted_pairs()
        const;

    // Commutative merge of partial counts from sharded counting.
    void merge(const CooccurrenceCounts& other);

    bool operator==(const CooccurrenceCounts& other) const {
        return num_topics_ == other.num_topics_ && pairs_ == other.pairs_;
    }

    static std::uint64_t key(std::int32_t i, std::int32_t j);

  private:
    std::int32_t num_topics_ = 0;
    std::unordered_map<std::uint64_t, std::int64_t> pairs_;
};

// Emits every contiguous 2/3/4-gram occurring at least min_count times in
// the titles. An ngram is excluded when any position holds a stopword, or
// when the first or last token is a preposition; prepositions at interior
// positions are allowed. Tokens in both lists follow the preposition rule.
CandidateSet extract_ngrams(const std::vector<TokenSequence>& titles,
                            const WordSet& stopwords, const WordSet& prepositions,
                            int min_count);

// Subtracts, from each bigram/trigram, the number of its occurrences that
// lie inside an occurrence of a kept trigram or fourgram. Candidates whose
// discounted count falls below min_count are dropped.
void discount_counts(CandidateSet& candidates, int min_count);

// Union of the surviving candidates of all orders with lexicographic ids.
TopicSet merge_candidates(const CandidateSet& candidates);

// Per document, finds the set of topics occurring contiguously in
// normalize(title + " " + abstract), increments every unordered pair once,
// and increments topics.doc_freq per present topic.
CooccurrenceCounts count_cooccurrence(const std::vector<Document>& documents,
                                      TopicSet& topics);

// Topic ids present in one document's normalized token sequence (sorted,
// deduplicated). Exposed for sharded counting and the HAC document vectors.
std::vector<std::int32_t> topics_in_tokens(const TokenSequence& tokens,
                                           const TopicSet& topics);

// id<TAB>topic<TAB>N(t), one line per topic in id order.
void save_topics(const TopicSet& topics, const std::filesystem::path& path);
TopicSet load_topics(const std::filesystem::path& path);

// i<TAB>j<TAB>count with i < j, sorted by (i, j).
void save_cooccurrence(const CooccurrenceCounts& counts,
                       const std::filesystem::path& path);
CooccurrenceCounts load_cooccurrence(const std::filesystem::path& path,
                                     std::int32_t num_topics);

// Default English stopword and preposition lists; the same lists ship as
// data files in the repository.
const WordSet& default_stopwords();
const WordSet& default_prepositions();
WordSet load_word_set(const std::filesystem::path& path);

}  // namespace topictax
