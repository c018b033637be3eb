#include "topictax/topic_extraction.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace topictax {

namespace {

// (title index, position) packed for the containment lookups.
std::uint64_t pos_key(std::uint32_t title, std::uint32_t pos) {
    return (static_cast<std::uint64_t>(title) << 32) | pos;
}

std::string join_range(const TokenSequence& tokens, std::size_t start,
                       std::size_t len) {
    std::string out = tokens[start];
    for (std::size_t k = 1; k < len; ++k) {
        out.push_back(' ');
        out += tokens[start + k];
    }
    return out;
}

// Stopwords are banned anywhere; prepositions only at the edges. A token
// present in both lists follows the preposition rule.
bool admissible(const TokenSequence& tokens, std::size_t start, std::size_t len,
                const WordSet& stopwords, const WordSet& prepositions) {
    for (std::size_t k = 0; k < len; ++k) {
        const std::string& tok = tokens[start + k];
        const bool edge = (k == 0 || k + 1 == len);
        if (prepositions.count(tok) > 0) {
            if (edge) return false;
        } else if (stopwords.count(tok) > 0) {
            return false;
        }
    }
    return true;
}

void prune_below(CandidateMap& map, int min_count, bool use_discounted) {
    for (auto it = map.begin(); it != map.end();) {
        const std::int64_t c =
            use_discounted ? it->second.discounted_count : it->second.raw_count;
        if (c < min_count) {
            it = map.erase(it);
        } else {
            ++it;
        }
    }
}

std::unordered_set<std::uint64_t> occurrence_positions(const CandidateMap& map) {
    std::unordered_set<std::uint64_t> out;
    for (const auto& [_, cand] : map) {
        for (const auto& [title, pos] : cand.occurrences) {
            out.insert(pos_key(title, pos));
        }
    }
    return out;
}

}  // namespace

std::uint64_t CooccurrenceCounts::key(std::int32_t i, std::int32_t j) {
    if (i > j) std::swap(i, j);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint32_t>(j);
}

void CooccurrenceCounts::add(std::int32_t i, std::int32_t j, std::int64_t delta) {
    if (i == j) {
        throw std::invalid_argument("co-occurrence diagonal must stay zero");
    }
    pairs_[key(i, j)] += delta;
}

std::int64_t CooccurrenceCounts::count(std::int32_t i, std::int32_t j) const {
    if (i == j) return 0;
    auto it = pairs_.find(key(i, j));
    return it == pairs_.end() ? 0 : it->second;
}

std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>>
CooccurrenceCounts::sorted_pairs() const {
    std::vector<std::tuple<std::int32_t, std::int32_t, std::int64_t>> out;
    out.reserve(pairs_.size());
    for (const auto& [k, c] : pairs_) {
        out.emplace_back(static_cast<std::int32_t>(k >> 32),
                         static_cast<std::int32_t>(k & 0xffffffffULL), c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void CooccurrenceCounts::merge(const CooccurrenceCounts& other) {
    for (const auto& [k, c] : other.pairs_) {
        pairs_[k] += c;
    }
}

CandidateSet extract_ngrams(const std::vector<TokenSequence>& titles,
                            const WordSet& stopwords, const WordSet& prepositions,
                            int min_count) {
    if (min_count < 1) {
        throw std::invalid_argument("min_count must be >= 1");
    }
    CandidateSet set;
    CandidateMap* maps[3] = {&set.bigrams, &set.trigrams, &set.fourgrams};
    for (std::size_t t = 0; t < titles.size(); ++t) {
        const TokenSequence& tokens = titles[t];
        for (int order = 2; order <= 4; ++order) {
            if (tokens.size() < static_cast<std::size_t>(order)) continue;
            CandidateMap& map = *maps[order - 2];
            for (std::size_t pos = 0; pos + order <= tokens.size(); ++pos) {
                if (!admissible(tokens, pos, order, stopwords, prepositions)) {
                    continue;
                }
                std::string key = join_range(tokens, pos, order);
                NgramCandidate& cand = map[key];
                if (cand.tokens.empty()) {
                    cand.tokens.assign(tokens.begin() + pos,
                                       tokens.begin() + pos + order);
                }
                cand.raw_count += 1;
                cand.occurrences.emplace_back(static_cast<std::uint32_t>(t),
                                              static_cast<std::uint32_t>(pos));
            }
        }
    }
    prune_below(set.bigrams, min_count, false);
    prune_below(set.trigrams, min_count, false);
    prune_below(set.fourgrams, min_count, false);
    for (CandidateMap* map : maps) {
        for (auto& [_, cand] : *map) {
            cand.discounted_count = cand.raw_count;
        }
    }
    return set;
}

void discount_counts(CandidateSet& candidates, int min_count) {
    const auto tri_pos = occurrence_positions(candidates.trigrams);
    const auto four_pos = occurrence_positions(candidates.fourgrams);

    auto covered = [](const std::unordered_set<std::uint64_t>& starts,
                      std::uint32_t title, std::uint32_t occ_pos, int occ_len,
                      int container_len) {
        // A container starting at s covers [occ_pos, occ_pos+occ_len) iff
        // s <= occ_pos and occ_pos + occ_len <= s + container_len.
        const std::uint32_t lo =
            occ_pos + occ_len >= static_cast<std::uint32_t>(container_len)
                ? occ_pos + occ_len - container_len
                : 0;
        for (std::uint32_t s = lo; s <= occ_pos; ++s) {
            if (starts.count(pos_key(title, s)) > 0) return true;
        }
        return false;
    };

    for (auto& [_, cand] : candidates.bigrams) {
        std::int64_t embedded = 0;
        for (const auto& [title, pos] : cand.occurrences) {
            if (covered(tri_pos, title, pos, 2, 3) ||
                covered(four_pos, title, pos, 2, 4)) {
                ++embedded;
            }
        }
        cand.discounted_count = std::max<std::int64_t>(cand.raw_count - embedded, 0);
    }
    for (auto& [_, cand] : candidates.trigrams) {
        std::int64_t embedded = 0;
        for (const auto& [title, pos] : cand.occurrences) {
            if (covered(four_pos, title, pos, 3, 4)) ++embedded;
        }
        cand.discounted_count = std::max<std::int64_t>(cand.raw_count - embedded, 0);
    }
    // Fourgrams are never discounted; no higher order is extracted.
    prune_below(candidates.bigrams, min_count, true);
    prune_below(candidates.trigrams, min_count, true);
}

TopicSet merge_candidates(const CandidateSet& candidates) {
    TopicSet set;
    for (const CandidateMap* map :
         {&candidates.bigrams, &candidates.trigrams, &candidates.fourgrams}) {
        for (const auto& [key, _] : *map) {
            set.topics.push_back(key);
        }
    }
    std::sort(set.topics.begin(), set.topics.end());
    set.doc_freq.assign(set.topics.size(), 0);
    for (std::size_t i = 0; i < set.topics.size(); ++i) {
        set.index.emplace(set.topics[i], static_cast<std::int32_t>(i));
    }
    return set;
}

std::vector<std::int32_t> topics_in_tokens(const TokenSequence& tokens,
                                           const TopicSet& topics) {
    std::vector<std::int32_t> present;
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        for (int len = 2; len <= 4; ++len) {
            if (pos + len > tokens.size()) break;
            auto it = topics.index.find(join_range(tokens, pos, len));
            if (it != topics.index.end()) present.push_back(it->second);
        }
    }
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    return present;
}

CooccurrenceCounts count_cooccurrence(const std::vector<Document>& documents,
                                      TopicSet& topics) {
    if (topics.size() == 0) {
        throw std::invalid_argument("count_cooccurrence requires a nonempty TopicSet");
    }
    CooccurrenceCounts counts(static_cast<std::int32_t>(topics.size()));
    std::fill(topics.doc_freq.begin(), topics.doc_freq.end(), 0);
    for (const Document& doc : documents) {
        const TokenSequence tokens = normalize(doc.title + " " + doc.abstract_text);
        const std::vector<std::int32_t> present = topics_in_tokens(tokens, topics);
        for (std::int32_t id : present) {
            topics.doc_freq[static_cast<std::size_t>(id)] += 1;
        }
        for (std::size_t a = 0; a < present.size(); ++a) {
            for (std::size_t b = a + 1; b < present.size(); ++b) {
                counts.add(present[a], present[b], 1);
            }
        }
    }
    return counts;
}

void save_topics(const TopicSet& topics, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw std::runtime_error("cannot write topics file: " + path.string());
    }
    for (std::size_t i = 0; i < topics.topics.size(); ++i) {
        out << i << '\t' << topics.topics[i] << '\t' << topics.doc_freq[i] << '\n';
    }
}

TopicSet load_topics(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open topics file: " + path.string());
    }
    TopicSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id_str, topic, freq_str;
        if (!std::getline(ss, id_str, '\t') || !std::getline(ss, topic, '\t') ||
            !std::getline(ss, freq_str)) {
            throw std::runtime_error("malformed topics line " +
                                     std::to_string(lineno) + " in " + path.string());
        }
        if (std::stoll(id_str) != static_cast<long long>(set.topics.size())) {
            throw std::runtime_error("non-contiguous topic id at line " +
                                     std::to_string(lineno) + " in " + path.string());
        }
        set.topics.push_back(topic);
        set.doc_freq.push_back(std::stoll(freq_str));
    }
    for (std::size_t i = 0; i < set.topics.size(); ++i) {
        if (!set.index.emplace(set.topics[i], static_cast<std::int32_t>(i)).second) {
            throw std::runtime_error("duplicate topic string in " + path.string());
        }
    }
    return set;
}

void save_cooccurrence(const CooccurrenceCounts& counts,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw std::runtime_error("cannot write co-occurrence file: " + path.string());
    }
    for (const auto& [i, j, c] : counts.sorted_pairs()) {
        out << i << '\t' << j << '\t' << c << '\n';
    }
}

CooccurrenceCounts load_cooccurrence(const std::filesystem::path& path,
                                     std::int32_t num_topics) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open co-occurrence file: " + path.string());
    }
    CooccurrenceCounts counts(num_topics);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::int64_t i, j, c;
        char tab1, tab2;
        if (!(ss >> i >> std::noskipws >> tab1 >> std::skipws >> j >>
              std::noskipws >> tab2 >> std::skipws >> c) ||
            tab1 != '\t' || tab2 != '\t') {
            throw std::runtime_error("malformed co-occurrence line " +
                                     std::to_string(lineno) + " in " + path.string());
        }
        if (i < 0 || j <= i || j >= num_topics) {
            throw std::runtime_error("co-occurrence ids out of range at line " +
                                     std::to_string(lineno) + " in " + path.string());
        }
        counts.add(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), c);
    }
    return counts;
}

WordSet load_word_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open word list: " + path.string());
    }
    WordSet set;
    std::string line;
    while (std::getline(in, line)) {
        for (const std::string& tok : normalize(line)) {
            set.insert(tok);
        }
    }
    return set;
}

const WordSet& default_stopwords() {
    static const WordSet kStopwords = {
        "a",       "about",   "above",   "after",   "again",    "against",
        "all",     "am",      "an",      "and",     "any",      "are",
        "as",      "at",      "be",      "because", "been",     "before",
        "being",   "below",   "between", "both",    "but",      "by",
        "can",     "could",   "did",     "do",      "does",     "doing",
        "down",    "during",  "each",    "few",     "for",      "from",
        "further", "had",     "has",     "have",    "having",   "he",
        "her",     "here",    "hers",    "herself", "him",      "himself",
        "his",     "how",     "i",       "if",      "in",       "into",
        "is",      "it",      "its",     "itself",  "just",     "me",
        "more",    "most",    "my",      "myself",  "no",       "nor",
        "not",     "now",     "of",      "off",     "on",       "once",
        "only",    "or",      "other",   "our",     "ours",     "ourselves",
        "out",     "over",    "own",     "same",    "she",      "should",
        "so",      "some",    "such",    "than",    "that",     "the",
        "their",   "theirs",  "them",    "themselves", "then",  "there",
        "these",   "they",    "this",    "those",   "through",  "to",
        "too",     "under",   "until",   "up",      "very",     "was",
        "we",      "were",    "what",    "when",    "where",    "which",
        "while",   "who",     "whom",    "why",     "will",     "with",
        "would",   "you",     "your",    "yours",   "yourself", "yourselves",
    };
    return kStopwords;
}

const WordSet& default_prepositions() {
    static const WordSet kPrepositions = {"of", "for", "to", "in",
                                          "on", "with", "at", "by"};
    return kPrepositions;
}

}  // namespace topictax
