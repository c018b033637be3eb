#include "topictax/corpus.hpp"

#include <cctype>
#include <stdexcept>

#include "json.hpp"

namespace topictax {

namespace {

bool is_edge_punct(unsigned char c) {
    return std::ispunct(c) != 0;
}

}  // namespace

TokenSequence normalize(std::string_view text) {
    TokenSequence tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) continue;
        std::size_t lo = start;
        std::size_t hi = i;  // one past end
        while (lo < hi && is_edge_punct(static_cast<unsigned char>(text[lo]))) ++lo;
        while (hi > lo && is_edge_punct(static_cast<unsigned char>(text[hi - 1]))) --hi;
        if (lo == hi) continue;
        std::string tok;
        tok.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            tok.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(text[k]))));
        }
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

std::string join_tokens(const TokenSequence& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

CorpusReader::CorpusReader(const std::filesystem::path& path)
    : in_(path), path_(path) {
    if (!in_.is_open()) {
        throw std::runtime_error("cannot open corpus file: " + path.string());
    }
}

std::optional<Document> CorpusReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            ++skipped_;
            continue;
        }
        Document doc;
        if (rec.contains("id") && rec["id"].is_string()) {
            doc.doc_id = rec["id"].get<std::string>();
        }
        if (rec.contains("title") && rec["title"].is_string()) {
            doc.title = rec["title"].get<std::string>();
        }
        if (doc.doc_id.empty() || doc.title.empty() ||
            !seen_ids_.insert(doc.doc_id).second) {
            ++skipped_;
            continue;
        }
        if (rec.contains("abstract") && rec["abstract"].is_string()) {
            doc.abstract_text = rec["abstract"].get<std::string>();
        }
        return doc;
    }
    return std::nullopt;
}

std::vector<Document> load_corpus(const std::filesystem::path& path,
                                  std::size_t* skipped) {
    CorpusReader reader(path);
    std::vector<Document> docs;
    while (auto doc = reader.next()) {
        docs.push_back(std::move(*doc));
    }
    if (skipped != nullptr) *skipped = reader.skipped();
    return docs;
}

}  // namespace topictax
