#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace topictax {

// One corpus record. Co-occurrence is counted per document over
// title + abstract.
struct Document {
    std::string doc_id;
    std::string title;
    std::string abstract_text;  // may be empty
};

using TokenSequence = std::vector<std::string>;

// Lowercases, splits on whitespace and strips leading/trailing punctuation
// from each token. Internal characters (hyphens, apostrophes) are kept.
// Tokens that become empty are dropped. Total function, idempotent.
TokenSequence normalize(std::string_view text);

std::string join_tokens(const TokenSequence& tokens);

// Streaming reader over a line-delimited record file. Each line is a flat
// JSON object with string fields "id", "title", "abstract"; unknown fields
// are ignored. Records missing id or title, and records whose id repeats
// an earlier one, are skipped and counted.
class CorpusReader {
  public:
    explicit CorpusReader(const std::filesystem::path& path);

    // Next well-formed document in file order, or nullopt at end.
    std::optional<Document> next();

    std::size_t skipped() const { return skipped_; }

  private:
    std::ifstream in_;
    std::filesystem::path path_;
    std::unordered_set<std::string> seen_ids_;
    std::size_t skipped_ = 0;
};

// Convenience: read the whole corpus into memory.
std::vector<Document> load_corpus(const std::filesystem::path& path,
                                  std::size_t* skipped = nullptr);

}  // namespace topictax
