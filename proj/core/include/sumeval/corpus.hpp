#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sumeval {

/// One source document with an optional human reference summary.
struct Article {
    std::string id;
    std::optional<std::string> title;
    std::string text;
    std::optional<std::string> reference_summary;
};

/// Inclusive word-count window applied when loading a corpus.
struct CorpusFilter {
    int min_words = 100;
    int max_words = 400;
};

/// Bookkeeping for one load: retained + excluded_low + excluded_high == total_records.
struct FilterStats {
    std::size_t total_records = 0;
    std::size_t retained = 0;
    std::size_t excluded_low = 0;
    std::size_t excluded_high = 0;
};

struct Corpus {
    std::vector<Article> articles;  // input order preserved
    FilterStats stats;

    const Article* find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }
};

/// Number of maximal nonempty runs of non-whitespace characters.
int word_count(std::string_view text);

/// Load a JSONL corpus (one object per line; required keys "id" and "text",
/// optional "title" and "summary") and keep articles whose word count falls
/// inside [filter.min_words, filter.max_words].
///
/// Throws MalformedRecord (with the offending 1-based line index) on a missing
/// or non-string required key, blank text, or duplicate id; IoFailure when the
/// file cannot be read; InvalidArg on a bad filter.
Corpus load_corpus(const std::filesystem::path& path, const CorpusFilter& filter);

}  // namespace sumeval
