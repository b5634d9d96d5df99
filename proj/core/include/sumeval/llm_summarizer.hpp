#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sumeval/corpus.hpp"
#include "sumeval/llm_gateway.hpp"

namespace sumeval {

enum class SummaryStatus { ok, content_filtered, generation_failed };

std::string to_string(SummaryStatus status);
SummaryStatus summary_status_from_string(const std::string& s);

/// A generated or reference summary bound to (article_id, system_id).
/// text is present iff status == ok; word_count is 0 otherwise.
struct SummaryRecord {
    std::string article_id;
    std::string system_id;
    std::optional<std::string> text;
    SummaryStatus status = SummaryStatus::generation_failed;
    int word_count = 0;

    static SummaryRecord ok(std::string article_id, std::string system_id, std::string text);
    static SummaryRecord failed(std::string article_id, std::string system_id, SummaryStatus status);
};

/// The uniform summarization instruction appended below the article text.
std::string_view summary_prompt_sentence();

/// Build the one chat request summarize() issues for an article.
ChatRequest make_summary_request(const Article& article, const ProviderProfile& profile);

/// Issue one temperature-0 chat request and fold the outcome into a record.
/// Never throws for generation problems; they become status values.
SummaryRecord summarize(const Article& article, const ProviderProfile& profile,
                        LlmGateway& gateway, CacheMode mode);

/// Load externally generated summaries (JSONL: article_id, text) as ok
/// records under the given system id. Unknown article ids and duplicate
/// (article_id, system_id) pairs are rejected.
std::vector<SummaryRecord> import_summaries(const std::filesystem::path& path,
                                            const std::string& system_id, const Corpus& corpus);

// summaries.jsonl persistence: {article_id, system_id, status, text, word_count}
void write_summaries(const std::filesystem::path& path, std::vector<SummaryRecord> records);
std::vector<SummaryRecord> read_summaries(const std::filesystem::path& path);

}  // namespace sumeval
