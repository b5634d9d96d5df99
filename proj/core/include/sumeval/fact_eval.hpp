#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumeval/llm_gateway.hpp"
#include "sumeval/transcripts.hpp"

namespace sumeval {

enum class FactStatus { ok, extraction_failed, checking_failed, content_filtered };

std::string to_string(FactStatus status);

struct FactScores {
    double consistency = 0.0;  // fraction of facts true against the article
    double meta = 0.0;         // fraction of facts true against the summary itself
};

struct FactEvaluation {
    std::string article_id;
    std::string system_id;
    std::vector<std::string> facts;
    std::vector<bool> article_verdicts;
    std::vector<bool> summary_verdicts;
    std::optional<double> consistency;
    std::optional<double> meta;
    FactStatus status = FactStatus::extraction_failed;
    std::string failure_detail;
};

/// Extract "N. <fact>" lines; other lines are ignored. Matched indices must
/// be exactly 1..n with n >= 1.
/// Throws ParseFailure (DuplicateIndex / NonContiguousIndices, or empty).
std::vector<std::string> parse_fact_list(const std::string& raw);

/// Parse one TRUE/FALSE verdict per fact: numbered "N. TRUE" lines covering
/// exactly 1..expected, or bare "TRUE"/"FALSE" lines in order
/// (case-insensitive). Throws ParseFailure on count mismatch or stray text.
std::vector<bool> parse_verdicts(const std::string& raw, std::size_t expected);

std::string numbered_facts(std::span<const std::string> facts);

/// consistency = fraction of article_verdicts true, meta = fraction of
/// summary_verdicts true. Throws LengthMismatch / InvalidArg on bad inputs.
FactScores score_facts(const std::vector<bool>& article_verdicts,
                       const std::vector<bool>& summary_verdicts);

/// Extracts a numbered fact list from the summary, then checks it against the
/// source article and against the summary itself.
class FactEvaluator {
  public:
    FactEvaluator(LlmGateway& gateway, ProviderProfile evaluator, CacheMode mode);

    /// Fill the extraction template with the summary and parse the numbered
    /// fact list (>= 1 fact).
    /// Throws ExtractionFailed, ContentFilteredError, EvaluatorCallFailed.
    std::vector<std::string> extract_facts(const std::string& summary,
                                           const CallObserver& observer = {}) const;

    /// Fill the checking template (context fenced in triple backticks,
    /// numbered statements) and parse one TRUE/FALSE verdict per fact.
    /// Throws CheckingFailed, ContentFilteredError, EvaluatorCallFailed.
    std::vector<bool> check_facts(const std::string& context,
                                  std::span<const std::string> facts,
                                  const CallObserver& observer = {}) const;

    FactEvaluation evaluate(const std::string& article_id, const std::string& system_id,
                            const std::string& summary, const std::string& source_text,
                            const TranscriptSink& sink = {}) const;

  private:
    ChatOutcome call(const std::string& prompt, const CallObserver& observer) const;

    LlmGateway& gateway_;
    ProviderProfile evaluator_;
    CacheMode mode_;
};

}  // namespace sumeval
