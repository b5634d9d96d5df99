#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumeval/llm_gateway.hpp"
#include "sumeval/transcripts.hpp"

namespace sumeval {

enum class Answer { yes, no, unknown };

std::string to_string(Answer a);
std::optional<Answer> answer_from_token(std::string_view token);  // case-insensitive

struct GeneratedQuestion {
    int index = 0;         // 1-based, contiguous
    std::string text;      // nonempty, ends with '?'
    Answer key = Answer::unknown;
};

enum class QaStatus { ok, generation_failed, answering_failed, content_filtered };

std::string to_string(QaStatus status);

struct QaScores {
    double consistency = 0.0;
    double hallucination = 0.0;
    double meta = 0.0;
};

/// Result of the three-call QA pipeline for one (article, system) pair.
/// Scores are present according to how far the pipeline got: all three when
/// ok; meta alone when only the answering step failed (0 when the summary
/// side failed to answer everything, the audited value otherwise); none when
/// generation failed or the content filter fired.
struct QaEvaluation {
    std::string article_id;
    std::string system_id;
    std::vector<GeneratedQuestion> questions;
    std::vector<Answer> summary_answers;
    std::vector<Answer> source_answers;
    std::optional<double> consistency;
    std::optional<double> hallucination;
    std::optional<double> meta;
    QaStatus status = QaStatus::generation_failed;
    std::string failure_detail;
};

/// Extract "N. <question>? [Key]" lines. Non-matching lines are ignored;
/// matched indices must be exactly 1..n.
/// Throws DuplicateIndex / NonContiguousIndices.
std::vector<GeneratedQuestion> parse_question_block(const std::string& raw);

/// Parse an answering transcript: either numbered "N. <answer>" lines
/// covering exactly 1..expected, or bare answer-token lines in order.
/// Throws ParseFailure on a count mismatch or any unparseable line.
std::vector<Answer> parse_answer_block(const std::string& raw, std::size_t expected);

/// "1. <q1>\n2. <q2>..." without answer keys, for the answering prompt.
std::string numbered_questions(std::span<const GeneratedQuestion> questions);

/// consistency: summary answer equals source answer (Unknown pairs count);
/// hallucination: source Unknown while summary answered; meta: summary answer
/// equals the generated key. Throws LengthMismatch on unaligned inputs.
QaScores score_qa(std::span<const GeneratedQuestion> questions, std::span<const Answer> summary_answers,
                  std::span<const Answer> source_answers);

/// Runs question generation against the summary, then answering against the
/// summary and against the source article, through the gateway.
class QaEvaluator {
  public:
    QaEvaluator(LlmGateway& gateway, ProviderProfile evaluator, CacheMode mode);

    /// Fill the generation template with the summary, call the evaluator, and
    /// parse the keyed question block; 3 or 4 questions are acceptable.
    /// Throws GenerationFailed, ContentFilteredError, EvaluatorCallFailed.
    std::vector<GeneratedQuestion> generate_questions(const std::string& summary,
                                                      const CallObserver& observer = {}) const;

    /// Fill the answering template with the context and the numbered question
    /// list (keys withheld) and parse one answer per question.
    /// Throws AnsweringFailed (count mismatch or unparseable token),
    /// ContentFilteredError, EvaluatorCallFailed.
    std::vector<Answer> answer_questions(const std::string& context,
                                         std::span<const GeneratedQuestion> questions,
                                         const CallObserver& observer = {}) const;

    QaEvaluation evaluate(const std::string& article_id, const std::string& system_id,
                          const std::string& summary, const std::string& source_text,
                          const TranscriptSink& sink = {}) const;

  private:
    ChatOutcome call(const std::string& prompt, const CallObserver& observer) const;

    LlmGateway& gateway_;
    ProviderProfile evaluator_;
    CacheMode mode_;
};

}  // namespace sumeval
