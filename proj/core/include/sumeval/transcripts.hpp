#pragma once

#include <functional>
#include <string>

#include "sumeval/llm_gateway.hpp"

namespace sumeval {

/// Sees each evaluator LLM exchange as it happens (rendered prompt + outcome).
using CallObserver = std::function<void(const std::string& prompt, const ChatOutcome& outcome)>;

/// One evaluator LLM exchange, persisted for audit alongside the scores.
struct TranscriptEntry {
    std::string article_id;
    std::string system_id;
    std::string evaluation;  // "qa" or "fact"
    std::string step;        // e.g. "question_generation", "article_check"
    std::string prompt;      // rendered user content
    std::string outcome;     // outcome kind
    std::string response;    // model text when present
};

using TranscriptSink = std::function<void(const TranscriptEntry&)>;

}  // namespace sumeval
