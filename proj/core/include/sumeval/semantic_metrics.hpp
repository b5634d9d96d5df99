#pragma once

#include <string>

#include "sumeval/embedding.hpp"

namespace sumeval {

/// Greedy-matching score; components lie in [-1, 1] since cosines can be negative.
struct BertScoreResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Greedy token matching: precision is the mean over candidate tokens of the
/// best cosine against any reference token, recall the mirror image, f1 the
/// harmonic mean (0 when p + r == 0). No IDF weighting, no baseline rescaling.
///
/// Throws EmptyTokenization when the provider yields no tokens for either
/// input; provider errors propagate.
BertScoreResult bertscore(const std::string& candidate, const std::string& reference,
                          EmbeddingProvider& provider);

}  // namespace sumeval
