#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sumeval/embedding.hpp"

namespace sumeval {

struct SentenceSplitOptions {
    // Dotted tokens that never end a sentence.
    std::vector<std::string> abbreviations;
};

SentenceSplitOptions default_split_options();

/// Split on . ! ? followed by whitespace and an uppercase letter, or by
/// end-of-text. Abbreviations from the option list keep their sentence going.
/// Never returns empty sentences.
std::vector<std::string> split_sentences(std::string_view text,
                                         const SentenceSplitOptions& opts = default_split_options());

/// Symmetric sentence-similarity graph with zero diagonal and weights >= 0.
struct SentenceGraph {
    std::vector<std::string> sentences;
    std::vector<std::vector<double>> weights;  // n x n

    std::size_t size() const { return sentences.size(); }
};

struct PageRankConfig {
    double damping = 0.85;
    double tolerance = 1e-6;  // L1 change per iteration
    int max_iterations = 100;
};

/// One embedding per sentence (mean of the provider's token vectors), edge
/// weight max(0, cosine). Sentences that embed to a zero vector (or to no
/// tokens at all) get zero-weight edges instead of erroring.
SentenceGraph build_graph(const std::vector<std::string>& sentences, EmbeddingProvider& provider);

/// Damped power iteration over the graph's row-normalized weights; nodes with
/// zero out-weight distribute uniformly. Returns a probability vector.
/// Throws ConvergenceFailure when max_iterations is hit before the L1 change
/// drops below tolerance.
std::vector<double> pagerank(const SentenceGraph& graph, const PageRankConfig& cfg = {});

/// The k highest-scoring sentences (ties to the earlier sentence), emitted in
/// document order and joined by single spaces. Documents with <= k sentences
/// come back whole. ConvergenceFailure propagates.
std::string textrank_summary(std::string_view text, EmbeddingProvider& provider, int k = 2,
                             const PageRankConfig& cfg = {},
                             const SentenceSplitOptions& split_opts = default_split_options());

}  // namespace sumeval
