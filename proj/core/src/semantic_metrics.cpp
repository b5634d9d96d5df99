#include "sumeval/semantic_metrics.hpp"

#include <algorithm>

#include "sumeval/errors.hpp"
#include "sumeval/lexical_metrics.hpp"

namespace sumeval {

namespace {

// Mean over `from` of the max cosine against any vector in `against`.
double mean_best_match(const std::vector<Vector>& from, const std::vector<Vector>& against) {
    double total = 0.0;
    for (const auto& u : from) {
        double best = -1.0;
        for (const auto& v : against) {
            best = std::max(best, cosine(u, v));
        }
        total += best;
    }
    return total / static_cast<double>(from.size());
}

}  // namespace

BertScoreResult bertscore(const std::string& candidate, const std::string& reference,
                          EmbeddingProvider& provider) {
    const TokenEmbeddings cand = provider.embed_tokens(candidate);
    const TokenEmbeddings ref = provider.embed_tokens(reference);
    if (cand.tokens.empty() || ref.tokens.empty()) {
        throw EmptyTokenization("bertscore: provider yielded no tokens");
    }

    BertScoreResult result;
    result.precision = mean_best_match(cand.vectors, ref.vectors);
    result.recall = mean_best_match(ref.vectors, cand.vectors);
    result.f1 = (result.precision + result.recall != 0.0)
                    ? 2.0 * result.precision * result.recall / (result.precision + result.recall)
                    : 0.0;
    return result;
}

}  // namespace sumeval
