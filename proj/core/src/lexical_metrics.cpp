#include "sumeval/lexical_metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "sumeval/errors.hpp"

namespace sumeval {

namespace {

bool is_word_byte(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower_byte(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + ('a' - 'A')) : c;
}

// N-gram multiset as joined-token keys; '\x1f' cannot appear in a token.
std::unordered_map<std::string, int> ngram_counts(const TokenSequence& tokens, int n) {
    std::unordered_map<std::string, int> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int j = 1; j < n; ++j) {
            key += '\x1f';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

int lcs_length(const TokenSequence& a, const TokenSequence& b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0 || n == 0) return 0;
    std::vector<int> prev(n + 1, 0), cur(n + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1
                                            : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

}  // namespace

double f1_from(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

TokenSequence tokenize(std::string_view text) {
    TokenSequence tokens;
    std::string cur;
    for (char c : text) {
        if (is_word_byte(c)) {
            cur += lower_byte(c);
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

RougeScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference, int n) {
    if (n < 1) throw InvalidArg("rouge_n requires n >= 1");

    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    long cand_total = 0, ref_total = 0, overlap = 0;
    for (const auto& [k, c] : cand) cand_total += c;
    for (const auto& [k, c] : ref) ref_total += c;
    if (cand_total == 0 || ref_total == 0) return {};

    for (const auto& [key, count] : cand) {
        auto it = ref.find(key);
        if (it != ref.end()) overlap += std::min(count, it->second);
    }

    RougeScore score;
    score.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    score.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
    score.f1 = f1_from(score.precision, score.recall);
    return score;
}

RougeScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference) {
    if (candidate.empty() || reference.empty()) return {};
    const int lcs = lcs_length(candidate, reference);

    RougeScore score;
    score.precision = static_cast<double>(lcs) / static_cast<double>(candidate.size());
    score.recall = static_cast<double>(lcs) / static_cast<double>(reference.size());
    score.f1 = f1_from(score.precision, score.recall);
    return score;
}

RougePair score_pair(std::string_view summary, std::string_view reference_text, RefMode) {
    const TokenSequence cand = tokenize(summary);
    const TokenSequence ref = tokenize(reference_text);
    return {rouge_n(cand, ref, 1), rouge_l(cand, ref)};
}

}  // namespace sumeval
