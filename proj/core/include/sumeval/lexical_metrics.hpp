#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sumeval {

/// Ordered list of normalized word tokens; never contains empty strings.
using TokenSequence = std::vector<std::string>;

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Which text plays the reference role for a scored pair.
enum class RefMode { vs_reference, vs_article };

/// Lowercase, split on any byte that is not an ASCII letter or digit, drop empties.
TokenSequence tokenize(std::string_view text);

/// Clipped n-gram multiset overlap. Precision over candidate n-grams, recall
/// over reference n-grams; all zeros when either side has no n-grams.
/// Throws InvalidArg when n < 1.
RougeScore rouge_n(const TokenSequence& candidate, const TokenSequence& reference, int n);

/// Longest-common-subsequence F1. Zeros when either side is empty.
RougeScore rouge_l(const TokenSequence& candidate, const TokenSequence& reference);

struct RougePair {
    RougeScore rouge1;
    RougeScore rougeL;
};

/// Tokenize both texts and compute ROUGE-1 and ROUGE-L. The mode is a label
/// for what the reference text is (human summary or source article); the
/// computation is identical either way.
RougePair score_pair(std::string_view summary, std::string_view reference_text,
                     RefMode mode = RefMode::vs_reference);

double f1_from(double precision, double recall);

}  // namespace sumeval
