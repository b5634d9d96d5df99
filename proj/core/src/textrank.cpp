#include "sumeval/textrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sumeval/errors.hpp"

namespace sumeval {

namespace {

bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_upper_byte(char c) { return c >= 'A' && c <= 'Z'; }
bool is_letter_byte(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::string trimmed(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space_byte(s[b])) ++b;
    while (e > b && is_space_byte(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

// True when `buffer` ends with an abbreviation from the list at a word boundary.
bool ends_with_abbreviation(const std::string& buffer, const std::vector<std::string>& abbrevs) {
    for (const auto& abbr : abbrevs) {
        if (buffer.size() < abbr.size()) continue;
        if (buffer.compare(buffer.size() - abbr.size(), abbr.size(), abbr) != 0) continue;
        if (buffer.size() == abbr.size()) return true;
        const char before = buffer[buffer.size() - abbr.size() - 1];
        if (!is_letter_byte(before)) return true;
    }
    return false;
}

// Mean of token vectors; empty when the sentence has no tokens.
Vector sentence_vector(EmbeddingProvider& provider, const std::string& sentence) {
    const TokenEmbeddings emb = provider.embed_tokens(sentence);
    if (emb.vectors.empty()) return {};
    Vector mean(emb.vectors.front().size(), 0.0);
    for (const auto& v : emb.vectors) {
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
    }
    for (double& x : mean) x /= static_cast<double>(emb.vectors.size());
    return mean;
}

bool is_zero(const Vector& v) {
    for (double x : v) {
        if (x != 0.0) return false;
    }
    return true;
}

}  // namespace

SentenceSplitOptions default_split_options() {
    return {{"Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Rev.", "Gen.", "Sen.", "Rep.",
             "Gov.", "Capt.", "Sgt.", "Col.", "Lt.", "St.", "Jr.", "Sr.", "vs.",
             "etc.", "e.g.", "i.e.", "cf.", "Inc.", "Ltd.", "Co.", "Corp.", "No.",
             "Mt.", "Fig.", "approx."}};
}

std::vector<std::string> split_sentences(std::string_view text, const SentenceSplitOptions& opts) {
    std::vector<std::string> sentences;
    std::string cur;

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        cur += c;
        if (c != '.' && c != '!' && c != '?') continue;
        if (c == '.' && ends_with_abbreviation(cur, opts.abbreviations)) continue;

        // Look past the terminator: need whitespace then an uppercase letter,
        // or nothing but whitespace to end-of-text.
        std::size_t j = i + 1;
        while (j < text.size() && is_space_byte(text[j])) ++j;
        const bool had_space = j > i + 1;
        if (j == text.size() || (had_space && is_upper_byte(text[j]))) {
            std::string s = trimmed(cur);
            if (!s.empty()) sentences.push_back(std::move(s));
            cur.clear();
            i = j - 1;  // consume the inter-sentence whitespace
        }
    }
    std::string tail = trimmed(cur);
    if (!tail.empty()) sentences.push_back(std::move(tail));
    return sentences;
}

SentenceGraph build_graph(const std::vector<std::string>& sentences, EmbeddingProvider& provider) {
    if (sentences.empty()) throw InvalidArg("build_graph: need at least one sentence");

    const std::size_t n = sentences.size();
    std::vector<Vector> vecs(n);
    for (std::size_t i = 0; i < n; ++i) {
        vecs[i] = sentence_vector(provider, sentences[i]);
    }

    SentenceGraph graph;
    graph.sentences = sentences;
    graph.weights.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (vecs[i].empty() || is_zero(vecs[i])) continue;  // zero-weight edges
        for (std::size_t j = i + 1; j < n; ++j) {
            if (vecs[j].empty() || is_zero(vecs[j])) continue;
            if (vecs[i].size() != vecs[j].size()) {
                throw ProviderFailure("build_graph: provider returned mixed dimensions");
            }
            const double w = std::max(0.0, cosine(vecs[i], vecs[j]));
            graph.weights[i][j] = w;
            graph.weights[j][i] = w;
        }
    }
    return graph;
}

std::vector<double> pagerank(const SentenceGraph& graph, const PageRankConfig& cfg) {
    const std::size_t n = graph.size();
    if (n == 0) throw InvalidArg("pagerank: empty graph");
    if (cfg.damping <= 0.0 || cfg.damping >= 1.0) throw InvalidArg("pagerank: damping must be in (0,1)");
    if (cfg.tolerance <= 0.0) throw InvalidArg("pagerank: tolerance must be > 0");
    if (n == 1) return {1.0};

    std::vector<double> out_weight(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out_weight[i] = std::accumulate(graph.weights[i].begin(), graph.weights[i].end(), 0.0);
    }

    const double d = cfg.damping;
    const double teleport = (1.0 - d) / static_cast<double>(n);
    std::vector<double> scores(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (out_weight[i] == 0.0) dangling += scores[i];
        }
        const double dangling_share = dangling / static_cast<double>(n);

        for (std::size_t i = 0; i < n; ++i) {
            double incoming = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (out_weight[j] > 0.0 && graph.weights[j][i] > 0.0) {
                    incoming += scores[j] * graph.weights[j][i] / out_weight[j];
                }
            }
            next[i] = teleport + d * (incoming + dangling_share);
        }

        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - scores[i]);
        scores.swap(next);
        if (change < cfg.tolerance) return scores;
    }
    throw ConvergenceFailure("pagerank: no convergence after " +
                             std::to_string(cfg.max_iterations) + " iterations");
}

std::string textrank_summary(std::string_view text, EmbeddingProvider& provider, int k,
                             const PageRankConfig& cfg, const SentenceSplitOptions& split_opts) {
    if (k < 1) throw InvalidArg("textrank_summary: k must be >= 1");

    const std::vector<std::string> sentences = split_sentences(text, split_opts);
    std::vector<std::size_t> selected;

    if (sentences.empty()) return "";
    if (sentences.size() <= static_cast<std::size_t>(k)) {
        selected.resize(sentences.size());
        std::iota(selected.begin(), selected.end(), 0);
    } else {
        const SentenceGraph graph = build_graph(sentences, provider);
        const std::vector<double> scores = pagerank(graph, cfg);

        std::vector<std::size_t> order(sentences.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[a] > scores[b];  // stable: position breaks ties
        });
        selected.assign(order.begin(), order.begin() + k);
        std::sort(selected.begin(), selected.end());  // back to document order
    }

    std::string summary;
    for (std::size_t idx : selected) {
        if (!summary.empty()) summary += ' ';
        summary += sentences[idx];
    }
    return summary;
}

}  // namespace sumeval
