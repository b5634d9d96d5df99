#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "sumeval/errors.hpp"
#include "sumeval/textrank.hpp"
#include "support/oracles.hpp"

using namespace sumeval;
using namespace sumeval::testing;

namespace {

/// Sentence-keyed embedding table: every sentence string maps to one vector,
/// exposed as a single "token" so the mean is the vector itself.
class SentenceTableEmbedder : public EmbeddingProvider {
  public:
    explicit SentenceTableEmbedder(std::map<std::string, Vector> table)
        : table_(std::move(table)) {}

    TokenEmbeddings embed_tokens(const std::string& text) override {
        auto it = table_.find(text);
        if (it == table_.end()) throw ProviderFailure("no vector for: " + text);
        return {{text}, {it->second}};
    }
    bool concurrent_safe() const override { return true; }
    std::string name() const override { return "sentence_table"; }

  private:
    std::map<std::string, Vector> table_;
};

SentenceGraph graph_from_weights(std::vector<std::vector<double>> weights) {
    SentenceGraph graph;
    graph.weights = std::move(weights);
    graph.sentences.resize(graph.weights.size(), "s");
    return graph;
}

double l1_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

TEST_CASE("split_sentences basics") {
    CHECK(split_sentences("A. B? C!") == std::vector<std::string>{"A.", "B?", "C!"});
    CHECK(split_sentences("Mr. Smith left. He ran.") ==
          std::vector<std::string>{"Mr. Smith left.", "He ran."});
    CHECK(split_sentences("no terminal punctuation here") ==
          std::vector<std::string>{"no terminal punctuation here"});
    CHECK(split_sentences("") == std::vector<std::string>{});
    CHECK(split_sentences("   ") == std::vector<std::string>{});
}

TEST_CASE("split_sentences handles abbreviations, ellipses, and case") {
    // lowercase after the period: no split
    CHECK(split_sentences("The ship arrived at 3 p.m. and left at dawn. Crews cheered.") ==
          std::vector<std::string>{"The ship arrived at 3 p.m. and left at dawn.",
                                   "Crews cheered."});
    CHECK(split_sentences("He cited costs, e.g. steel. Prices rose.") ==
          std::vector<std::string>{"He cited costs, e.g. steel.", "Prices rose."});
    CHECK(split_sentences("Wait... Then go.") == std::vector<std::string>{"Wait...", "Then go."});
    CHECK(split_sentences("Dr. Lee spoke.") == std::vector<std::string>{"Dr. Lee spoke."});
    // terminator followed directly by a letter: not a boundary
    CHECK(split_sentences("Version 2.Next item") ==
          std::vector<std::string>{"Version 2.Next item"});
}

TEST_CASE("build_graph fixtures") {
    SUBCASE("identical sentences get weight 1") {
        SentenceTableEmbedder provider({{"s one.", {1.0, 2.0}}, {"s two.", {1.0, 2.0}}});
        const auto graph = build_graph({"s one.", "s two."}, provider);
        CHECK(graph.weights[0][1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(graph.weights[1][0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(graph.weights[0][0] == 0.0);
        CHECK(graph.weights[1][1] == 0.0);
    }
    SUBCASE("orthogonal embeddings give zero weights") {
        SentenceTableEmbedder provider({{"a.", {1.0, 0.0}}, {"b.", {0.0, 1.0}}});
        const auto graph = build_graph({"a.", "b."}, provider);
        CHECK(graph.weights[0][1] == 0.0);
    }
    SUBCASE("uniform pairwise cosine 0.5") {
        // Three unit vectors pairwise at 60 degrees.
        const double h = std::sqrt(3.0) / 2.0;
        SentenceTableEmbedder provider({{"x.", {1.0, 0.0, 0.0}},
                                        {"y.", {0.5, h, 0.0}},
                                        {"z.", {0.5, h / 3.0, std::sqrt(2.0 / 3.0)}}});
        const auto graph = build_graph({"x.", "y.", "z."}, provider);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                if (i == j) {
                    CHECK(graph.weights[i][j] == 0.0);
                } else {
                    CHECK(graph.weights[i][j] == doctest::Approx(0.5).epsilon(1e-9));
                }
            }
        }
    }
    SUBCASE("negative cosine clamps to zero") {
        SentenceTableEmbedder provider({{"n.", {1.0, 0.0}}, {"m.", {-1.0, 0.0}}});
        const auto graph = build_graph({"n.", "m."}, provider);
        CHECK(graph.weights[0][1] == 0.0);
    }
    SUBCASE("zero-vector sentences get zero-weight edges, not errors") {
        SentenceTableEmbedder provider({{"z.", {0.0, 0.0}}, {"w.", {1.0, 0.0}}});
        const auto graph = build_graph({"z.", "w."}, provider);
        CHECK(graph.weights[0][1] == 0.0);
        CHECK(graph.weights[1][0] == 0.0);
    }
}

TEST_CASE("pagerank basics") {
    SUBCASE("single node") {
        const auto scores = pagerank(graph_from_weights({{0.0}}));
        CHECK(scores == std::vector<double>{1.0});
    }
    SUBCASE("symmetric equal-weight triangle is uniform") {
        const auto scores =
            pagerank(graph_from_weights({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
        for (double s : scores) CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
        CHECK(l1_sum(scores) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("star graph: hub dominates, values match the linear solve") {
        const SentenceGraph star = graph_from_weights({{0, 1, 1, 1},
                                                       {1, 0, 0, 0},
                                                       {1, 0, 0, 0},
                                                       {1, 0, 0, 0}});
        PageRankConfig cfg;
        cfg.tolerance = 1e-12;
        cfg.max_iterations = 1000;
        const auto scores = pagerank(star, cfg);
        const auto exact = oracle_pagerank(star, cfg.damping);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(scores[i] == doctest::Approx(exact[i]).epsilon(1e-8));
        }
        CHECK(scores[0] > scores[1]);
        CHECK(scores[1] == doctest::Approx(scores[2]).epsilon(1e-12));
    }
    SUBCASE("convergence failure surfaces as an error") {
        PageRankConfig cfg;
        cfg.tolerance = 1e-15;
        cfg.max_iterations = 2;
        CHECK_THROWS_AS(
            pagerank(graph_from_weights({{0, 1, 0}, {1, 0, 0.01}, {0, 0.01, 0}}), cfg),
            ConvergenceFailure);
    }
    SUBCASE("bad config is rejected") {
        CHECK_THROWS_AS(pagerank(graph_from_weights({{0}}), {1.5, 1e-6, 10}), InvalidArg);
        CHECK_THROWS_AS(pagerank(graph_from_weights({{0}}), {0.85, -1.0, 10}), InvalidArg);
    }
}

TEST_CASE("property: pagerank yields a probability vector matching the dense solve") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PageRankConfig cfg;
    cfg.tolerance = 1e-12;
    cfg.max_iterations = 2000;

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 5;  // up to 6 nodes
        std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double value = (rng() % 3 == 0) ? 0.0 : unit(rng);
                w[i][j] = value;
                w[j][i] = value;
            }
        }
        const SentenceGraph graph = graph_from_weights(w);
        const auto scores = pagerank(graph, cfg);

        CHECK(l1_sum(scores) == doctest::Approx(1.0).epsilon(1e-9));
        for (double s : scores) CHECK(s >= 0.0);

        const auto exact = oracle_pagerank(graph, cfg.damping);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(scores[i] - exact[i]) < 1e-6);
        }
    }
}

TEST_CASE("property: scaling all weights leaves converged scores unchanged") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    PageRankConfig cfg;
    cfg.tolerance = 1e-12;
    cfg.max_iterations = 2000;

    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng() % 4;
        std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                w[i][j] = w[j][i] = unit(rng);
            }
        }
        auto scaled = w;
        const double factor = 7.25;
        for (auto& row : scaled) {
            for (double& x : row) x *= factor;
        }
        const auto a = pagerank(graph_from_weights(w), cfg);
        const auto b = pagerank(graph_from_weights(scaled), cfg);
        for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
    }
}

TEST_CASE("property: relabeling sentences permutes scores identically") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PageRankConfig cfg;
    cfg.tolerance = 1e-12;
    cfg.max_iterations = 2000;

    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + rng() % 3;
        std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = unit(rng);
        }
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);

        std::vector<std::vector<double>> pw(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) pw[perm[i]][perm[j]] = w[i][j];
        }
        const auto base = pagerank(graph_from_weights(w), cfg);
        const auto permuted = pagerank(graph_from_weights(pw), cfg);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(permuted[perm[i]] == doctest::Approx(base[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("textrank_summary selection") {
    SUBCASE("two-sentence article comes back whole") {
        SentenceTableEmbedder provider({});
        CHECK(textrank_summary("First point. Second point.", provider, 2) ==
              "First point. Second point.");
    }
    SUBCASE("uniform scores select the first two by position") {
        // All four sentences pairwise identical in embedding: scores tie.
        SentenceTableEmbedder provider({{"A one.", {1.0, 1.0}},
                                        {"B two.", {1.0, 1.0}},
                                        {"C three.", {1.0, 1.0}},
                                        {"D four.", {1.0, 1.0}}});
        CHECK(textrank_summary("A one. B two. C three. D four.", provider, 2) ==
              "A one. B two.");
    }
    SUBCASE("top sentences are emitted in document order") {
        // Sentences 1 and 3 (0-based 0 and 2) form a tight pair; sentence 2
        // and 4 are loosely attached. The pair outranks the rest.
        SentenceTableEmbedder provider({{"Alpha leads.", {1.0, 0.0, 0.0}},
                                        {"Beta drifts.", {0.1, 1.0, 0.0}},
                                        {"Also alpha.", {0.97, 0.05, 0.0}},
                                        {"Gamma alone.", {0.0, 0.2, 1.0}}});
        const std::string text = "Alpha leads. Beta drifts. Also alpha. Gamma alone.";
        const auto sentences = split_sentences(text);
        REQUIRE(sentences.size() == 4);

        PageRankConfig cfg;
        cfg.tolerance = 1e-12;
        cfg.max_iterations = 2000;
        const auto graph = build_graph(sentences, provider);
        const auto exact = oracle_pagerank(graph, cfg.damping);
        REQUIRE(exact[0] > exact[1]);
        REQUIRE(exact[2] > exact[1]);
        REQUIRE(exact[2] > exact[3]);

        CHECK(textrank_summary(text, provider, 2, cfg) == "Alpha leads. Also alpha.");
    }
    SUBCASE("k < 1 is rejected") {
        SentenceTableEmbedder provider({});
        CHECK_THROWS_AS(textrank_summary("A. B.", provider, 0), InvalidArg);
    }
}
