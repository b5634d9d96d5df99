#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "sumeval/embedding.hpp"
#include "sumeval/lexical_metrics.hpp"
#include "sumeval/llm_gateway.hpp"
#include "sumeval/semantic_metrics.hpp"
#include "sumeval/textrank.hpp"

using namespace sumeval;

namespace {

std::string make_text(std::size_t words, unsigned seed) {
    static const std::vector<std::string> vocab = {
        "council", "harbour", "library", "bridge",  "orchard", "summary", "report",
        "weather", "station", "market",  "project", "review",  "survey",  "winter"};
    std::mt19937 rng(seed);
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        if (!text.empty()) text += ' ';
        text += vocab[rng() % vocab.size()];
        if (i % 12 == 11) text += '.';
    }
    return text + ".";
}

SentenceGraph random_graph(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SentenceGraph graph;
    graph.sentences.assign(n, "s");
    graph.weights.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = unit(rng);
            graph.weights[i][j] = w;
            graph.weights[j][i] = w;
        }
    }
    return graph;
}

}  // namespace

static void BM_Tokenize(benchmark::State& state) {
    const std::string text = make_text(400, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tokenize(text));
    }
}
BENCHMARK(BM_Tokenize);

static void BM_Rouge1(benchmark::State& state) {
    const TokenSequence cand = tokenize(make_text(60, 2));
    const TokenSequence ref = tokenize(make_text(400, 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rouge_n(cand, ref, 1));
    }
}
BENCHMARK(BM_Rouge1);

static void BM_RougeL(benchmark::State& state) {
    const TokenSequence cand = tokenize(make_text(60, 4));
    const TokenSequence ref = tokenize(make_text(400, 5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rouge_l(cand, ref));
    }
}
BENCHMARK(BM_RougeL);

static void BM_BertScoreOneHot(benchmark::State& state) {
    OneHotEmbedder provider(static_cast<std::size_t>(state.range(0)));
    const std::string cand = make_text(40, 6);
    const std::string ref = make_text(40, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bertscore(cand, ref, provider));
    }
}
BENCHMARK(BM_BertScoreOneHot)->Arg(512)->Arg(4096);

static void BM_SplitSentences(benchmark::State& state) {
    const std::string text = make_text(400, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(split_sentences(text));
    }
}
BENCHMARK(BM_SplitSentences);

static void BM_PageRank(benchmark::State& state) {
    const SentenceGraph graph = random_graph(static_cast<std::size_t>(state.range(0)), 9);
    PageRankConfig cfg;
    cfg.tolerance = 1e-10;
    cfg.max_iterations = 500;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pagerank(graph, cfg));
    }
}
BENCHMARK(BM_PageRank)->Arg(8)->Arg(32)->Arg(128);

static void BM_CanonicalKey(benchmark::State& state) {
    ChatRequest request;
    request.provider_id = "judge";
    request.model = "judge-1";
    request.messages.push_back({Role::user, make_text(400, 10)});
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonical_key(request));
    }
}
BENCHMARK(BM_CanonicalKey);

BENCHMARK_MAIN();
