#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sumeval/corpus.hpp"
#include "sumeval/llm_gateway.hpp"
#include "sumeval/textrank.hpp"

namespace sumeval {

struct EmbeddingConfig {
    std::string provider = "one_hot";  // "one_hot" | "remote"
    std::size_t dimension = 4096;      // one_hot
    std::string endpoint;              // remote
    std::string model;                 // remote
};

/// Everything a run needs, parsed from a flat sectioned key-value file.
/// Unknown sections or keys are rejected so typos fail fast.
struct RunConfig {
    std::filesystem::path config_dir;  // directory of the config file; relative paths resolve here
    std::string config_sha256;

    // [corpus]
    std::filesystem::path corpus_path;
    CorpusFilter filter;

    // [run]
    std::filesystem::path out_dir = "out";
    CacheMode cache_mode = CacheMode::replay;
    std::filesystem::path cache_path;
    int parallelism = 4;
    bool include_reference = true;

    // [embedding]
    EmbeddingConfig embedding;

    // [textrank]
    bool textrank_enabled = true;
    int textrank_top_k = 2;
    PageRankConfig pagerank;

    // [summarize] systems = comma-separated provider ids
    std::vector<std::string> summarize_with;

    // [evaluator] provider = id
    std::string evaluator_provider;

    // [import] <system_id> = <jsonl path>
    std::map<std::string, std::filesystem::path> imports;

    // [provider:<id>] sections
    std::vector<ProviderProfile> providers;

    const ProviderProfile* find_provider(const std::string& id) const;
    std::filesystem::path resolve(const std::filesystem::path& p) const;
};

RunConfig load_config(const std::filesystem::path& path);

/// Exposed for tests: raw section -> key -> value parsing.
std::map<std::string, std::map<std::string, std::string>> parse_ini(const std::string& text);

}  // namespace sumeval
