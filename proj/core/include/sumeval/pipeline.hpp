#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumeval/config.hpp"
#include "sumeval/corpus.hpp"
#include "sumeval/embedding.hpp"
#include "sumeval/errors.hpp"
#include "sumeval/llm_gateway.hpp"
#include "sumeval/llm_summarizer.hpp"
#include "sumeval/report.hpp"

namespace sumeval {

enum class Stage { ingest, summarize, evaluate, report };

std::string to_string(Stage stage);

/// Parse a CLI stage word; "all" expands to every stage in order.
std::vector<Stage> stages_from_word(const std::string& word);

/// CLI-level overrides layered on top of the config file.
struct PipelineOverrides {
    std::optional<CacheMode> cache_mode;
    std::optional<std::filesystem::path> out_dir;
    std::optional<int> min_words;
    std::optional<int> max_words;
    std::vector<std::string> systems;  // empty = all configured systems
    std::vector<Metric> metrics;       // empty = all metrics
};

/// An error that aborted a stage; message carries the stage name.
struct StageError : Error {
    StageError(const std::string& stage, const std::string& what)
        : Error(stage + ": " + what), stage(stage) {}
    std::string stage;
};

/// Stage orchestrator. Stages communicate through files in the output
/// directory (summaries.jsonl -> scores.jsonl + transcripts.jsonl ->
/// report.csv / report.md) plus a manifest.json that accumulates filter
/// stats and failure counts.
class Pipeline {
  public:
    explicit Pipeline(RunConfig config, PipelineOverrides overrides = {},
                      std::ostream* diag = nullptr);

    /// Tests inject scripted or counting transports here.
    void set_transport(std::shared_ptr<ChatTransport> transport);

    /// Run the requested stages in canonical order. Throws StageError.
    void run(std::span<const Stage> stages);

    const Corpus& corpus();
    const RunConfig& config() const { return config_; }
    std::filesystem::path out_path(const std::string& filename) const;

  private:
    void run_ingest();
    void run_summarize();
    void run_evaluate();
    void run_report();
    void write_manifest(std::span<const Stage> stages);

    void ensure_corpus();
    LlmGateway& ensure_gateway();
    EmbeddingProvider& ensure_embedder();
    bool system_enabled(const std::string& system_id) const;
    bool metric_enabled(Metric metric) const;

    RunConfig config_;
    PipelineOverrides overrides_;
    std::ostream* diag_;

    std::optional<Corpus> corpus_;
    std::shared_ptr<ChatTransport> transport_;
    std::shared_ptr<Cassette> cassette_;
    std::unique_ptr<LlmGateway> gateway_;
    std::shared_ptr<EmbeddingProvider> embedder_;

    struct SummaryCounts {
        std::size_t ok = 0;
        std::size_t content_filtered = 0;
        std::size_t generation_failed = 0;
    };
    struct EvalCounts {
        std::map<std::string, std::size_t> by_status;
    };
    std::map<std::string, SummaryCounts> summary_counts_;
    std::map<std::string, EvalCounts> qa_counts_;
    std::map<std::string, EvalCounts> fact_counts_;
    bool have_summary_counts_ = false;
    bool have_eval_counts_ = false;
};

/// Load the config, apply overrides, run the stages. Returns a process exit
/// code; failures print one diagnostic line (stage name + cause) to `diag`.
int run_pipeline(const std::filesystem::path& config_path, std::vector<Stage> stages,
                 const PipelineOverrides& overrides = {}, std::ostream* diag = nullptr);

}  // namespace sumeval
