#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumeval/pipeline.hpp"
#include "sumeval/report.hpp"

using namespace sumeval;

int main(int argc, char** argv) {
    CLI::App app{"Summarization evaluation pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string cache_mode;
    std::string out_dir;
    std::vector<std::string> systems;
    std::vector<std::string> metrics;
    int min_words = -1;
    int max_words = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Run configuration file")->required();
        cmd->add_option("--systems", systems, "Only these systems (comma separated)")
            ->delimiter(',');
        cmd->add_option("--metrics", metrics, "Only these metrics (comma separated)")
            ->delimiter(',');
        cmd->add_option("--cache-mode", cache_mode, "live, record, or replay")
            ->check(CLI::IsMember({"live", "record", "replay"}));
        cmd->add_option("--out", out_dir, "Output directory (overrides config)");
        cmd->add_option("--min-words", min_words, "Corpus filter lower bound (words)");
        cmd->add_option("--max-words", max_words, "Corpus filter upper bound (words)");
    };

    for (const char* name : {"ingest", "summarize", "evaluate", "report", "all"}) {
        add_common(app.add_subcommand(name));
    }
    app.get_subcommand("ingest")->description("Load and filter the corpus");
    app.get_subcommand("summarize")->description("Generate or import summaries");
    app.get_subcommand("evaluate")->description("Score summaries (lexical, semantic, LLM)");
    app.get_subcommand("report")->description("Aggregate persisted scores into reports");
    app.get_subcommand("all")->description("Run every stage in order");

    CLI11_PARSE(app, argc, argv);

    PipelineOverrides overrides;
    overrides.systems = systems;
    if (!cache_mode.empty()) overrides.cache_mode = cache_mode_from_string(cache_mode);
    if (!out_dir.empty()) overrides.out_dir = out_dir;
    if (min_words >= 0) overrides.min_words = min_words;
    if (max_words >= 0) overrides.max_words = max_words;
    try {
        for (const auto& name : metrics) overrides.metrics.push_back(metric_from_string(name));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    const std::string stage_word = app.get_subcommands().front()->get_name();
    return run_pipeline(config_path, stages_from_word(stage_word), overrides);
}
