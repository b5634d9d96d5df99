#include "sumeval/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "sumeval/fact_eval.hpp"
#include "sumeval/lexical_metrics.hpp"
#include "sumeval/qa_eval.hpp"
#include "sumeval/semantic_metrics.hpp"
#include "sumeval/textrank.hpp"
#include "sumeval/transcripts.hpp"

namespace sumeval {

using nlohmann::json;

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::ingest: return "ingest";
        case Stage::summarize: return "summarize";
        case Stage::evaluate: return "evaluate";
        case Stage::report: return "report";
    }
    throw InvalidArg("unknown stage");
}

std::vector<Stage> stages_from_word(const std::string& word) {
    if (word == "all") return {Stage::ingest, Stage::summarize, Stage::evaluate, Stage::report};
    if (word == "ingest") return {Stage::ingest};
    if (word == "summarize") return {Stage::summarize};
    if (word == "evaluate") return {Stage::evaluate};
    if (word == "report") return {Stage::report};
    throw InvalidArg("unknown stage: " + word);
}

namespace {

constexpr const char* kTextrankSystem = "textrank";
constexpr const char* kReferenceSystem = "reference";

// Index-dispatched parallel loop; the first exception wins and is rethrown
// after all workers drain.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const int n_threads = std::min<int>(workers, static_cast<int>(count));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

json counts_to_json(const std::map<std::string, std::size_t>& counts) {
    json j = json::object();
    for (const auto& [k, v] : counts) j[k] = v;
    return j;
}

}  // namespace

Pipeline::Pipeline(RunConfig config, PipelineOverrides overrides, std::ostream* diag)
    : config_(std::move(config)), overrides_(std::move(overrides)), diag_(diag) {
    if (overrides_.cache_mode) config_.cache_mode = *overrides_.cache_mode;
    if (overrides_.out_dir) config_.out_dir = *overrides_.out_dir;
    if (overrides_.min_words) config_.filter.min_words = *overrides_.min_words;
    if (overrides_.max_words) config_.filter.max_words = *overrides_.max_words;
}

void Pipeline::set_transport(std::shared_ptr<ChatTransport> transport) {
    transport_ = std::move(transport);
}

std::filesystem::path Pipeline::out_path(const std::string& filename) const {
    return config_.resolve(config_.out_dir) / filename;
}

const Corpus& Pipeline::corpus() {
    ensure_corpus();
    return *corpus_;
}

void Pipeline::ensure_corpus() {
    if (corpus_) return;
    if (config_.corpus_path.empty()) throw InvalidArg("config: [corpus] path is not set");
    corpus_ = load_corpus(config_.resolve(config_.corpus_path), config_.filter);
    std::ostream& err = diag_ ? *diag_ : std::cerr;
    err << "corpus: " << corpus_->stats.total_records << " records, " << corpus_->stats.retained
        << " retained, " << corpus_->stats.excluded_low << " below " << config_.filter.min_words
        << " words, " << corpus_->stats.excluded_high << " above " << config_.filter.max_words
        << " words\n";
}

LlmGateway& Pipeline::ensure_gateway() {
    if (gateway_) return *gateway_;
    if (!cassette_) {
        if (config_.cache_path.empty()) {
            if (config_.cache_mode != CacheMode::live) {
                throw InvalidArg("cache_mode " + to_string(config_.cache_mode) +
                                 " requires [run] cache_path");
            }
        } else {
            cassette_ = std::make_shared<Cassette>(config_.resolve(config_.cache_path));
            cassette_->load();
            if (config_.cache_mode == CacheMode::replay && cassette_->size() == 0) {
                throw CacheMiss("replay cache is empty or missing: " +
                                config_.resolve(config_.cache_path).string());
            }
        }
    }
    if (!transport_) transport_ = std::make_shared<HttpChatTransport>();
    gateway_ = std::make_unique<LlmGateway>(transport_, cassette_);
    for (const auto& profile : config_.providers) gateway_->register_provider(profile);
    return *gateway_;
}

EmbeddingProvider& Pipeline::ensure_embedder() {
    if (embedder_) return *embedder_;
    if (config_.embedding.provider == "one_hot") {
        embedder_ = std::make_shared<OneHotEmbedder>(config_.embedding.dimension);
    } else if (config_.embedding.provider == "remote") {
        if (config_.embedding.endpoint.empty()) {
            throw InvalidArg("config: [embedding] endpoint required for remote provider");
        }
        auto remote =
            std::make_shared<RemoteEmbedder>(config_.embedding.endpoint, config_.embedding.model);
        // The harness serializes providers that are not concurrency-safe.
        embedder_ = remote->concurrent_safe()
                        ? std::static_pointer_cast<EmbeddingProvider>(remote)
                        : std::make_shared<SerializedEmbedder>(remote);
    } else {
        throw InvalidArg("config: unknown embedding provider \"" + config_.embedding.provider + "\"");
    }
    return *embedder_;
}

bool Pipeline::system_enabled(const std::string& system_id) const {
    if (overrides_.systems.empty()) return true;
    return std::find(overrides_.systems.begin(), overrides_.systems.end(), system_id) !=
           overrides_.systems.end();
}

bool Pipeline::metric_enabled(Metric metric) const {
    if (overrides_.metrics.empty()) return true;
    return std::find(overrides_.metrics.begin(), overrides_.metrics.end(), metric) !=
           overrides_.metrics.end();
}

void Pipeline::run(std::span<const Stage> stages) {
    auto wants = [&](Stage s) {
        return std::find(stages.begin(), stages.end(), s) != stages.end();
    };

    static constexpr Stage kOrder[] = {Stage::ingest, Stage::summarize, Stage::evaluate,
                                       Stage::report};
    for (Stage stage : kOrder) {
        if (!wants(stage)) continue;
        try {
            switch (stage) {
                case Stage::ingest: run_ingest(); break;
                case Stage::summarize: run_summarize(); break;
                case Stage::evaluate: run_evaluate(); break;
                case Stage::report: run_report(); break;
            }
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(to_string(stage), e.what());
        }
    }
    write_manifest(stages);
}

void Pipeline::run_ingest() { ensure_corpus(); }

void Pipeline::run_summarize() {
    ensure_corpus();
    std::filesystem::create_directories(config_.resolve(config_.out_dir));

    const auto& articles = corpus_->articles;
    std::vector<SummaryRecord> records;

    if (config_.textrank_enabled && system_enabled(kTextrankSystem)) {
        EmbeddingProvider& embedder = ensure_embedder();
        std::vector<SummaryRecord> out(articles.size());
        parallel_for(articles.size(), config_.parallelism, [&](std::size_t i) {
            const Article& article = articles[i];
            try {
                std::string summary = textrank_summary(article.text, embedder, config_.textrank_top_k,
                                                       config_.pagerank);
                out[i] = summary.empty()
                             ? SummaryRecord::failed(article.id, kTextrankSystem,
                                                     SummaryStatus::generation_failed)
                             : SummaryRecord::ok(article.id, kTextrankSystem, std::move(summary));
            } catch (const ConvergenceFailure&) {
                out[i] = SummaryRecord::failed(article.id, kTextrankSystem,
                                               SummaryStatus::generation_failed);
            } catch (const ProviderFailure&) {
                out[i] = SummaryRecord::failed(article.id, kTextrankSystem,
                                               SummaryStatus::generation_failed);
            }
        });
        records.insert(records.end(), out.begin(), out.end());
    }

    for (const auto& provider_id : config_.summarize_with) {
        if (!system_enabled(provider_id)) continue;
        LlmGateway& gateway = ensure_gateway();
        const ProviderProfile profile = gateway.provider(provider_id);
        std::vector<SummaryRecord> out(articles.size());
        parallel_for(articles.size(), config_.parallelism, [&](std::size_t i) {
            out[i] = summarize(articles[i], profile, gateway, config_.cache_mode);
        });
        records.insert(records.end(), out.begin(), out.end());
    }

    for (const auto& [system_id, path] : config_.imports) {
        if (!system_enabled(system_id)) continue;
        auto imported = import_summaries(config_.resolve(path), system_id, *corpus_);
        records.insert(records.end(), imported.begin(), imported.end());
    }

    if (config_.include_reference && system_enabled(kReferenceSystem)) {
        for (const Article& article : articles) {
            if (article.reference_summary && !article.reference_summary->empty()) {
                records.push_back(
                    SummaryRecord::ok(article.id, kReferenceSystem, *article.reference_summary));
            }
        }
    }

    summary_counts_.clear();
    for (const auto& rec : records) {
        auto& counts = summary_counts_[rec.system_id];
        switch (rec.status) {
            case SummaryStatus::ok: ++counts.ok; break;
            case SummaryStatus::content_filtered: ++counts.content_filtered; break;
            case SummaryStatus::generation_failed: ++counts.generation_failed; break;
        }
    }
    have_summary_counts_ = true;

    write_summaries(out_path("summaries.jsonl"), std::move(records));
}

void Pipeline::run_evaluate() {
    ensure_corpus();
    std::filesystem::create_directories(config_.resolve(config_.out_dir));

    const auto all_records = read_summaries(out_path("summaries.jsonl"));

    std::unordered_map<std::string_view, const Article*> articles_by_id;
    for (const Article& article : corpus_->articles) {
        articles_by_id.emplace(article.id, &article);
    }

    std::vector<SummaryRecord> records;
    summary_counts_.clear();
    for (const auto& rec : all_records) {
        if (!system_enabled(rec.system_id)) continue;
        auto& counts = summary_counts_[rec.system_id];
        switch (rec.status) {
            case SummaryStatus::ok: ++counts.ok; break;
            case SummaryStatus::content_filtered: ++counts.content_filtered; break;
            case SummaryStatus::generation_failed: ++counts.generation_failed; break;
        }
        if (rec.status == SummaryStatus::ok) records.push_back(rec);
    }
    have_summary_counts_ = true;

    const bool want_lexical = metric_enabled(Metric::rouge1) || metric_enabled(Metric::rougeL) ||
                              metric_enabled(Metric::rouge1_article) ||
                              metric_enabled(Metric::rougeL_article);
    const bool want_semantic =
        metric_enabled(Metric::bertscore) || metric_enabled(Metric::bertscore_article);
    const bool want_qa = metric_enabled(Metric::qa_consistency) ||
                         metric_enabled(Metric::qa_hallucination) || metric_enabled(Metric::qa_meta);
    const bool want_fact =
        metric_enabled(Metric::fact_consistency) || metric_enabled(Metric::fact_meta);

    std::optional<QaEvaluator> qa;
    std::optional<FactEvaluator> fact;
    if (want_qa || want_fact) {
        if (config_.evaluator_provider.empty()) {
            throw InvalidArg("LLM evaluations requested but [evaluator] provider is not set");
        }
        LlmGateway& gateway = ensure_gateway();
        const ProviderProfile evaluator = gateway.provider(config_.evaluator_provider);
        if (want_qa) qa.emplace(gateway, evaluator, config_.cache_mode);
        if (want_fact) fact.emplace(gateway, evaluator, config_.cache_mode);
    }
    if (want_semantic) ensure_embedder();

    struct TaskResult {
        std::vector<ScoreRow> rows;
        std::vector<TranscriptEntry> transcripts;
        std::optional<QaStatus> qa_status;
        std::optional<FactStatus> fact_status;
        std::string system_id;
    };
    std::vector<TaskResult> results(records.size());

    parallel_for(records.size(), config_.parallelism, [&](std::size_t i) {
        const SummaryRecord& rec = records[i];
        TaskResult& result = results[i];
        result.system_id = rec.system_id;

        const auto article_it = articles_by_id.find(rec.article_id);
        if (article_it == articles_by_id.end()) {
            throw UnknownArticle("summary record references unknown article \"" + rec.article_id +
                                 "\"");
        }
        const Article* article = article_it->second;
        const std::string& summary_text = *rec.text;
        auto add = [&](Metric metric, double value) {
            if (metric_enabled(metric)) {
                result.rows.push_back({rec.article_id, rec.system_id, metric, value});
            }
        };

        const bool has_reference = article->reference_summary &&
                                   !article->reference_summary->empty() &&
                                   rec.system_id != kReferenceSystem;

        if (want_lexical) {
            if (has_reference) {
                const RougePair pair =
                    score_pair(summary_text, *article->reference_summary, RefMode::vs_reference);
                add(Metric::rouge1, pair.rouge1.f1);
                add(Metric::rougeL, pair.rougeL.f1);
            }
            const RougePair article_pair = score_pair(summary_text, article->text, RefMode::vs_article);
            add(Metric::rouge1_article, article_pair.rouge1.f1);
            add(Metric::rougeL_article, article_pair.rougeL.f1);
        }

        if (want_semantic) {
            if (has_reference) {
                add(Metric::bertscore,
                    bertscore(summary_text, *article->reference_summary, *embedder_).f1);
            }
            add(Metric::bertscore_article, bertscore(summary_text, article->text, *embedder_).f1);
        }

        TranscriptSink sink = [&](const TranscriptEntry& entry) {
            result.transcripts.push_back(entry);
        };

        if (want_qa) {
            const QaEvaluation eval =
                qa->evaluate(rec.article_id, rec.system_id, summary_text, article->text, sink);
            result.qa_status = eval.status;
            if (eval.consistency) add(Metric::qa_consistency, *eval.consistency);
            if (eval.hallucination) add(Metric::qa_hallucination, *eval.hallucination);
            if (eval.meta) add(Metric::qa_meta, *eval.meta);
        }

        if (want_fact) {
            const FactEvaluation eval =
                fact->evaluate(rec.article_id, rec.system_id, summary_text, article->text, sink);
            result.fact_status = eval.status;
            if (eval.consistency) add(Metric::fact_consistency, *eval.consistency);
            if (eval.meta) add(Metric::fact_meta, *eval.meta);
        }

        add(Metric::avg_summary_words, static_cast<double>(rec.word_count));
    });

    std::vector<ScoreRow> rows;
    qa_counts_.clear();
    fact_counts_.clear();
    std::ofstream transcripts(out_path("transcripts.jsonl"), std::ios::trunc | std::ios::binary);
    if (!transcripts) throw IoFailure("cannot write transcripts.jsonl");
    for (const auto& result : results) {
        rows.insert(rows.end(), result.rows.begin(), result.rows.end());
        if (result.qa_status) {
            ++qa_counts_[result.system_id].by_status[to_string(*result.qa_status)];
        }
        if (result.fact_status) {
            ++fact_counts_[result.system_id].by_status[to_string(*result.fact_status)];
        }
        for (const auto& entry : result.transcripts) {
            const json j = {{"article_id", entry.article_id}, {"system_id", entry.system_id},
                            {"evaluation", entry.evaluation}, {"step", entry.step},
                            {"prompt", entry.prompt},         {"outcome", entry.outcome},
                            {"response", entry.response}};
            transcripts << j.dump() << '\n';
        }
    }
    have_eval_counts_ = want_qa || want_fact;

    write_scores(out_path("scores.jsonl"), std::move(rows));
}

void Pipeline::run_report() {
    std::filesystem::create_directories(config_.resolve(config_.out_dir));
    auto rows = read_scores(out_path("scores.jsonl"));

    std::erase_if(rows, [&](const ScoreRow& row) {
        return !system_enabled(row.system_id) || !metric_enabled(row.metric);
    });

    const auto reports = aggregate(rows);
    emit_report(reports, ReportFormat::csv, out_path("report.csv"));
    emit_report(reports, ReportFormat::markdown, out_path("report.md"));
}

void Pipeline::write_manifest(std::span<const Stage> stages) {
    std::filesystem::create_directories(config_.resolve(config_.out_dir));
    const auto manifest_path = out_path("manifest.json");

    // Merge over any previous manifest so partial runs keep earlier stats.
    json manifest = json::object();
    if (std::ifstream in(manifest_path); in) {
        try {
            in >> manifest;
        } catch (const json::exception&) {
            manifest = json::object();
        }
    }

    manifest["cache_mode"] = to_string(config_.cache_mode);
    manifest["config_sha256"] = config_.config_sha256;
    json stage_names = json::array();
    for (Stage s : stages) stage_names.push_back(to_string(s));
    manifest["stages"] = stage_names;

    if (corpus_) {
        manifest["corpus"] = {{"min_words", config_.filter.min_words},
                              {"max_words", config_.filter.max_words},
                              {"total_records", corpus_->stats.total_records},
                              {"retained", corpus_->stats.retained},
                              {"excluded_low", corpus_->stats.excluded_low},
                              {"excluded_high", corpus_->stats.excluded_high}};
    }

    if (have_summary_counts_) {
        json systems = json::object();
        for (const auto& [system_id, counts] : summary_counts_) {
            systems[system_id] = {{"ok", counts.ok},
                                  {"content_filtered", counts.content_filtered},
                                  {"generation_failed", counts.generation_failed}};
        }
        manifest["summaries"] = systems;
    }

    if (have_eval_counts_) {
        json qa = json::object(), fact = json::object();
        for (const auto& [system_id, counts] : qa_counts_) {
            qa[system_id] = counts_to_json(counts.by_status);
        }
        for (const auto& [system_id, counts] : fact_counts_) {
            fact[system_id] = counts_to_json(counts.by_status);
        }
        manifest["evaluations"] = {{"qa", qa}, {"fact", fact}};
    }

    std::ofstream out(manifest_path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoFailure("cannot write manifest.json");
    out << manifest.dump(2) << '\n';
}

int run_pipeline(const std::filesystem::path& config_path, std::vector<Stage> stages,
                 const PipelineOverrides& overrides, std::ostream* diag) {
    std::ostream& err = diag ? *diag : std::cerr;
    try {
        Pipeline pipeline(load_config(config_path), overrides, diag);
        pipeline.run(stages);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sumeval
