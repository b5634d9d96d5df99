#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sumeval {

enum class Metric {
    rouge1,
    rougeL,
    rouge1_article,
    rougeL_article,
    bertscore,
    bertscore_article,
    qa_consistency,
    qa_hallucination,
    fact_consistency,
    qa_meta,
    fact_meta,
    avg_summary_words,
};

inline constexpr std::array<Metric, 12> kAllMetrics = {
    Metric::rouge1,         Metric::rougeL,         Metric::rouge1_article,
    Metric::rougeL_article, Metric::bertscore,      Metric::bertscore_article,
    Metric::qa_consistency, Metric::qa_hallucination, Metric::fact_consistency,
    Metric::qa_meta,        Metric::fact_meta,      Metric::avg_summary_words,
};

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& s);

/// Human-facing row label used in report tables.
std::string metric_label(Metric metric);

/// Lower is better for qa_hallucination; higher everywhere else.
bool lower_is_better(Metric metric);

/// One per-pair score destined for scores.jsonl and aggregation.
struct ScoreRow {
    std::string article_id;
    std::string system_id;
    Metric metric;
    double value = 0.0;
};

/// Per-(system, metric) aggregate with a normal-approximation 95% interval:
/// half-width = 1.96 * s / sqrt(n) with the (n-1) sample standard deviation,
/// 0 when n == 1.
struct MetricReport {
    std::string system_id;
    Metric metric = Metric::rouge1;
    double mean = 0.0;
    std::size_t n = 0;
    double ci95_half_width = 0.0;
};

/// Group rows by (system, metric); groups that would be empty are never
/// emitted. Throws InvalidArg on a non-finite value.
std::vector<MetricReport> aggregate(const std::vector<ScoreRow>& scores);

enum class ReportFormat { csv, markdown };

/// csv: one MetricReport per row. markdown: metric rows x system columns with
/// the best value per row bolded (lowest for qa_hallucination) and "--" for
/// missing cells. Floats carry 3 decimals; output is byte-deterministic.
std::string render_report(const std::vector<MetricReport>& reports, ReportFormat format);

void emit_report(const std::vector<MetricReport>& reports, ReportFormat format,
                 const std::filesystem::path& path);

// scores.jsonl persistence (full float precision, deterministic order).
void write_scores(const std::filesystem::path& path, std::vector<ScoreRow> rows);
std::vector<ScoreRow> read_scores(const std::filesystem::path& path);

std::string format_fixed3(double value);

}  // namespace sumeval
