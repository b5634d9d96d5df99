#include "sumeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "sumeval/errors.hpp"

namespace sumeval {

using nlohmann::json;

std::string to_string(Metric metric) {
    switch (metric) {
        case Metric::rouge1: return "rouge1";
        case Metric::rougeL: return "rougeL";
        case Metric::rouge1_article: return "rouge1_article";
        case Metric::rougeL_article: return "rougeL_article";
        case Metric::bertscore: return "bertscore";
        case Metric::bertscore_article: return "bertscore_article";
        case Metric::qa_consistency: return "qa_consistency";
        case Metric::qa_hallucination: return "qa_hallucination";
        case Metric::fact_consistency: return "fact_consistency";
        case Metric::qa_meta: return "qa_meta";
        case Metric::fact_meta: return "fact_meta";
        case Metric::avg_summary_words: return "avg_summary_words";
    }
    throw InvalidArg("unknown metric");
}

Metric metric_from_string(const std::string& s) {
    for (Metric m : kAllMetrics) {
        if (to_string(m) == s) return m;
    }
    throw InvalidArg("unknown metric: " + s);
}

std::string metric_label(Metric metric) {
    switch (metric) {
        case Metric::rouge1: return "ROUGE-1";
        case Metric::rougeL: return "ROUGE-L";
        case Metric::rouge1_article: return "ROUGE-1 (article)";
        case Metric::rougeL_article: return "ROUGE-L (article)";
        case Metric::bertscore: return "BERTScore";
        case Metric::bertscore_article: return "BERTScore (article)";
        case Metric::qa_consistency: return "QA Consistency";
        case Metric::qa_hallucination: return "QA Hallucination";
        case Metric::fact_consistency: return "Fact Consistency";
        case Metric::qa_meta: return "QA Meta Evaluation";
        case Metric::fact_meta: return "Fact Meta Evaluation";
        case Metric::avg_summary_words: return "Average summary length (words)";
    }
    throw InvalidArg("unknown metric");
}

bool lower_is_better(Metric metric) { return metric == Metric::qa_hallucination; }

std::string format_fixed3(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", value);
    return buf;
}

std::vector<MetricReport> aggregate(const std::vector<ScoreRow>& scores) {
    std::map<std::pair<std::string, int>, std::vector<double>> groups;
    for (const auto& row : scores) {
        if (!std::isfinite(row.value)) {
            throw InvalidArg("aggregate: non-finite value for " + row.system_id + "/" +
                             to_string(row.metric));
        }
        groups[{row.system_id, static_cast<int>(row.metric)}].push_back(row.value);
    }

    std::vector<MetricReport> reports;
    for (const auto& [key, values] : groups) {
        MetricReport report;
        report.system_id = key.first;
        report.metric = static_cast<Metric>(key.second);
        report.n = values.size();

        double sum = 0.0;
        for (double v : values) sum += v;
        report.mean = sum / static_cast<double>(values.size());

        if (values.size() > 1) {
            double sq = 0.0;
            for (double v : values) sq += (v - report.mean) * (v - report.mean);
            const double stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
            report.ci95_half_width = 1.96 * stddev / std::sqrt(static_cast<double>(values.size()));
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

namespace {

std::string render_csv(const std::vector<MetricReport>& reports) {
    std::string out = "system_id,metric,mean,n,ci95_half_width\n";
    std::vector<const MetricReport*> sorted;
    for (const auto& r : reports) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const MetricReport* a, const MetricReport* b) {
        return std::tie(a->system_id, a->metric) < std::tie(b->system_id, b->metric);
    });
    for (const auto* r : sorted) {
        out += r->system_id + ',' + to_string(r->metric) + ',' + format_fixed3(r->mean) + ',' +
               std::to_string(r->n) + ',' + format_fixed3(r->ci95_half_width) + '\n';
    }
    return out;
}

std::string render_markdown(const std::vector<MetricReport>& reports) {
    std::set<std::string> system_set;
    std::map<std::pair<int, std::string>, const MetricReport*> cells;
    std::set<int> metric_set;
    for (const auto& r : reports) {
        system_set.insert(r.system_id);
        metric_set.insert(static_cast<int>(r.metric));
        cells[{static_cast<int>(r.metric), r.system_id}] = &r;
    }
    const std::vector<std::string> systems(system_set.begin(), system_set.end());

    std::string out = "| Metric |";
    for (const auto& s : systems) out += ' ' + s + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < systems.size(); ++i) out += "---|";
    out += '\n';

    for (Metric metric : kAllMetrics) {
        if (!metric_set.count(static_cast<int>(metric))) continue;

        std::optional<double> best;
        for (const auto& s : systems) {
            auto it = cells.find({static_cast<int>(metric), s});
            if (it == cells.end()) continue;
            const double mean = it->second->mean;
            if (!best || (lower_is_better(metric) ? mean < *best : mean > *best)) best = mean;
        }

        out += "| " + metric_label(metric) + " |";
        for (const auto& s : systems) {
            auto it = cells.find({static_cast<int>(metric), s});
            if (it == cells.end()) {
                out += " -- |";
                continue;
            }
            const std::string value = format_fixed3(it->second->mean);
            const bool is_best = best && it->second->mean == *best;
            out += is_best ? " **" + value + "** |" : ' ' + value + " |";
        }
        out += '\n';
    }
    return out;
}

}  // namespace

std::string render_report(const std::vector<MetricReport>& reports, ReportFormat format) {
    return format == ReportFormat::csv ? render_csv(reports) : render_markdown(reports);
}

void emit_report(const std::vector<MetricReport>& reports, ReportFormat format,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoFailure("cannot write report: " + path.string());
    out << render_report(reports, format);
    if (!out) throw IoFailure("write failed: " + path.string());
}

void write_scores(const std::filesystem::path& path, std::vector<ScoreRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
        return std::tie(a.system_id, a.article_id, a.metric) <
               std::tie(b.system_id, b.article_id, b.metric);
    });
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoFailure("cannot write scores: " + path.string());
    for (const auto& row : rows) {
        const json j = {{"article_id", row.article_id},
                        {"system_id", row.system_id},
                        {"metric", to_string(row.metric)},
                        {"value", row.value}};
        out << j.dump() << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path.string());
}

std::vector<ScoreRow> read_scores(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("missing scores file: " + path.string());

    std::vector<ScoreRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            rows.push_back({j.at("article_id").get<std::string>(),
                            j.at("system_id").get<std::string>(),
                            metric_from_string(j.at("metric").get<std::string>()),
                            j.at("value").get<double>()});
        } catch (const json::exception& e) {
            throw MalformedRecord(line_no, std::string("bad score row: ") + e.what());
        }
    }
    return rows;
}

}  // namespace sumeval
