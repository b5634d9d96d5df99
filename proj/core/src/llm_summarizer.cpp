#include "sumeval/llm_summarizer.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "sumeval/errors.hpp"

namespace sumeval {

using nlohmann::json;

std::string to_string(SummaryStatus status) {
    switch (status) {
        case SummaryStatus::ok: return "ok";
        case SummaryStatus::content_filtered: return "content_filtered";
        case SummaryStatus::generation_failed: return "generation_failed";
    }
    throw InvalidArg("unknown summary status");
}

SummaryStatus summary_status_from_string(const std::string& s) {
    if (s == "ok") return SummaryStatus::ok;
    if (s == "content_filtered") return SummaryStatus::content_filtered;
    if (s == "generation_failed") return SummaryStatus::generation_failed;
    throw InvalidArg("unknown summary status: " + s);
}

SummaryRecord SummaryRecord::ok(std::string article_id, std::string system_id, std::string text) {
    SummaryRecord rec;
    rec.article_id = std::move(article_id);
    rec.system_id = std::move(system_id);
    rec.word_count = sumeval::word_count(text);
    rec.text = std::move(text);
    rec.status = SummaryStatus::ok;
    return rec;
}

SummaryRecord SummaryRecord::failed(std::string article_id, std::string system_id,
                                    SummaryStatus status) {
    SummaryRecord rec;
    rec.article_id = std::move(article_id);
    rec.system_id = std::move(system_id);
    rec.status = status;
    return rec;
}

std::string_view summary_prompt_sentence() {
    return "Write a 1-2 sentence summary of the article above.";
}

ChatRequest make_summary_request(const Article& article, const ProviderProfile& profile) {
    ChatRequest request;
    request.provider_id = profile.provider_id;
    request.model = profile.model;
    request.temperature = 0.0;
    request.messages.push_back(
        {Role::user, article.text + "\n\n" + std::string(summary_prompt_sentence())});
    return request;
}

SummaryRecord summarize(const Article& article, const ProviderProfile& profile,
                        LlmGateway& gateway, CacheMode mode) {
    const ChatOutcome outcome = gateway.complete(make_summary_request(article, profile), mode);
    switch (outcome.kind) {
        case ChatOutcome::Kind::text: {
            if (outcome.content.empty()) {
                return SummaryRecord::failed(article.id, profile.provider_id,
                                             SummaryStatus::generation_failed);
            }
            return SummaryRecord::ok(article.id, profile.provider_id, outcome.content);
        }
        case ChatOutcome::Kind::content_filtered:
            return SummaryRecord::failed(article.id, profile.provider_id,
                                         SummaryStatus::content_filtered);
        case ChatOutcome::Kind::transport_error:
        case ChatOutcome::Kind::malformed_response:
            return SummaryRecord::failed(article.id, profile.provider_id,
                                         SummaryStatus::generation_failed);
    }
    throw Error("unreachable");
}

std::vector<SummaryRecord> import_summaries(const std::filesystem::path& path,
                                            const std::string& system_id, const Corpus& corpus) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open summary file: " + path.string());

    std::vector<SummaryRecord> records;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw MalformedRecord(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!rec.contains("article_id") || !rec["article_id"].is_string() ||
            !rec.contains("text") || !rec["text"].is_string()) {
            throw MalformedRecord(line_no, "summary record needs string article_id and text");
        }
        const auto article_id = rec["article_id"].get<std::string>();
        if (!corpus.contains(article_id)) {
            throw UnknownArticle("imported summary references unknown article \"" + article_id + "\"");
        }
        if (!seen.insert(article_id).second) {
            throw MalformedRecord(line_no, "duplicate summary for (" + article_id + ", " + system_id + ")");
        }
        auto text = rec["text"].get<std::string>();
        if (sumeval::word_count(text) == 0) {
            throw MalformedRecord(line_no, "empty summary text for article \"" + article_id + "\"");
        }
        records.push_back(SummaryRecord::ok(article_id, system_id, std::move(text)));
    }
    return records;
}

void write_summaries(const std::filesystem::path& path, std::vector<SummaryRecord> records) {
    std::sort(records.begin(), records.end(), [](const SummaryRecord& a, const SummaryRecord& b) {
        return std::tie(a.system_id, a.article_id) < std::tie(b.system_id, b.article_id);
    });
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot write summaries: " + path.string());
    for (const auto& rec : records) {
        json j = {{"article_id", rec.article_id},
                  {"system_id", rec.system_id},
                  {"status", to_string(rec.status)},
                  {"word_count", rec.word_count}};
        j["text"] = rec.text ? json(*rec.text) : json(nullptr);
        out << j.dump() << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path.string());
}

std::vector<SummaryRecord> read_summaries(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("missing summaries file: " + path.string());

    std::vector<SummaryRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            SummaryRecord rec;
            rec.article_id = j.at("article_id").get<std::string>();
            rec.system_id = j.at("system_id").get<std::string>();
            rec.status = summary_status_from_string(j.at("status").get<std::string>());
            rec.word_count = j.at("word_count").get<int>();
            if (j.contains("text") && j["text"].is_string()) rec.text = j["text"].get<std::string>();
            records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw MalformedRecord(line_no, std::string("bad summary record: ") + e.what());
        }
    }
    return records;
}

}  // namespace sumeval
