#include "sumeval/fact_eval.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "sumeval/errors.hpp"
#include "sumeval/prompts.hpp"

namespace sumeval {

std::string to_string(FactStatus status) {
    switch (status) {
        case FactStatus::ok: return "ok";
        case FactStatus::extraction_failed: return "extraction_failed";
        case FactStatus::checking_failed: return "checking_failed";
        case FactStatus::content_filtered: return "content_filtered";
    }
    throw InvalidArg("unknown fact status");
}

namespace {

std::vector<std::string> split_lines(const std::string& raw) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : raw) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    lines.push_back(cur);
    return lines;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t") == std::string::npos;
}

std::optional<bool> verdict_from_token(std::string token) {
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (token == "true") return true;
    if (token == "false") return false;
    return std::nullopt;
}

int parse_index(const std::string& digits) {
    try {
        return std::stoi(digits);
    } catch (const std::out_of_range&) {
        throw ParseFailure("index out of range: " + digits);
    }
}

}  // namespace

std::vector<std::string> parse_fact_list(const std::string& raw) {
    static const std::regex line_re(R"(^(\d+)\.\s+(\S.*?)\s*$)");

    std::map<int, std::string> by_index;
    for (const auto& line : split_lines(raw)) {
        std::smatch m;
        if (!std::regex_match(line, m, line_re)) continue;
        const int index = parse_index(m[1].str());
        if (by_index.count(index)) {
            throw DuplicateIndex("fact index " + std::to_string(index) + " repeated");
        }
        by_index.emplace(index, m[2].str());
    }
    if (by_index.empty()) throw ParseFailure("no numbered facts in transcript");

    std::vector<std::string> facts;
    int expected = 1;
    for (auto& [index, fact] : by_index) {
        if (index != expected) throw NonContiguousIndices("fact indices are not contiguous from 1");
        ++expected;
        facts.push_back(std::move(fact));
    }
    return facts;
}

std::vector<bool> parse_verdicts(const std::string& raw, std::size_t expected) {
    static const std::regex numbered_re(R"(^(\d+)\.\s*([A-Za-z]+)\s*$)");
    static const std::regex bare_re(R"(^\s*([A-Za-z]+)\s*$)");

    std::vector<std::string> lines;
    for (auto& line : split_lines(raw)) {
        if (!blank(line)) lines.push_back(line);
    }
    if (lines.empty()) throw ParseFailure("no verdicts in transcript");

    std::smatch m;
    if (std::regex_match(lines.front(), m, numbered_re)) {
        std::map<int, bool> by_index;
        for (const auto& line : lines) {
            if (!std::regex_match(line, m, numbered_re)) {
                throw ParseFailure("unparseable verdict line: " + line);
            }
            const int index = parse_index(m[1].str());
            const auto verdict = verdict_from_token(m[2].str());
            if (!verdict) throw ParseFailure("invalid verdict token: " + m[2].str());
            if (by_index.count(index)) {
                throw ParseFailure("verdict index " + std::to_string(index) + " repeated");
            }
            by_index.emplace(index, *verdict);
        }
        if (by_index.size() != expected || by_index.begin()->first != 1 ||
            by_index.rbegin()->first != static_cast<int>(expected)) {
            throw ParseFailure("got " + std::to_string(by_index.size()) + " verdicts for " +
                               std::to_string(expected) + " facts");
        }
        std::vector<bool> verdicts;
        for (const auto& [index, v] : by_index) verdicts.push_back(v);
        return verdicts;
    }

    std::vector<bool> verdicts;
    for (const auto& line : lines) {
        if (!std::regex_match(line, m, bare_re)) {
            throw ParseFailure("unparseable verdict line: " + line);
        }
        const auto verdict = verdict_from_token(m[1].str());
        if (!verdict) throw ParseFailure("invalid verdict token: " + m[1].str());
        verdicts.push_back(*verdict);
    }
    if (verdicts.size() != expected) {
        throw ParseFailure("got " + std::to_string(verdicts.size()) + " verdicts for " +
                           std::to_string(expected) + " facts");
    }
    return verdicts;
}

std::string numbered_facts(std::span<const std::string> facts) {
    std::string block;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        if (!block.empty()) block += '\n';
        block += std::to_string(i + 1) + ". " + facts[i];
    }
    return block;
}

FactScores score_facts(const std::vector<bool>& article_verdicts,
                       const std::vector<bool>& summary_verdicts) {
    const std::size_t n = article_verdicts.size();
    if (n == 0) throw InvalidArg("score_facts: need at least one fact");
    if (summary_verdicts.size() != n) {
        throw LengthMismatch("score_facts: verdict lists must align");
    }

    const auto count_true = [](const std::vector<bool>& v) {
        return static_cast<double>(std::count(v.begin(), v.end(), true));
    };
    return {count_true(article_verdicts) / static_cast<double>(n),
            count_true(summary_verdicts) / static_cast<double>(n)};
}

FactEvaluator::FactEvaluator(LlmGateway& gateway, ProviderProfile evaluator, CacheMode mode)
    : gateway_(gateway), evaluator_(std::move(evaluator)), mode_(mode) {}

ChatOutcome FactEvaluator::call(const std::string& prompt, const CallObserver& observer) const {
    ChatRequest request;
    request.provider_id = evaluator_.provider_id;
    request.model = evaluator_.model;
    request.temperature = 0.0;
    request.messages.push_back({Role::user, prompt});
    const ChatOutcome outcome = gateway_.complete(request, mode_);
    if (observer) observer(prompt, outcome);
    if (outcome.kind == ChatOutcome::Kind::content_filtered) throw ContentFilteredError();
    if (!outcome.ok()) throw EvaluatorCallFailed(outcome.detail);
    return outcome;
}

std::vector<std::string> FactEvaluator::extract_facts(const std::string& summary,
                                                      const CallObserver& observer) const {
    const std::string prompt = prompts::render(prompts::fact_extraction(), "text", summary);
    const ChatOutcome outcome = call(prompt, observer);
    try {
        return parse_fact_list(outcome.content);
    } catch (const ParseFailure& e) {
        throw ExtractionFailed(e.what());
    }
}

std::vector<bool> FactEvaluator::check_facts(const std::string& context,
                                             std::span<const std::string> facts,
                                             const CallObserver& observer) const {
    if (facts.empty()) throw InvalidArg("check_facts: need at least one fact");
    const std::string prompt =
        prompts::render(prompts::fact_checking(), "text", context, "facts", numbered_facts(facts));
    const ChatOutcome outcome = call(prompt, observer);
    // Verdicts never default to False: an unparseable checking transcript
    // fails the evaluation instead of biasing consistency down.
    try {
        return parse_verdicts(outcome.content, facts.size());
    } catch (const ParseFailure& e) {
        throw CheckingFailed(e.what());
    }
}

FactEvaluation FactEvaluator::evaluate(const std::string& article_id, const std::string& system_id,
                                       const std::string& summary, const std::string& source_text,
                                       const TranscriptSink& sink) const {
    FactEvaluation eval;
    eval.article_id = article_id;
    eval.system_id = system_id;

    auto observer = [&](const std::string& step) -> CallObserver {
        if (!sink) return {};
        return [&, step](const std::string& prompt, const ChatOutcome& outcome) {
            sink({article_id, system_id, "fact", step, prompt, to_string(outcome.kind),
                  outcome.content});
        };
    };

    try {
        eval.facts = extract_facts(summary, observer("fact_extraction"));
    } catch (const ContentFilteredError&) {
        eval.status = FactStatus::content_filtered;
        return eval;
    } catch (const Error& e) {  // ExtractionFailed or EvaluatorCallFailed
        eval.status = FactStatus::extraction_failed;
        eval.failure_detail = e.what();
        return eval;
    }

    auto run_check = [&](const std::string& step, const std::string& context,
                         std::vector<bool>& out) {
        try {
            out = check_facts(context, eval.facts, observer(step));
            return true;
        } catch (const ContentFilteredError&) {
            eval.status = FactStatus::content_filtered;
            return false;
        } catch (const Error& e) {  // CheckingFailed or EvaluatorCallFailed
            eval.status = FactStatus::checking_failed;
            eval.failure_detail = e.what();
            return false;
        }
    };

    if (!run_check("article_check", source_text, eval.article_verdicts)) return eval;
    if (!run_check("summary_check", summary, eval.summary_verdicts)) return eval;

    const FactScores scores = score_facts(eval.article_verdicts, eval.summary_verdicts);
    eval.consistency = scores.consistency;
    eval.meta = scores.meta;
    eval.status = FactStatus::ok;
    return eval;
}

}  // namespace sumeval
