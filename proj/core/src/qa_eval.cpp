#include "sumeval/qa_eval.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "sumeval/errors.hpp"
#include "sumeval/prompts.hpp"

namespace sumeval {

std::string to_string(Answer a) {
    switch (a) {
        case Answer::yes: return "Yes";
        case Answer::no: return "No";
        case Answer::unknown: return "Unknown";
    }
    throw InvalidArg("unknown answer");
}

std::optional<Answer> answer_from_token(std::string_view token) {
    std::string lower(token);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "yes") return Answer::yes;
    if (lower == "no") return Answer::no;
    if (lower == "unknown") return Answer::unknown;
    return std::nullopt;
}

std::string to_string(QaStatus status) {
    switch (status) {
        case QaStatus::ok: return "ok";
        case QaStatus::generation_failed: return "generation_failed";
        case QaStatus::answering_failed: return "answering_failed";
        case QaStatus::content_filtered: return "content_filtered";
    }
    throw InvalidArg("unknown qa status");
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

int parse_index(const std::string& digits) {
    try {
        return std::stoi(digits);
    } catch (const std::out_of_range&) {
        throw ParseFailure("index out of range: " + digits);
    }
}

}  // namespace

std::vector<GeneratedQuestion> parse_question_block(const std::string& raw) {
    // integer "." ws question-ending-in-? ws "[" Yes|No|Unknown "]" [ws]
    static const std::regex line_re(R"(^(\d+)\.\s+(.*\?)\s+\[(yes|no|unknown)\]\s*$)",
                                    std::regex::icase);

    std::map<int, GeneratedQuestion> by_index;
    for (const auto& line : split_lines(raw)) {
        std::smatch m;
        if (!std::regex_match(line, m, line_re)) continue;  // prose etc. is ignored
        GeneratedQuestion q;
        q.index = parse_index(m[1].str());
        q.text = m[2].str();
        q.key = *answer_from_token(m[3].str());
        if (by_index.count(q.index)) {
            throw DuplicateIndex("question index " + std::to_string(q.index) + " repeated");
        }
        by_index.emplace(q.index, std::move(q));
    }

    std::vector<GeneratedQuestion> questions;
    int expected = 1;
    for (auto& [index, q] : by_index) {
        if (index != expected) {
            throw NonContiguousIndices("question indices are not contiguous from 1");
        }
        ++expected;
        questions.push_back(std::move(q));
    }
    return questions;
}

std::vector<Answer> parse_answer_block(const std::string& raw, std::size_t expected) {
    static const std::regex numbered_re(R"(^(\d+)\.\s*([A-Za-z]+)\s*$)");
    static const std::regex bare_re(R"(^\s*([A-Za-z]+)\s*$)");

    std::vector<std::string> lines;
    for (auto& line : split_lines(raw)) {
        if (!blank(line)) lines.push_back(line);
    }
    if (lines.empty()) throw ParseFailure("no answers in transcript");

    // Numbered form first; else every line must be a bare answer token in order.
    std::smatch m;
    if (std::regex_match(lines.front(), m, numbered_re)) {
        std::map<int, Answer> by_index;
        for (const auto& line : lines) {
            if (!std::regex_match(line, m, numbered_re)) {
                throw ParseFailure("unparseable answer line: " + line);
            }
            const int index = parse_index(m[1].str());
            const auto answer = answer_from_token(m[2].str());
            if (!answer) throw ParseFailure("invalid answer token: " + m[2].str());
            if (by_index.count(index)) {
                throw ParseFailure("answer index " + std::to_string(index) + " repeated");
            }
            by_index.emplace(index, *answer);
        }
        if (by_index.size() != expected || by_index.begin()->first != 1 ||
            by_index.rbegin()->first != static_cast<int>(expected)) {
            throw ParseFailure("answered " + std::to_string(by_index.size()) + " of " +
                               std::to_string(expected) + " questions");
        }
        std::vector<Answer> answers;
        for (const auto& [index, a] : by_index) answers.push_back(a);
        return answers;
    }

    std::vector<Answer> answers;
    for (const auto& line : lines) {
        if (!std::regex_match(line, m, bare_re)) {
            throw ParseFailure("unparseable answer line: " + line);
        }
        const auto answer = answer_from_token(m[1].str());
        if (!answer) throw ParseFailure("invalid answer token: " + m[1].str());
        answers.push_back(*answer);
    }
    if (answers.size() != expected) {
        throw ParseFailure("answered " + std::to_string(answers.size()) + " of " +
                           std::to_string(expected) + " questions");
    }
    return answers;
}

std::string numbered_questions(std::span<const GeneratedQuestion> questions) {
    std::string block;
    for (const auto& q : questions) {
        if (!block.empty()) block += '\n';
        block += std::to_string(q.index) + ". " + q.text;
    }
    return block;
}

QaScores score_qa(std::span<const GeneratedQuestion> questions, std::span<const Answer> summary_answers,
                  std::span<const Answer> source_answers) {
    const std::size_t n = questions.size();
    if (n == 0) throw InvalidArg("score_qa: need at least one question");
    if (summary_answers.size() != n || source_answers.size() != n) {
        throw LengthMismatch("score_qa: answer lists must align with questions");
    }

    int consistent = 0, hallucinated = 0, key_matches = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (summary_answers[i] == source_answers[i]) ++consistent;
        if (source_answers[i] == Answer::unknown && summary_answers[i] != Answer::unknown) {
            ++hallucinated;
        }
        if (summary_answers[i] == questions[i].key) ++key_matches;
    }

    QaScores scores;
    scores.consistency = static_cast<double>(consistent) / static_cast<double>(n);
    scores.hallucination = static_cast<double>(hallucinated) / static_cast<double>(n);
    scores.meta = static_cast<double>(key_matches) / static_cast<double>(n);
    return scores;
}

QaEvaluator::QaEvaluator(LlmGateway& gateway, ProviderProfile evaluator, CacheMode mode)
    : gateway_(gateway), evaluator_(std::move(evaluator)), mode_(mode) {}

ChatOutcome QaEvaluator::call(const std::string& prompt, const CallObserver& observer) const {
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

std::vector<GeneratedQuestion> QaEvaluator::generate_questions(const std::string& summary,
                                                               const CallObserver& observer) const {
    const std::string prompt = prompts::render(prompts::question_generation(), "text", summary);
    const ChatOutcome outcome = call(prompt, observer);

    std::vector<GeneratedQuestion> questions;
    try {
        questions = parse_question_block(outcome.content);
    } catch (const ParseFailure& e) {
        throw GenerationFailed(e.what());
    }
    if (questions.size() < 3 || questions.size() > 4) {
        throw GenerationFailed("parsed " + std::to_string(questions.size()) + " questions");
    }
    return questions;
}

std::vector<Answer> QaEvaluator::answer_questions(const std::string& context,
                                                  std::span<const GeneratedQuestion> questions,
                                                  const CallObserver& observer) const {
    if (questions.empty()) throw InvalidArg("answer_questions: need at least one question");
    const std::string prompt = prompts::render(prompts::question_answering(), "text", context,
                                               "questions", numbered_questions(questions));
    const ChatOutcome outcome = call(prompt, observer);
    try {
        return parse_answer_block(outcome.content, questions.size());
    } catch (const ParseFailure& e) {
        throw AnsweringFailed(e.what());
    }
}

QaEvaluation QaEvaluator::evaluate(const std::string& article_id, const std::string& system_id,
                                   const std::string& summary, const std::string& source_text,
                                   const TranscriptSink& sink) const {
    QaEvaluation eval;
    eval.article_id = article_id;
    eval.system_id = system_id;

    auto observer = [&](const std::string& step) -> CallObserver {
        if (!sink) return {};
        return [&, step](const std::string& prompt, const ChatOutcome& outcome) {
            sink({article_id, system_id, "qa", step, prompt, to_string(outcome.kind),
                  outcome.content});
        };
    };

    try {
        eval.questions = generate_questions(summary, observer("question_generation"));
    } catch (const ContentFilteredError&) {
        eval.status = QaStatus::content_filtered;
        return eval;
    } catch (const Error& e) {  // GenerationFailed or EvaluatorCallFailed
        eval.status = QaStatus::generation_failed;
        eval.failure_detail = e.what();
        return eval;
    }

    // Answer from the summary. A model response that fails to answer every
    // question is an evaluator failure and pins meta to 0; an infrastructure
    // failure leaves meta unset.
    try {
        eval.summary_answers =
            answer_questions(summary, eval.questions, observer("summary_answers"));
    } catch (const ContentFilteredError&) {
        eval.status = QaStatus::content_filtered;
        return eval;
    } catch (const AnsweringFailed& e) {
        eval.status = QaStatus::answering_failed;
        eval.failure_detail = e.what();
        eval.meta = 0.0;
        return eval;
    } catch (const EvaluatorCallFailed& e) {
        eval.status = QaStatus::answering_failed;
        eval.failure_detail = e.what();
        return eval;
    }

    // Answer from the source article. The summary-vs-key audit is already
    // computable here, so a source-side failure keeps meta.
    auto meta_only = [&](const std::string& detail) {
        eval.status = QaStatus::answering_failed;
        eval.failure_detail = detail;
        int key_matches = 0;
        for (std::size_t i = 0; i < eval.questions.size(); ++i) {
            if (eval.summary_answers[i] == eval.questions[i].key) ++key_matches;
        }
        eval.meta = static_cast<double>(key_matches) / static_cast<double>(eval.questions.size());
    };
    try {
        eval.source_answers =
            answer_questions(source_text, eval.questions, observer("source_answers"));
    } catch (const ContentFilteredError&) {
        eval.status = QaStatus::content_filtered;
        return eval;
    } catch (const Error& e) {  // AnsweringFailed or EvaluatorCallFailed
        meta_only(e.what());
        return eval;
    }

    const QaScores scores = score_qa(eval.questions, eval.summary_answers, eval.source_answers);
    eval.consistency = scores.consistency;
    eval.hallucination = scores.hallucination;
    eval.meta = scores.meta;
    eval.status = QaStatus::ok;
    return eval;
}

}  // namespace sumeval
