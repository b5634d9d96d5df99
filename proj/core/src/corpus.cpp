#include "sumeval/corpus.hpp"

#include <cctype>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "sumeval/errors.hpp"

namespace sumeval {

namespace {

bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool all_whitespace(std::string_view s) {
    for (char c : s) {
        if (!is_space_byte(c)) return false;
    }
    return true;
}

}  // namespace

const Article* Corpus::find(std::string_view id) const {
    for (const auto& a : articles) {
        if (a.id == id) return &a;
    }
    return nullptr;
}

int word_count(std::string_view text) {
    int count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space_byte(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

Corpus load_corpus(const std::filesystem::path& path, const CorpusFilter& filter) {
    if (filter.min_words <= 0 || filter.min_words > filter.max_words) {
        throw InvalidArg("corpus filter requires 0 < min_words <= max_words");
    }

    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open corpus file: " + path.string());
    }

    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (all_whitespace(line)) continue;

        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedRecord(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!rec.is_object()) throw MalformedRecord(line_no, "record is not an object");
        if (!rec.contains("id") || !rec["id"].is_string()) {
            throw MalformedRecord(line_no, "missing string field \"id\"");
        }
        if (!rec.contains("text") || !rec["text"].is_string()) {
            throw MalformedRecord(line_no, "missing string field \"text\"");
        }

        Article art;
        art.id = rec["id"].get<std::string>();
        art.text = rec["text"].get<std::string>();
        if (art.id.empty()) throw MalformedRecord(line_no, "empty id");
        if (all_whitespace(art.text)) throw MalformedRecord(line_no, "empty text");
        if (!seen_ids.insert(art.id).second) {
            throw MalformedRecord(line_no, "duplicate id \"" + art.id + "\"");
        }
        if (rec.contains("title") && rec["title"].is_string()) {
            art.title = rec["title"].get<std::string>();
        }
        if (rec.contains("summary") && rec["summary"].is_string()) {
            art.reference_summary = rec["summary"].get<std::string>();
        }

        ++corpus.stats.total_records;
        const int wc = word_count(art.text);
        if (wc < filter.min_words) {
            ++corpus.stats.excluded_low;
        } else if (wc > filter.max_words) {
            ++corpus.stats.excluded_high;
        } else {
            ++corpus.stats.retained;
            corpus.articles.push_back(std::move(art));
        }
    }
    if (in.bad()) {
        throw IoFailure("read error on corpus file: " + path.string());
    }
    return corpus;
}

}  // namespace sumeval
