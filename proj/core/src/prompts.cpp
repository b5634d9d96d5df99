#include "sumeval/prompts.hpp"

namespace sumeval::prompts {

namespace {

// Whitespace in these literals is load-bearing: transcripts are cached by
// request hash, so a one-byte change invalidates every recorded cassette.

constexpr std::string_view kQuestionGeneration =
    R"PROMPT(News article summary:
{text}

Please write 4 yes-or-no questions based on the key facts presented in the summary
above. Keep the questions simple, with either a "Yes" or "No" answer. If the summary
is very short and you can't come up with 4 questions, 3 is also acceptable. At least
one question should have "No" as the correct answer. After each question, include
the correct answer in square brackets for the answer key, e.g.:
1. <your question here> [No]
2. <your next question here> [Yes]

Ideally, every question should be answerable using only the news article summary.
If the question cannot be answered using the summary, write "Unknown" as the
correct answer.

Questions:
)PROMPT";

constexpr std::string_view kQuestionAnswering =
    R"PROMPT(News article:
{text}

Based on the news article above, please answer the following numbered questions.
Answer each question with either "Yes", "No", or "Unknown" if the answer can't be
determined based on the information in the article.

Questions:
{questions}

Answers:

)PROMPT";

constexpr std::string_view kFactExtraction =
    R"PROMPT({text}

Please list all of the facts presented in the summary above as a numbered list.
)PROMPT";

constexpr std::string_view kFactChecking =
    R"PROMPT(News article:
```
{text}
```

Are the statements below factually consistent with the article? Please respond with
TRUE or FALSE accordingly for each statement, e.g.:
1. TRUE
2. TRUE
3. FALSE

----------

Statements:
{facts}

Answers (TRUE/FALSE):


)PROMPT";

}  // namespace

std::string_view question_generation() { return kQuestionGeneration; }
std::string_view question_answering() { return kQuestionAnswering; }
std::string_view fact_extraction() { return kFactExtraction; }
std::string_view fact_checking() { return kFactChecking; }

std::string render(std::string_view tmpl, std::string_view name, std::string_view value) {
    const std::string placeholder = "{" + std::string(name) + "}";
    std::string out(tmpl);
    std::size_t pos = 0;
    while ((pos = out.find(placeholder, pos)) != std::string::npos) {
        out.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return out;
}

std::string render(std::string_view tmpl, std::string_view name1, std::string_view value1,
                   std::string_view name2, std::string_view value2) {
    return render(render(tmpl, name1, value1), name2, value2);
}

}  // namespace sumeval::prompts
