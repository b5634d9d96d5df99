#pragma once

#include <string>
#include <string_view>

namespace sumeval::prompts {

/// The four evaluator templates. Placeholders: {text} for the article or
/// summary under evaluation, {questions} / {facts} for the numbered block.
/// Loaded from files when a config points at overrides; these are the
/// built-in defaults.
std::string_view question_generation();
std::string_view question_answering();
std::string_view fact_extraction();
std::string_view fact_checking();

/// Replace every occurrence of "{<name>}" with the given value.
std::string render(std::string_view tmpl, std::string_view name, std::string_view value);
std::string render(std::string_view tmpl, std::string_view name1, std::string_view value1,
                   std::string_view name2, std::string_view value2);

}  // namespace sumeval::prompts
