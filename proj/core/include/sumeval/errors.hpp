#pragma once

#include <stdexcept>
#include <string>

namespace sumeval {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoFailure : Error {
    using Error::Error;
};

/// A corpus or summary record is structurally invalid (missing required
/// field, duplicate id, unparseable line). Carries the 1-based record index.
struct MalformedRecord : Error {
    MalformedRecord(std::size_t record_index, const std::string& what)
        : Error("record " + std::to_string(record_index) + ": " + what),
          record_index(record_index) {}
    std::size_t record_index;
};

struct InvalidArg : Error {
    using Error::Error;
};

struct ZeroVector : Error {
    using Error::Error;
};

struct EmptyTokenization : Error {
    using Error::Error;
};

struct ProviderFailure : Error {
    using Error::Error;
};

/// Power iteration hit the iteration cap before meeting tolerance.
struct ConvergenceFailure : Error {
    using Error::Error;
};

struct CacheMiss : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct UnknownArticle : Error {
    using Error::Error;
};

/// A model transcript did not parse under the expected grammar.
struct ParseFailure : Error {
    using Error::Error;
};

struct NonContiguousIndices : ParseFailure {
    using ParseFailure::ParseFailure;
};

struct DuplicateIndex : ParseFailure {
    using ParseFailure::ParseFailure;
};

/// The endpoint's content filter rejected an evaluator call; terminal.
struct ContentFilteredError : Error {
    ContentFilteredError() : Error("content filter rejected the request") {}
};

/// Transport-level or malformed-response failure of an evaluator call; says
/// nothing about the evaluator's accuracy, unlike the op failures below.
struct EvaluatorCallFailed : Error {
    using Error::Error;
};

struct GenerationFailed : Error {
    using Error::Error;
};

struct AnsweringFailed : Error {
    using Error::Error;
};

struct ExtractionFailed : Error {
    using Error::Error;
};

struct CheckingFailed : Error {
    using Error::Error;
};

}  // namespace sumeval
