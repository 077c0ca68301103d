#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace conesphere {

enum class ErrorCode {
    OnLoop,
    DegenerateArrangement,
    NotIncident,
    Unrealizable,
    IncompatibleArrangements,
    DegenerateBase,
    BrokenPath,
    NotAFrame,
    SingularFrame,
    FrameMismatch,
    NotAdjacent,
    NonPositiveArea,
    IncompatibleForms,
    WrongSignature,
    WrongChart,
    ParseError,
    ValidationError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// ParseError with a 1-based position in the source text.
class ParseFailure : public Error {
public:
    ParseFailure(std::size_t line, std::size_t column, const std::string& reason);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace conesphere
