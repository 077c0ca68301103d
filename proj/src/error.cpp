#include "conesphere/error.hpp"

namespace conesphere {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::OnLoop: return "OnLoop";
    case ErrorCode::DegenerateArrangement: return "DegenerateArrangement";
    case ErrorCode::NotIncident: return "NotIncident";
    case ErrorCode::Unrealizable: return "Unrealizable";
    case ErrorCode::IncompatibleArrangements: return "IncompatibleArrangements";
    case ErrorCode::DegenerateBase: return "DegenerateBase";
    case ErrorCode::BrokenPath: return "BrokenPath";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::SingularFrame: return "SingularFrame";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::NonPositiveArea: return "NonPositiveArea";
    case ErrorCode::IncompatibleForms: return "IncompatibleForms";
    case ErrorCode::WrongSignature: return "WrongSignature";
    case ErrorCode::WrongChart: return "WrongChart";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

ParseFailure::ParseFailure(std::size_t line, std::size_t column, const std::string& reason)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
      line_(line), column_(column)
{
}

} // namespace conesphere
