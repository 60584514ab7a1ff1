#include "asymint/errors.hpp"

namespace asymint {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ComplexRoots: return "ComplexRoots";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::RepeatedRealParts: return "RepeatedRealParts";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::DomainError: return "DomainError";
    case Errc::Overflow: return "Overflow";
    case Errc::ZeroRoot: return "ZeroRoot";
    case Errc::TailNotConvergent: return "TailNotConvergent";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NoLimit: return "NoLimit";
    case Errc::StepUnderflow: return "StepUnderflow";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(Errc::SyntaxError, message + " at position " + std::to_string(position)),
      position_(position) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(Errc::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(Errc::ValidationError, message), field_(std::move(field)) {}

}  // namespace asymint
