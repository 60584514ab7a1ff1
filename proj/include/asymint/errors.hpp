#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asymint {

enum class Errc {
  ComplexRoots,
  IllConditioned,
  RepeatedRealParts,
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  Overflow,
  ZeroRoot,
  TailNotConvergent,
  NonFinite,
  NoLimit,
  StepUnderflow,
  ParseError,
  ValidationError,
  InvalidArgument,
};

[[nodiscard]] std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Expression syntax error; position is a 0-based character offset into the source.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message);
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Config file error; line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace asymint
