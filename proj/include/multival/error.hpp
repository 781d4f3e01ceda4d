#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace multival {

enum class ErrorKind {
  ParseError,
  SyntaxError,
  FieldMismatch,
  ZeroInput,
  DivisionByZero,
  InvalidValuation,
  InvalidSpec,
  InconsistentTargets,
  SameValuation,
  ZeroEntry,
  NonDecreasingDiscrepancy,
  UnsupportedRing,
  UnsupportedArity,
  AllZero,
  NotInClosure,
  NoInstance,
  ConstructionFailed,
  SpecMismatch,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Syntax error in the local-sentence language, positioned at a 1-based line/column.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorKind::SyntaxError, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace multival
