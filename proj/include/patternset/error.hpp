#pragma once

#include <stdexcept>
#include <string>

namespace patternset {

enum class ErrorKind {
  invalid_input,
  dimension_mismatch,
  domination_violation,
  infeasible_perturbation,
  calibration,
  parse,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the file readers; carries the 1-based line of the offending input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace patternset
