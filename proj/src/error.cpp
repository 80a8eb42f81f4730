#include "patternset/error.hpp"

namespace patternset {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::domination_violation: return "domination violation";
    case ErrorKind::infeasible_perturbation: return "infeasible perturbation";
    case ErrorKind::calibration: return "calibration error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace patternset
