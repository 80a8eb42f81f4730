#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "patternset/datagen.hpp"
#include "patternset/select.hpp"

namespace patternset::cli {

enum ExitCode : int {
  kOk = 0,
  kParseFailure = 2,
  kDominationViolation = 3,
  kInfeasibleParams = 4,
};

struct RunConfig {
  std::string command;
  Algorithm algorithm = Algorithm::hapsi;
  Mode mode = Mode::exact;
  std::string matrix_path;
  std::string tiles_path;
  std::string output;
  std::size_t k = 30;
  std::size_t n_reps = 10;
  std::size_t m_candidates = 30;
  std::size_t t_max = 200;
  std::uint64_t seed = 0;
  bool strict_pseudocode = false;
  Evaluator evaluator = Evaluator::full_scan;
  std::size_t threads = 1;
  bool timing = true;

  SelectionParams selection_params() const;
  nlohmann::ordered_json to_json() const;
};

// Runs the command line; returns the process exit code. Diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patternset::cli
