#pragma once

// Pattern set selection: HaPSi (bottom-k guided), Greedy, and Naive.
//
// All three share the same cover bookkeeping and report a per-iteration trace
// whose error column always equals the error recomputed from scratch.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "patternset/hashing.hpp"
#include "patternset/matrix.hpp"

namespace patternset {

enum class Algorithm { hapsi, greedy, naive };

const char* to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);

// How the true error of "current cover + candidate" is obtained.
//   full_scan:  recount every cell of D (the classic O(mn)-per-evaluation cost)
//   tile_local: count only the candidate's rows against the cover
// Both produce identical numbers.
enum class Evaluator { full_scan, tile_local };

const char* to_string(Evaluator evaluator);

struct SelectionParams {
  std::size_t t_max = 200;
  std::size_t m_candidates = 30;
  Mode mode = Mode::exact;
  hashing::SketchConfig sketch{};
  Evaluator evaluator = Evaluator::full_scan;
  // HaPSi only: stop at the first non-improving candidate, as the literal
  // pseudocode reads, instead of scanning all m candidates.
  bool strict_pseudocode = false;
  std::size_t threads = 1;

  void validate() const;
};

struct TraceRecord {
  std::size_t iteration = 0;  // 1-based
  TileId tile_id = 0;
  std::uint64_t error = 0;
  double rel_error = 0.0;
  double elapsed_ms = 0.0;  // since the start of the selection call
  std::uint64_t covered_zeros = 0;
};

struct SelectionResult {
  std::vector<std::size_t> chosen;  // positions in the input tile list, in selection order
  std::vector<TraceRecord> trace;

  std::uint64_t final_error(const SparseBinaryMatrix& data) const {
    return trace.empty() ? data.nnz() : trace.back().error;
  }
};

// Throws Error(invalid_input) for an empty tile list, Error(dimension_mismatch)
// for out-of-range tiles, and in exact mode Error(domination_violation) naming
// the first tile that covers a 0.
void validate_tiles(const SparseBinaryMatrix& data, std::span<const Tile> tiles, Mode mode);

SelectionResult hapsi(const SparseBinaryMatrix& data, std::span<const Tile> tiles,
                      const SelectionParams& params);

// Picks the tile with the largest true gain each round (ties: smaller id)
// until no gain is positive or t_max is reached.
SelectionResult greedy(const SparseBinaryMatrix& data, std::span<const Tile> tiles,
                       const SelectionParams& params);

// Ranks tiles once by standalone gain and adds them in that order.
SelectionResult naive(const SparseBinaryMatrix& data, std::span<const Tile> tiles,
                      const SelectionParams& params);

SelectionResult run_selection(Algorithm algorithm, const SparseBinaryMatrix& data,
                              std::span<const Tile> tiles, const SelectionParams& params);

}  // namespace patternset
