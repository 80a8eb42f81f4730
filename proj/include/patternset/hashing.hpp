#pragma once

// Bottom-k sketches of rank-1 tiles.
//
// A cell (x, y) hashes to (h1(x) - h2(y)) mod 1 with h1, h2 random affine maps
// over Z/p. Values are kept as integer numerators over the shared modulus p so
// that equal cells compare equal exactly. Ordering rows by h1 and columns by
// h2 makes every column of the hash grid a rotated increasing sequence, which
// lets the k smallest values be found without visiting the whole tile.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "patternset/matrix.hpp"

namespace patternset {
class ThreadPool;
}

namespace patternset::hashing {

using HashValue = std::uint64_t;

// 2^61 - 1. Any prime larger than the matrix dimensions works; a large one
// keeps distinct cells from colliding.
inline constexpr std::uint64_t kDefaultModulus = (std::uint64_t{1} << 61) - 1;

struct HashPair {
  std::uint64_t a1 = 1;
  std::uint64_t b1 = 0;
  std::uint64_t a2 = 1;
  std::uint64_t b2 = 0;
  std::uint64_t modulus = kDefaultModulus;

  // a1, a2 uniform in [1, p), b1, b2 uniform in [0, p).
  static HashPair draw(std::mt19937_64& rng, std::uint64_t modulus = kDefaultModulus);

  HashValue row_hash(Index x) const { return affine(a1, b1, x); }
  HashValue col_hash(Index y) const { return affine(a2, b2, y); }

  HashValue cell(Index x, Index y) const { return difference(row_hash(x), col_hash(y)); }
  HashValue difference(HashValue h1, HashValue h2) const { return h1 >= h2 ? h1 - h2 : h1 + modulus - h2; }

  double to_unit(HashValue v) const { return static_cast<double>(v) / static_cast<double>(modulus); }

 private:
  HashValue affine(std::uint64_t a, std::uint64_t b, Index x) const {
    return static_cast<HashValue>((static_cast<unsigned __int128>(a) * x + b) % modulus);
  }
};

struct SketchConfig {
  std::size_t k = 30;
  std::size_t n_reps = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

// One HashPair per repetition, shared by every tile in that repetition.
struct HashFamily {
  std::vector<HashPair> reps;

  static HashFamily draw(const SketchConfig& cfg, std::uint64_t modulus = kDefaultModulus);
  std::uint64_t modulus() const { return reps.empty() ? kDefaultModulus : reps.front().modulus; }
};

struct TraversalStats {
  std::uint64_t cells_visited = 0;
};

// The k smallest distinct cell hashes of `tile`, ascending, restricted to
// values below `threshold` (a numerator; pass hp.modulus for "everything").
// Throws Error(invalid_input) for k == 0 or a threshold outside (0, p].
std::vector<HashValue> bottom_k_traversal(const Tile& tile, const HashPair& hp, std::size_t k,
                                          HashValue threshold, TraversalStats* stats = nullptr);

inline std::vector<HashValue> bottom_k_traversal(const Tile& tile, const HashPair& hp, std::size_t k) {
  return bottom_k_traversal(tile, hp, k, hp.modulus);
}

// Generic fallback for patterns that are not rank-1: hashes every listed cell.
std::vector<HashValue> bottom_k_cells(std::span<const Cell> cells, const HashPair& hp, std::size_t k);

struct TileSketch {
  TileId tile_id = 0;
  std::vector<std::vector<HashValue>> per_rep;
  std::uint64_t tile_size = 0;
  std::uint64_t zeros_covered = 0;
};

// Sketches every tile under every repetition of `family`. In inexact mode the
// number of data zeros each tile covers is recorded as well.
std::vector<TileSketch> make_sketches(std::span<const Tile> tiles, const HashFamily& family,
                                      std::size_t k, const SparseBinaryMatrix& data, Mode mode,
                                      ThreadPool* pool = nullptr);

std::vector<TileSketch> make_sketches(std::span<const Tile> tiles, const SketchConfig& cfg,
                                      const SparseBinaryMatrix& data, Mode mode,
                                      ThreadPool* pool = nullptr);

// Bottom-k of the union of two sorted distinct lists.
std::vector<HashValue> merge_bottom_k(std::span<const HashValue> a, std::span<const HashValue> b,
                                      std::size_t k);

// Estimate of one repetition from a merged bottom-k list: k / v_k when at
// least k values are present, the distinct count otherwise.
double single_estimate(std::span<const HashValue> merged, std::size_t k, std::uint64_t modulus);

// Per-repetition estimate of |Q ∪ t| without materializing the merge.
double union_rep_estimate(std::span<const HashValue> q, std::span<const HashValue> t, std::size_t k,
                          std::uint64_t modulus);

// Mean of the two middle values for even sizes. Reorders `values`.
double median(std::span<double> values);

// Median over repetitions of the union-size estimate of Q ∪ {cand}. `q` holds
// one merged list per repetition (possibly empty lists for an empty Q).
double union_estimate(std::span<const std::vector<HashValue>> q, const TileSketch& cand,
                      std::size_t k, std::uint64_t modulus);

// union_estimate, minus the candidate's covered zeros in inexact mode.
double estimated_contribution(std::span<const std::vector<HashValue>> q, const TileSketch& cand,
                              std::size_t k, std::uint64_t modulus, Mode mode);

}  // namespace patternset::hashing
