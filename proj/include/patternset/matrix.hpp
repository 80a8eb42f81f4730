#pragma once

// Binary data matrices, rank-1 tiles, and the cover bookkeeping that turns a
// set of chosen tiles into a reconstruction error.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "patternset/kernels.hpp"

namespace patternset {

using Index = std::uint32_t;
using TileId = std::uint32_t;
using kernels::Word;

// exact: every candidate tile is dominated by the data (covers no 0s).
// inexact: tiles may cover 0s, which count against the error.
enum class Mode { exact, inexact };

const char* to_string(Mode mode);

struct Cell {
  Index row = 0;
  Index col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Dense row-major bit array. Each row occupies words_per_row() words; bits past
// n_cols() in the last word of a row are always zero.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(Index n_rows, Index n_cols);

  Index n_rows() const { return n_rows_; }
  Index n_cols() const { return n_cols_; }
  std::size_t words_per_row() const { return words_per_row_; }

  std::span<const Word> row(Index i) const {
    return {words_.data() + std::size_t{i} * words_per_row_, words_per_row_};
  }
  std::span<Word> row(Index i) { return {words_.data() + std::size_t{i} * words_per_row_, words_per_row_}; }

  bool test(Index i, Index j) const {
    return (row(i)[j / kernels::kWordBits] >> (j % kernels::kWordBits)) & 1U;
  }
  void set(Index i, Index j) { row(i)[j / kernels::kWordBits] |= Word{1} << (j % kernels::kWordBits); }
  void flip(Index i, Index j) { row(i)[j / kernels::kWordBits] ^= Word{1} << (j % kernels::kWordBits); }

  std::uint64_t count() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  Index n_rows_ = 0;
  Index n_cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<Word> words_;
};

// The data matrix D. Immutable after construction. Keeps the 1s both as
// per-row sorted column lists and as packed bit rows.
class SparseBinaryMatrix {
 public:
  SparseBinaryMatrix() = default;

  // Throws Error(dimension_mismatch) for out-of-range cells and
  // Error(invalid_input) for duplicates. `ones` need not be sorted.
  SparseBinaryMatrix(Index n_rows, Index n_cols, std::vector<Cell> ones);

  static SparseBinaryMatrix from_bits(const BitMatrix& bits);

  Index n_rows() const { return bits_.n_rows(); }
  Index n_cols() const { return bits_.n_cols(); }
  std::uint64_t nnz() const { return col_index_.size(); }
  std::uint64_t n_cells() const { return std::uint64_t{n_rows()} * n_cols(); }
  double density() const;

  std::span<const Index> row_cols(Index i) const {
    return {col_index_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  bool contains(Index i, Index j) const { return bits_.test(i, j); }
  const BitMatrix& bits() const { return bits_; }

  // Row-major sorted coordinates.
  std::vector<Cell> cells() const;

  friend bool operator==(const SparseBinaryMatrix& a, const SparseBinaryMatrix& b) {
    return a.bits_ == b.bits_;
  }

 private:
  BitMatrix bits_;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Index> col_index_;
};

// A rank-1 pattern: the cell set rows × cols.
class Tile {
 public:
  // rows and cols must be non-empty and strictly increasing.
  Tile(TileId id, std::vector<Index> rows, std::vector<Index> cols);

  TileId id() const { return id_; }
  std::span<const Index> rows() const { return rows_; }
  std::span<const Index> cols() const { return cols_; }
  std::uint64_t size() const { return std::uint64_t{rows_.size()} * cols_.size(); }

  friend bool operator==(const Tile&, const Tile&) = default;

 private:
  TileId id_;
  std::vector<Index> rows_;
  std::vector<Index> cols_;
};

// Packed bitmask of the tile's columns, words_for(n_cols) long.
std::vector<Word> column_mask(const Tile& tile, Index n_cols);

// Throws Error(dimension_mismatch) if any tile index lies outside D.
void check_within(const Tile& tile, const SparseBinaryMatrix& data);

// |uncovered 1s of D| + |covered 0s of D| for the union of `chosen`.
std::uint64_t error(const SparseBinaryMatrix& data, std::span<const Tile> chosen);

double relative_error(std::uint64_t err, const SparseBinaryMatrix& data);

std::uint64_t ones_covered(const Tile& tile, const SparseBinaryMatrix& data);
std::uint64_t zeros_covered(const Tile& tile, const SparseBinaryMatrix& data);
bool is_dominated(const Tile& tile, const SparseBinaryMatrix& data);

// Union of chosen tiles against a fixed data matrix. Single writer; const
// members are safe to call concurrently.
class CoverState {
 public:
  explicit CoverState(const SparseBinaryMatrix& data);

  const SparseBinaryMatrix& data() const { return *data_; }
  const BitMatrix& covered() const { return covered_; }
  std::uint64_t covered_ones() const { return covered_ones_; }
  std::uint64_t covered_zeros() const { return covered_zeros_; }
  std::uint64_t data_ones() const { return data_->nnz(); }
  std::uint64_t error() const { return data_ones() - covered_ones_ + covered_zeros_; }

  // ORs the tile into the cover. Applying the same tile twice is a no-op.
  void apply(const Tile& tile);
  void apply(const Tile& tile, std::span<const Word> mask);

  // error() - error() after apply(tile), without mutating. Touches only the
  // tile's rows.
  std::int64_t gain(const Tile& tile) const;
  std::int64_t gain(const Tile& tile, std::span<const Word> mask) const;

  // Error of the cover extended by `tile`, recounted over all m×n cells.
  std::uint64_t error_with(const Tile& tile, std::span<const Word> mask) const;

 private:
  const SparseBinaryMatrix* data_;
  BitMatrix covered_;
  std::uint64_t covered_ones_ = 0;
  std::uint64_t covered_zeros_ = 0;
};

}  // namespace patternset
