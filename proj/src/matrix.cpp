#include "patternset/matrix.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <string>

#include "patternset/error.hpp"

namespace patternset {

const char* to_string(Mode mode) { return mode == Mode::exact ? "exact" : "inexact"; }

BitMatrix::BitMatrix(Index n_rows, Index n_cols)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      words_per_row_(kernels::words_for(n_cols)),
      words_(std::size_t{n_rows} * kernels::words_for(n_cols), 0) {}

std::uint64_t BitMatrix::count() const {
  const std::vector<Word> zeros(words_per_row_, 0);
  std::uint64_t total = 0;
  for (Index i = 0; i < n_rows_; ++i) total += kernels::count_xor(row(i), zeros);
  return total;
}

SparseBinaryMatrix::SparseBinaryMatrix(Index n_rows, Index n_cols, std::vector<Cell> ones)
    : bits_(n_rows, n_cols) {
  for (const Cell& c : ones) {
    if (c.row >= n_rows || c.col >= n_cols) {
      throw Error(ErrorKind::dimension_mismatch,
                  "cell (" + std::to_string(c.row) + ", " + std::to_string(c.col) + ") outside " +
                      std::to_string(n_rows) + "x" + std::to_string(n_cols) + " matrix");
    }
  }
  std::sort(ones.begin(), ones.end());
  if (auto dup = std::adjacent_find(ones.begin(), ones.end()); dup != ones.end()) {
    throw Error(ErrorKind::invalid_input, "duplicate cell (" + std::to_string(dup->row) + ", " +
                                              std::to_string(dup->col) + ")");
  }
  row_offsets_.assign(std::size_t{n_rows} + 1, 0);
  col_index_.reserve(ones.size());
  for (const Cell& c : ones) {
    ++row_offsets_[c.row + 1];
    col_index_.push_back(c.col);
    bits_.set(c.row, c.col);
  }
  for (std::size_t i = 1; i < row_offsets_.size(); ++i) row_offsets_[i] += row_offsets_[i - 1];
}

SparseBinaryMatrix SparseBinaryMatrix::from_bits(const BitMatrix& bits) {
  std::vector<Cell> ones;
  for (Index i = 0; i < bits.n_rows(); ++i) {
    const auto row = bits.row(i);
    for (std::size_t w = 0; w < row.size(); ++w) {
      for (Word word = row[w]; word != 0; word &= word - 1) {
        const auto j = static_cast<Index>(w * kernels::kWordBits + std::countr_zero(word));
        ones.push_back({i, j});
      }
    }
  }
  return SparseBinaryMatrix(bits.n_rows(), bits.n_cols(), std::move(ones));
}

double SparseBinaryMatrix::density() const {
  return n_cells() == 0 ? 0.0 : static_cast<double>(nnz()) / static_cast<double>(n_cells());
}

std::vector<Cell> SparseBinaryMatrix::cells() const {
  std::vector<Cell> out;
  out.reserve(col_index_.size());
  for (Index i = 0; i < n_rows(); ++i) {
    for (Index j : row_cols(i)) out.push_back({i, j});
  }
  return out;
}

namespace {

void require_strictly_increasing(const std::vector<Index>& v, TileId id, const char* what) {
  if (v.empty()) {
    throw Error(ErrorKind::invalid_input, "tile " + std::to_string(id) + " has no " + what);
  }
  if (std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) != v.end()) {
    throw Error(ErrorKind::invalid_input,
                "tile " + std::to_string(id) + " " + what + " not strictly increasing");
  }
}

}  // namespace

Tile::Tile(TileId id, std::vector<Index> rows, std::vector<Index> cols)
    : id_(id), rows_(std::move(rows)), cols_(std::move(cols)) {
  require_strictly_increasing(rows_, id_, "rows");
  require_strictly_increasing(cols_, id_, "cols");
}

std::vector<Word> column_mask(const Tile& tile, Index n_cols) {
  std::vector<Word> mask(kernels::words_for(n_cols), 0);
  for (Index j : tile.cols()) {
    if (j >= n_cols) {
      throw Error(ErrorKind::dimension_mismatch,
                  "tile " + std::to_string(tile.id()) + " column " + std::to_string(j) + " >= " +
                      std::to_string(n_cols));
    }
    mask[j / kernels::kWordBits] |= Word{1} << (j % kernels::kWordBits);
  }
  return mask;
}

void check_within(const Tile& tile, const SparseBinaryMatrix& data) {
  if (tile.rows().back() >= data.n_rows() || tile.cols().back() >= data.n_cols()) {
    throw Error(ErrorKind::dimension_mismatch,
                "tile " + std::to_string(tile.id()) + " exceeds " + std::to_string(data.n_rows()) +
                    "x" + std::to_string(data.n_cols()) + " matrix");
  }
}

std::uint64_t error(const SparseBinaryMatrix& data, std::span<const Tile> chosen) {
  BitMatrix cover(data.n_rows(), data.n_cols());
  for (const Tile& t : chosen) {
    check_within(t, data);
    const auto mask = column_mask(t, data.n_cols());
    for (Index i : t.rows()) kernels::or_into(cover.row(i), mask);
  }
  std::uint64_t err = 0;
  for (Index i = 0; i < data.n_rows(); ++i) err += kernels::count_xor(cover.row(i), data.bits().row(i));
  return err;
}

double relative_error(std::uint64_t err, const SparseBinaryMatrix& data) {
  if (data.n_cells() == 0) throw Error(ErrorKind::invalid_input, "relative error of an empty matrix");
  return static_cast<double>(err) / static_cast<double>(data.n_cells());
}

std::uint64_t ones_covered(const Tile& tile, const SparseBinaryMatrix& data) {
  check_within(tile, data);
  const auto mask = column_mask(tile, data.n_cols());
  std::uint64_t ones = 0;
  for (Index i : tile.rows()) ones += kernels::count_and(mask, data.bits().row(i));
  return ones;
}

std::uint64_t zeros_covered(const Tile& tile, const SparseBinaryMatrix& data) {
  return tile.size() - ones_covered(tile, data);
}

bool is_dominated(const Tile& tile, const SparseBinaryMatrix& data) {
  return zeros_covered(tile, data) == 0;
}

CoverState::CoverState(const SparseBinaryMatrix& data)
    : data_(&data), covered_(data.n_rows(), data.n_cols()) {}

void CoverState::apply(const Tile& tile) { apply(tile, column_mask(tile, data_->n_cols())); }

void CoverState::apply(const Tile& tile, std::span<const Word> mask) {
  check_within(tile, *data_);
  for (Index i : tile.rows()) {
    const auto fresh = kernels::count_uncovered(mask, covered_.row(i), data_->bits().row(i));
    covered_ones_ += fresh.ones;
    covered_zeros_ += fresh.zeros;
    kernels::or_into(covered_.row(i), mask);
  }
}

std::int64_t CoverState::gain(const Tile& tile) const {
  return gain(tile, column_mask(tile, data_->n_cols()));
}

std::int64_t CoverState::gain(const Tile& tile, std::span<const Word> mask) const {
  check_within(tile, *data_);
  std::int64_t delta = 0;
  for (Index i : tile.rows()) {
    const auto fresh = kernels::count_uncovered(mask, covered_.row(i), data_->bits().row(i));
    delta += static_cast<std::int64_t>(fresh.ones) - static_cast<std::int64_t>(fresh.zeros);
  }
  return delta;
}

std::uint64_t CoverState::error_with(const Tile& tile, std::span<const Word> mask) const {
  check_within(tile, *data_);
  const auto& bits = data_->bits();
  const auto rows = tile.rows();
  std::uint64_t err = 0;
  std::size_t next = 0;
  for (Index i = 0; i < data_->n_rows(); ++i) {
    if (next < rows.size() && rows[next] == i) {
      err += kernels::count_or_xor(covered_.row(i), mask, bits.row(i));
      ++next;
    } else {
      err += kernels::count_xor(covered_.row(i), bits.row(i));
    }
  }
  return err;
}

}  // namespace patternset
