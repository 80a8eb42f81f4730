#include "patternset/adapters.hpp"

#include <algorithm>

#include "patternset/error.hpp"

namespace patternset::adapters {
namespace {

std::vector<Index> sorted_unique(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::optional<Tile> tile_from_itemset(const Itemset& itemset, const SparseBinaryMatrix& data, TileId id) {
  if (itemset.items.empty()) throw Error(ErrorKind::invalid_input, "empty itemset");
  if (std::adjacent_find(itemset.items.begin(), itemset.items.end(), std::greater_equal<>()) !=
      itemset.items.end()) {
    throw Error(ErrorKind::invalid_input, "itemset items not strictly increasing");
  }
  if (itemset.items.back() >= data.n_cols()) {
    throw Error(ErrorKind::dimension_mismatch,
                "item " + std::to_string(itemset.items.back()) + " >= " + std::to_string(data.n_cols()));
  }
  std::vector<Word> mask(kernels::words_for(data.n_cols()), 0);
  for (Index j : itemset.items) mask[j / kernels::kWordBits] |= Word{1} << (j % kernels::kWordBits);
  const auto need = itemset.items.size();
  std::vector<Index> rows;
  for (Index i = 0; i < data.n_rows(); ++i) {
    if (kernels::count_and(mask, data.bits().row(i)) == need) rows.push_back(i);
  }
  if (rows.empty()) return std::nullopt;
  return Tile(id, std::move(rows), itemset.items);
}

std::optional<Tile> tile_from_query_pair(const QueryPairSupports& pair, TileId id) {
  const auto left = sorted_unique(pair.rows_left);
  const auto right = sorted_unique(pair.rows_right);
  std::vector<Index> rows;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(rows));
  if (rows.empty()) return std::nullopt;

  auto cols_left = sorted_unique(pair.cols_left);
  auto cols_right = sorted_unique(pair.cols_right);
  if (cols_left.empty() && cols_right.empty()) {
    throw Error(ErrorKind::invalid_input, "query pair has no attributes");
  }
  if (!cols_left.empty() && cols_left.back() >= pair.n_cols_left) {
    throw Error(ErrorKind::dimension_mismatch, "left attribute " + std::to_string(cols_left.back()) +
                                                   " >= left width " + std::to_string(pair.n_cols_left));
  }
  std::vector<Index> cols = std::move(cols_left);
  for (Index j : cols_right) cols.push_back(j + pair.n_cols_left);
  return Tile(id, std::move(rows), std::move(cols));
}

std::vector<Tile> tiles_from_itemsets(std::span<const Itemset> itemsets, const SparseBinaryMatrix& data,
                                      const WarningSink& warn, TileId first_id) {
  std::vector<Tile> out;
  for (std::size_t n = 0; n < itemsets.size(); ++n) {
    const auto id = static_cast<TileId>(first_id + n);
    if (auto tile = tile_from_itemset(itemsets[n], data, id)) {
      out.push_back(std::move(*tile));
    } else if (warn) {
      warn("itemset " + std::to_string(n) + " has empty support; skipped");
    }
  }
  return out;
}

std::vector<Tile> tiles_from_query_pairs(std::span<const QueryPairSupports> pairs, const WarningSink& warn,
                                         TileId first_id) {
  std::vector<Tile> out;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const auto id = static_cast<TileId>(first_id + n);
    if (auto tile = tile_from_query_pair(pairs[n], id)) {
      out.push_back(std::move(*tile));
    } else if (warn) {
      warn("query pair " + std::to_string(n) + " has disjoint supports; skipped");
    }
  }
  return out;
}

SparseBinaryMatrix union_matrix(std::span<const Tile> tiles, Index n_rows, Index n_cols) {
  BitMatrix bits(n_rows, n_cols);
  for (const Tile& t : tiles) {
    if (t.rows().back() >= n_rows) {
      throw Error(ErrorKind::dimension_mismatch, "tile " + std::to_string(t.id()) + " row out of range");
    }
    const auto mask = column_mask(t, n_cols);
    for (Index i : t.rows()) kernels::or_into(bits.row(i), mask);
  }
  return SparseBinaryMatrix::from_bits(bits);
}

}  // namespace patternset::adapters
