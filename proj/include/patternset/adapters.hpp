#pragma once

// Turning miner output into tiles: frequent itemsets over a transaction
// matrix, and redescriptions given as pre-evaluated query supports.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patternset/matrix.hpp"

namespace patternset::adapters {

struct Itemset {
  std::vector<Index> items;  // non-empty, strictly increasing column indices
};

struct QueryPairSupports {
  std::vector<Index> rows_left;   // entities where q_L holds
  std::vector<Index> rows_right;  // entities where q_R holds
  std::vector<Index> cols_left;   // attributes of q_L, columns of D_L
  std::vector<Index> cols_right;  // attributes of q_R, columns of D_R
  Index n_cols_left = 0;          // width of D_L; offsets cols_right
};

using WarningSink = std::function<void(const std::string&)>;

// Rows are the transactions containing every item. nullopt when no
// transaction does.
std::optional<Tile> tile_from_itemset(const Itemset& itemset, const SparseBinaryMatrix& data, TileId id);

// Rows are rows_left ∩ rows_right; columns are cols_left followed by
// cols_right shifted by n_cols_left. nullopt on an empty intersection.
std::optional<Tile> tile_from_query_pair(const QueryPairSupports& pair, TileId id);

// Batch forms: ids are assigned consecutively from first_id in input order,
// skipped patterns still consume their id. Each skip is reported to `warn`.
std::vector<Tile> tiles_from_itemsets(std::span<const Itemset> itemsets, const SparseBinaryMatrix& data,
                                      const WarningSink& warn, TileId first_id = 0);
std::vector<Tile> tiles_from_query_pairs(std::span<const QueryPairSupports> pairs, const WarningSink& warn,
                                         TileId first_id = 0);

// Binary matrix whose 1s are exactly the cells of the given tiles.
SparseBinaryMatrix union_matrix(std::span<const Tile> tiles, Index n_rows, Index n_cols);

}  // namespace patternset::adapters
