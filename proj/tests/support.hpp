#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "patternset/hashing.hpp"
#include "patternset/matrix.hpp"

namespace testing {

using patternset::Cell;
using patternset::Index;
using patternset::SparseBinaryMatrix;
using patternset::Tile;
using patternset::TileId;

inline SparseBinaryMatrix random_matrix(Index rows, Index cols, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution bit(density);
  std::vector<Cell> ones;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (bit(rng)) ones.push_back({i, j});
  return SparseBinaryMatrix(rows, cols, std::move(ones));
}

inline std::vector<Index> random_subset(Index n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution pick(p);
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (pick(rng)) out.push_back(i);
  if (out.empty()) out.push_back(static_cast<Index>(std::uniform_int_distribution<Index>(0, n - 1)(rng)));
  return out;
}

inline Tile random_tile(TileId id, Index rows, Index cols, double p, std::mt19937_64& rng) {
  return Tile(id, random_subset(rows, p, rng), random_subset(cols, p, rng));
}

inline std::vector<Tile> random_tiles(std::size_t count, Index rows, Index cols, double p, std::mt19937_64& rng) {
  std::vector<Tile> out;
  for (std::size_t t = 0; t < count; ++t) out.push_back(random_tile(static_cast<TileId>(t), rows, cols, p, rng));
  return out;
}

// Matrix whose 1s are the union of the tiles, so every tile is dominated.
inline SparseBinaryMatrix cover_matrix(const std::vector<Tile>& tiles, Index rows, Index cols) {
  std::set<Cell> cells;
  for (const auto& t : tiles)
    for (Index r : t.rows())
      for (Index c : t.cols()) cells.insert({r, c});
  return SparseBinaryMatrix(rows, cols, {cells.begin(), cells.end()});
}

inline std::set<Cell> cells_of(const std::vector<Tile>& tiles) {
  std::set<Cell> cells;
  for (const auto& t : tiles)
    for (Index r : t.rows())
      for (Index c : t.cols()) cells.insert({r, c});
  return cells;
}

inline std::uint64_t brute_error(const SparseBinaryMatrix& data, const std::vector<Tile>& chosen) {
  const auto covered = cells_of(chosen);
  std::uint64_t err = 0;
  for (Index i = 0; i < data.n_rows(); ++i)
    for (Index j = 0; j < data.n_cols(); ++j)
      err += data.contains(i, j) != (covered.count({i, j}) > 0) ? 1 : 0;
  return err;
}

inline std::vector<patternset::hashing::HashValue> brute_bottom_k(const Tile& tile,
                                                                  const patternset::hashing::HashPair& hp,
                                                                  std::size_t k,
                                                                  patternset::hashing::HashValue threshold) {
  std::set<patternset::hashing::HashValue> values;
  for (Index r : tile.rows())
    for (Index c : tile.cols()) {
      const auto v = hp.cell(r, c);
      if (v < threshold) values.insert(v);
    }
  std::vector<patternset::hashing::HashValue> out(values.begin(), values.end());
  if (out.size() > k) out.resize(k);
  return out;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("patternset-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = patternset::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace testing
