#include "patternset/select.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <optional>

#include "patternset/error.hpp"
#include "patternset/parallel.hpp"

namespace patternset {

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::hapsi: return "hapsi";
    case Algorithm::greedy: return "greedy";
    case Algorithm::naive: return "naive";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "hapsi") return Algorithm::hapsi;
  if (name == "greedy") return Algorithm::greedy;
  if (name == "naive") return Algorithm::naive;
  throw Error(ErrorKind::invalid_input, "unknown algorithm '" + name + "'");
}

const char* to_string(Evaluator evaluator) {
  return evaluator == Evaluator::full_scan ? "full_scan" : "tile_local";
}

void SelectionParams::validate() const {
  if (t_max < 1) throw Error(ErrorKind::invalid_input, "t_max must be >= 1");
  if (m_candidates < 1) throw Error(ErrorKind::invalid_input, "m_candidates must be >= 1");
  if (threads < 1) throw Error(ErrorKind::invalid_input, "threads must be >= 1");
  sketch.validate();
}

void validate_tiles(const SparseBinaryMatrix& data, std::span<const Tile> tiles, Mode mode) {
  if (tiles.empty()) throw Error(ErrorKind::invalid_input, "no candidate tiles");
  for (const Tile& t : tiles) {
    check_within(t, data);
    if (mode == Mode::exact && !is_dominated(t, data)) {
      throw Error(ErrorKind::domination_violation,
                  "tile " + std::to_string(t.id()) + " covers a 0 of the data in exact mode");
    }
  }
}

namespace {

using Clock = std::chrono::steady_clock;

// Shared substrate of the three algorithms: the cover, precomputed column
// masks, true-error evaluation and trace recording.
class Workspace {
 public:
  Workspace(const SparseBinaryMatrix& data, std::span<const Tile> tiles, const SelectionParams& params)
      : data_(data), tiles_(tiles), params_(params), cover_(data), pool_(params.threads), start_(Clock::now()) {
    masks_.resize(tiles.size());
    pool_.parallel_for(tiles.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) masks_[i] = column_mask(tiles_[i], data_.n_cols());
    });
  }

  const CoverState& cover() const { return cover_; }
  ThreadPool& pool() { return pool_; }

  std::uint64_t error_with(std::size_t i) const {
    if (params_.evaluator == Evaluator::full_scan) return cover_.error_with(tiles_[i], masks_[i]);
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(cover_.error()) -
                                      cover_.gain(tiles_[i], masks_[i]));
  }

  void accept(std::size_t i) {
    cover_.apply(tiles_[i], masks_[i]);
    result_.chosen.push_back(i);
    TraceRecord rec;
    rec.iteration = result_.chosen.size();
    rec.tile_id = tiles_[i].id();
    rec.error = cover_.error();
    rec.rel_error = relative_error(rec.error, data_);
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    rec.covered_zeros = cover_.covered_zeros();
    result_.trace.push_back(rec);
  }

  std::size_t n_chosen() const { return result_.chosen.size(); }
  SelectionResult take() && { return std::move(result_); }

 private:
  const SparseBinaryMatrix& data_;
  std::span<const Tile> tiles_;
  const SelectionParams& params_;
  CoverState cover_;
  ThreadPool pool_;
  Clock::time_point start_;
  std::vector<std::vector<Word>> masks_;
  SelectionResult result_;
};

bool id_less(std::span<const Tile> tiles, std::size_t a, std::size_t b) {
  if (tiles[a].id() != tiles[b].id()) return tiles[a].id() < tiles[b].id();
  return a < b;
}

}  // namespace

SelectionResult greedy(const SparseBinaryMatrix& data, std::span<const Tile> tiles,
                       const SelectionParams& params) {
  params.validate();
  validate_tiles(data, tiles, params.mode);
  Workspace ws(data, tiles, params);

  std::vector<std::size_t> remaining(tiles.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<std::uint64_t> errors(tiles.size());

  while (ws.n_chosen() < params.t_max && !remaining.empty()) {
    ws.pool().parallel_for(remaining.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) errors[r] = ws.error_with(remaining[r]);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < remaining.size(); ++r) {
      if (errors[r] < errors[best] ||
          (errors[r] == errors[best] && id_less(tiles, remaining[r], remaining[best]))) {
        best = r;
      }
    }
    if (errors[best] >= ws.cover().error()) break;
    ws.accept(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return std::move(ws).take();
}

SelectionResult naive(const SparseBinaryMatrix& data, std::span<const Tile> tiles,
                      const SelectionParams& params) {
  params.validate();
  validate_tiles(data, tiles, params.mode);
  Workspace ws(data, tiles, params);

  std::vector<std::int64_t> standalone(tiles.size());
  ws.pool().parallel_for(tiles.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto zeros = params.mode == Mode::inexact ? zeros_covered(tiles[i], data) : 0;
      standalone[i] = static_cast<std::int64_t>(tiles[i].size()) - 2 * static_cast<std::int64_t>(zeros);
    }
  });
  std::vector<std::size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (standalone[a] != standalone[b]) return standalone[a] > standalone[b];
    return id_less(tiles, a, b);
  });
  const std::size_t n = std::min(params.t_max, order.size());
  for (std::size_t r = 0; r < n; ++r) ws.accept(order[r]);
  return std::move(ws).take();
}

SelectionResult hapsi(const SparseBinaryMatrix& data, std::span<const Tile> tiles,
                      const SelectionParams& params) {
  using hashing::HashValue;
  params.validate();
  validate_tiles(data, tiles, params.mode);
  Workspace ws(data, tiles, params);

  const std::size_t k = params.sketch.k;
  const auto family = hashing::HashFamily::draw(params.sketch);
  const std::uint64_t modulus = family.modulus();
  const auto sketches = hashing::make_sketches(tiles, family, k, data, params.mode, &ws.pool());

  // Seed with the tile of smallest standalone error: |D| - ones + zeros.
  auto standalone_error = [&](std::size_t i) {
    const auto& s = sketches[i];
    return static_cast<std::int64_t>(data.nnz()) - static_cast<std::int64_t>(s.tile_size) +
           2 * static_cast<std::int64_t>(s.zeros_covered);
  };
  std::size_t seed = 0;
  for (std::size_t i = 1; i < tiles.size(); ++i) {
    const auto e = standalone_error(i);
    const auto best = standalone_error(seed);
    if (e < best || (e == best && id_less(tiles, i, seed))) seed = i;
  }
  if (standalone_error(seed) >= static_cast<std::int64_t>(data.nnz())) return std::move(ws).take();
  ws.accept(seed);

  std::vector<std::vector<HashValue>> q_sketch = sketches[seed].per_rep;
  std::vector<std::size_t> remaining;
  remaining.reserve(tiles.size() - 1);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    if (i != seed) remaining.push_back(i);
  }
  std::vector<double> estimate(tiles.size());
  std::vector<std::size_t> order;

  while (ws.n_chosen() < params.t_max && !remaining.empty()) {
    ws.pool().parallel_for(remaining.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        const std::size_t i = remaining[r];
        estimate[i] = hashing::estimated_contribution(q_sketch, sketches[i], k, modulus, params.mode);
      }
    });
    order = remaining;
    const std::size_t m = std::min(params.m_candidates, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (estimate[a] != estimate[b]) return estimate[a] > estimate[b];
                        if (tiles[a].size() != tiles[b].size()) return tiles[a].size() > tiles[b].size();
                        return id_less(tiles, a, b);
                      });

    std::optional<std::size_t> accepted;
    const std::uint64_t current = ws.cover().error();
    for (std::size_t r = 0; r < m; ++r) {
      if (ws.error_with(order[r]) < current) {
        accepted = order[r];
        break;
      }
      if (params.strict_pseudocode) break;
    }
    if (!accepted) break;

    ws.accept(*accepted);
    for (std::size_t rep = 0; rep < q_sketch.size(); ++rep) {
      q_sketch[rep] = hashing::merge_bottom_k(q_sketch[rep], sketches[*accepted].per_rep[rep], k);
    }
    remaining.erase(std::find(remaining.begin(), remaining.end(), *accepted));
  }
  return std::move(ws).take();
}

SelectionResult run_selection(Algorithm algorithm, const SparseBinaryMatrix& data,
                              std::span<const Tile> tiles, const SelectionParams& params) {
  switch (algorithm) {
    case Algorithm::hapsi: return hapsi(data, tiles, params);
    case Algorithm::greedy: return greedy(data, tiles, params);
    case Algorithm::naive: return naive(data, tiles, params);
  }
  throw Error(ErrorKind::invalid_input, "unknown algorithm");
}

}  // namespace patternset
