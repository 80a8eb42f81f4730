#include "patternset/hashing.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "patternset/error.hpp"
#include "patternset/parallel.hpp"

namespace patternset::hashing {

HashPair HashPair::draw(std::mt19937_64& rng, std::uint64_t modulus) {
  if (modulus < 2) throw Error(ErrorKind::invalid_input, "hash modulus must be at least 2");
  std::uniform_int_distribution<std::uint64_t> nonzero(1, modulus - 1);
  std::uniform_int_distribution<std::uint64_t> any(0, modulus - 1);
  HashPair hp;
  hp.modulus = modulus;
  hp.a1 = nonzero(rng);
  hp.b1 = any(rng);
  hp.a2 = nonzero(rng);
  hp.b2 = any(rng);
  return hp;
}

void SketchConfig::validate() const {
  if (k < 1) throw Error(ErrorKind::invalid_input, "sketch k must be >= 1");
  if (n_reps < 1) throw Error(ErrorKind::invalid_input, "sketch repetitions must be >= 1");
}

HashFamily HashFamily::draw(const SketchConfig& cfg, std::uint64_t modulus) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  HashFamily family;
  family.reps.reserve(cfg.n_reps);
  for (std::size_t r = 0; r < cfg.n_reps; ++r) family.reps.push_back(HashPair::draw(rng, modulus));
  return family;
}

namespace {

// Sorted distinct values, at most k of them.
class BottomK {
 public:
  BottomK(std::size_t k, HashValue threshold) : k_(k), threshold_(threshold) { values_.reserve(k + 1); }

  HashValue threshold() const { return threshold_; }

  void offer(HashValue v) {
    auto pos = std::lower_bound(values_.begin(), values_.end(), v);
    if (pos != values_.end() && *pos == v) return;
    values_.insert(pos, v);
    if (values_.size() > k_) values_.pop_back();
    if (values_.size() == k_) threshold_ = std::min(threshold_, values_.back());
  }

  std::vector<HashValue> take() && { return std::move(values_); }

 private:
  std::size_t k_;
  HashValue threshold_;
  std::vector<HashValue> values_;
};

std::vector<HashValue> sorted_hashes(std::span<const Index> indices, auto&& hash) {
  std::vector<HashValue> out;
  out.reserve(indices.size());
  for (Index x : indices) out.push_back(hash(x));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<HashValue> bottom_k_traversal(const Tile& tile, const HashPair& hp, std::size_t k,
                                          HashValue threshold, TraversalStats* stats) {
  if (k == 0) throw Error(ErrorKind::invalid_input, "bottom-k traversal needs k >= 1");
  if (threshold == 0 || threshold > hp.modulus) {
    throw Error(ErrorKind::invalid_input, "initial threshold must lie in (0, p]");
  }
  for (Index x : tile.rows()) {
    if (x >= hp.modulus) throw Error(ErrorKind::invalid_input, "row index not below hash modulus");
  }
  for (Index y : tile.cols()) {
    if (y >= hp.modulus) throw Error(ErrorKind::invalid_input, "column index not below hash modulus");
  }

  // h1 is injective on [0, p) since a1 != 0, so the row hashes are distinct.
  const auto row_h = sorted_hashes(tile.rows(), [&](Index x) { return hp.row_hash(x); });
  const auto col_h = sorted_hashes(tile.cols(), [&](Index y) { return hp.col_hash(y); });
  const std::size_t n_rows = row_h.size();

  BottomK best(k, threshold);
  std::uint64_t visited = 0;
  std::size_t wrap = 0;
  for (HashValue c : col_h) {
    // First row whose hash is >= the column hash holds the column minimum;
    // it only moves forward because the columns are visited in h2 order.
    while (wrap < n_rows && row_h[wrap] < c) ++wrap;
    const std::size_t start = wrap == n_rows ? 0 : wrap;
    for (std::size_t step = 0; step < n_rows; ++step) {
      std::size_t i = start + step;
      if (i >= n_rows) i -= n_rows;
      const HashValue v = hp.difference(row_h[i], c);
      ++visited;
      if (v >= best.threshold()) break;
      best.offer(v);
    }
  }
  if (stats != nullptr) stats->cells_visited += visited;
  return std::move(best).take();
}

std::vector<HashValue> bottom_k_cells(std::span<const Cell> cells, const HashPair& hp, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::invalid_input, "bottom-k needs k >= 1");
  BottomK best(k, hp.modulus);
  for (const Cell& c : cells) {
    const HashValue v = hp.cell(c.row, c.col);
    if (v < best.threshold()) best.offer(v);
  }
  return std::move(best).take();
}

std::vector<TileSketch> make_sketches(std::span<const Tile> tiles, const HashFamily& family,
                                      std::size_t k, const SparseBinaryMatrix& data, Mode mode,
                                      ThreadPool* pool) {
  if (family.reps.empty()) throw Error(ErrorKind::invalid_input, "hash family has no repetitions");
  for (const Tile& t : tiles) check_within(t, data);
  std::vector<TileSketch> out(tiles.size());
  auto body = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      TileSketch& s = out[i];
      s.tile_id = tiles[i].id();
      s.tile_size = tiles[i].size();
      s.zeros_covered = mode == Mode::inexact ? zeros_covered(tiles[i], data) : 0;
      s.per_rep.reserve(family.reps.size());
      for (const HashPair& hp : family.reps) s.per_rep.push_back(bottom_k_traversal(tiles[i], hp, k));
    }
  };
  if (pool != nullptr) {
    pool->parallel_for(tiles.size(), body);
  } else {
    body(0, tiles.size());
  }
  return out;
}

std::vector<TileSketch> make_sketches(std::span<const Tile> tiles, const SketchConfig& cfg,
                                      const SparseBinaryMatrix& data, Mode mode, ThreadPool* pool) {
  return make_sketches(tiles, HashFamily::draw(cfg), cfg.k, data, mode, pool);
}

std::vector<HashValue> merge_bottom_k(std::span<const HashValue> a, std::span<const HashValue> b,
                                      std::size_t k) {
  std::vector<HashValue> out;
  out.reserve(std::min(k, a.size() + b.size()));
  std::size_t i = 0;
  std::size_t j = 0;
  while (out.size() < k && (i < a.size() || j < b.size())) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      out.push_back(b[j++]);
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

namespace {

double kth_estimate(HashValue kth, std::size_t k, std::uint64_t modulus) {
  const HashValue v = std::max<HashValue>(kth, 1);
  return static_cast<double>(k) * (static_cast<double>(modulus) / static_cast<double>(v));
}

}  // namespace

double single_estimate(std::span<const HashValue> merged, std::size_t k, std::uint64_t modulus) {
  if (merged.size() >= k) return kth_estimate(merged[k - 1], k, modulus);
  return static_cast<double>(merged.size());
}

double union_rep_estimate(std::span<const HashValue> q, std::span<const HashValue> t, std::size_t k,
                          std::uint64_t modulus) {
  if (q.size() >= k) {
    // Only t's values below Q's k-th value can change the k-th smallest of
    // the union. Of those, the ones already in Q are duplicates.
    const auto q_head = q.first(k);
    const HashValue q_kth = q_head.back();
    std::size_t below = 0;
    while (below < t.size() && t[below] < q_kth) ++below;
    auto is_new = [&](HashValue v) { return !std::binary_search(q_head.begin(), q_head.end(), v); };
    std::size_t fresh = 0;
    for (std::size_t j = 0; j < below; ++j) fresh += is_new(t[j]) ? 1 : 0;
    if (fresh == 0) return kth_estimate(q_kth, k, modulus);

    // The merged list has k + fresh values; drop the `fresh` largest and the
    // largest survivor is the k-th smallest.
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) - 1;
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(below) - 1;
    auto skip_known = [&] {
      while (j >= 0 && !is_new(t[static_cast<std::size_t>(j)])) --j;
    };
    skip_known();
    for (std::size_t dropped = 0; dropped < fresh; ++dropped) {
      if (j < 0 || (i >= 0 && q[static_cast<std::size_t>(i)] > t[static_cast<std::size_t>(j)])) {
        --i;
      } else {
        --j;
        skip_known();
      }
    }
    HashValue kth = 0;
    if (i >= 0) kth = q[static_cast<std::size_t>(i)];
    if (j >= 0) kth = std::max(kth, t[static_cast<std::size_t>(j)]);
    return kth_estimate(kth, k, modulus);
  }

  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t count = 0;
  HashValue last = 0;
  while (count < k && (i < q.size() || j < t.size())) {
    if (j == t.size() || (i < q.size() && q[i] < t[j])) {
      last = q[i++];
    } else if (i == q.size() || t[j] < q[i]) {
      last = t[j++];
    } else {
      last = q[i];
      ++i;
      ++j;
    }
    ++count;
  }
  if (count < k) return static_cast<double>(count);
  return kth_estimate(last, k, modulus);
}

double median(std::span<double> values) {
  if (values.empty()) throw Error(ErrorKind::invalid_input, "median of no values");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double union_estimate(std::span<const std::vector<HashValue>> q, const TileSketch& cand,
                      std::size_t k, std::uint64_t modulus) {
  if (q.size() != cand.per_rep.size()) {
    throw Error(ErrorKind::invalid_input, "repetition count mismatch: Q has " + std::to_string(q.size()) +
                                              ", tile " + std::to_string(cand.tile_id) + " has " +
                                              std::to_string(cand.per_rep.size()));
  }
  if (q.empty()) throw Error(ErrorKind::invalid_input, "no hash repetitions");
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_buf;
  std::vector<double> heap_buf;
  std::span<double> estimates(inline_buf.data(), q.size());
  if (q.size() > kInline) {
    heap_buf.resize(q.size());
    estimates = heap_buf;
  }
  for (std::size_t r = 0; r < q.size(); ++r) {
    estimates[r] = union_rep_estimate(q[r], cand.per_rep[r], k, modulus);
  }
  return median(estimates);
}

double estimated_contribution(std::span<const std::vector<HashValue>> q, const TileSketch& cand,
                              std::size_t k, std::uint64_t modulus, Mode mode) {
  const double joint = union_estimate(q, cand, k, modulus);
  return mode == Mode::inexact ? joint - static_cast<double>(cand.zeros_covered) : joint;
}

}  // namespace patternset::hashing
