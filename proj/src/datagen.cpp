#include "patternset/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "patternset/error.hpp"

namespace patternset::datagen {

const char* to_string(Assembly assembly) {
  return assembly == Assembly::base_only ? "base_only" : "all_tiles";
}

Assembly parse_assembly(const std::string& name) {
  if (name == "base_only") return Assembly::base_only;
  if (name == "all_tiles") return Assembly::all_tiles;
  throw Error(ErrorKind::invalid_input, "unknown assembly '" + name + "'");
}

namespace {

bool is_fraction(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void SynthConfig::validate() const {
  if (n_rows < 1 || n_cols < 1) throw Error(ErrorKind::invalid_input, "dimensions must be >= 1");
  if (n_base_tiles < 1) throw Error(ErrorKind::invalid_input, "need at least one base tile");
  if (bernoulli_p.has_value() == target_density.has_value()) {
    throw Error(ErrorKind::invalid_input, "give exactly one of bernoulli_p and target_density");
  }
  if (bernoulli_p && !(*bernoulli_p > 0.0 && *bernoulli_p <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "bernoulli_p must lie in (0, 1]");
  }
  if (target_density && !(*target_density > 0.0 && *target_density < 1.0)) {
    throw Error(ErrorKind::invalid_input, "target_density must lie in (0, 1)");
  }
  if (!is_fraction(perturb_fraction)) throw Error(ErrorKind::invalid_input, "perturb fraction outside [0, 1]");
  if (!is_fraction(noise_fraction)) throw Error(ErrorKind::invalid_input, "noise fraction outside [0, 1]");
}

std::size_t SynthConfig::participating_tiles() const {
  return assemble_from == Assembly::base_only ? n_base_tiles : n_base_tiles * (n_copies + 1);
}

SynthConfig exact_preset(SynthConfig cfg) {
  cfg.assemble_from = Assembly::all_tiles;
  cfg.noise_fraction = 0.0;
  return cfg;
}

std::string TileLabel::to_string() const {
  return is_base() ? "base" : "copy-of-" + std::to_string(base);
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

// Non-empty Bernoulli(p) support over [0, n), sorted.
std::vector<Index> bernoulli_support(Index n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Index> support;
  while (support.empty()) {
    for (Index i = 0; i < n; ++i) {
      if (unit(rng) < p) support.push_back(i);
    }
  }
  return support;
}

// Moves round(d·|support|) of the 1s to positions that were 0.
std::vector<Index> perturb(const std::vector<Index>& support, Index n, double d, std::mt19937_64& rng) {
  const auto moves = static_cast<std::size_t>(std::llround(d * static_cast<double>(support.size())));
  if (moves == 0) return support;
  std::vector<Index> zeros;
  zeros.reserve(n - support.size());
  std::size_t s = 0;
  for (Index i = 0; i < n; ++i) {
    if (s < support.size() && support[s] == i) {
      ++s;
    } else {
      zeros.push_back(i);
    }
  }
  if (moves > zeros.size()) {
    throw Error(ErrorKind::infeasible_perturbation,
                "cannot move " + std::to_string(moves) + " of " + std::to_string(support.size()) +
                    " ones into " + std::to_string(zeros.size()) + " free positions");
  }
  std::vector<Index> removed;
  std::sample(support.begin(), support.end(), std::back_inserter(removed), moves, rng);
  std::vector<Index> added;
  std::sample(zeros.begin(), zeros.end(), std::back_inserter(added), moves, rng);
  std::vector<Index> out;
  out.reserve(support.size());
  std::set_difference(support.begin(), support.end(), removed.begin(), removed.end(), std::back_inserter(out));
  out.insert(out.end(), added.begin(), added.end());
  std::sort(out.begin(), out.end());
  return out;
}

struct TileSet {
  std::vector<Tile> tiles;
  std::vector<TileLabel> labels;
};

TileSet make_tiles(const SynthConfig& cfg, double p) {
  auto base_rng = stream(cfg.seed, 1);
  auto copy_rng = stream(cfg.seed, 2);
  TileSet out;
  const std::size_t per_base = cfg.n_copies + 1;
  out.tiles.reserve(cfg.n_base_tiles * per_base);
  for (std::size_t b = 0; b < cfg.n_base_tiles; ++b) {
    auto rows = bernoulli_support(cfg.n_rows, p, base_rng);
    auto cols = bernoulli_support(cfg.n_cols, p, base_rng);
    std::vector<Tile> copies;
    copies.reserve(cfg.n_copies);
    for (std::size_t c = 1; c <= cfg.n_copies; ++c) {
      auto copy_rows = perturb(rows, cfg.n_rows, cfg.perturb_fraction, copy_rng);
      auto copy_cols = perturb(cols, cfg.n_cols, cfg.perturb_fraction, copy_rng);
      copies.emplace_back(static_cast<TileId>(b * per_base + c), std::move(copy_rows), std::move(copy_cols));
    }
    out.tiles.emplace_back(static_cast<TileId>(b * per_base), std::move(rows), std::move(cols));
    out.labels.push_back({b, 0});
    for (std::size_t c = 1; c <= cfg.n_copies; ++c) {
      out.tiles.push_back(std::move(copies[c - 1]));
      out.labels.push_back({b, c});
    }
  }
  return out;
}

BitMatrix assemble(const SynthConfig& cfg, const TileSet& set) {
  BitMatrix bits(cfg.n_rows, cfg.n_cols);
  for (std::size_t i = 0; i < set.tiles.size(); ++i) {
    if (cfg.assemble_from == Assembly::base_only && !set.labels[i].is_base()) continue;
    const auto mask = column_mask(set.tiles[i], cfg.n_cols);
    for (Index r : set.tiles[i].rows()) kernels::or_into(bits.row(r), mask);
  }
  return bits;
}

void add_noise(const SynthConfig& cfg, BitMatrix& bits) {
  const std::uint64_t cells = std::uint64_t{cfg.n_rows} * cfg.n_cols;
  const auto flips = static_cast<std::uint64_t>(std::llround(cfg.noise_fraction * static_cast<double>(cells)));
  if (flips == 0) return;
  auto rng = stream(cfg.seed, 3);
  // Floyd's sampling of `flips` distinct cells.
  std::unordered_set<std::uint64_t> picked;
  picked.reserve(flips);
  for (std::uint64_t j = cells - flips; j < cells; ++j) {
    const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    if (!picked.insert(t).second) picked.insert(j);
  }
  for (std::uint64_t cell : picked) {
    bits.flip(static_cast<Index>(cell / cfg.n_cols), static_cast<Index>(cell % cfg.n_cols));
  }
}

double pre_noise_density(const SynthConfig& cfg, double p) {
  try {
    const auto bits = assemble(cfg, make_tiles(cfg, p));
    return static_cast<double>(bits.count()) / (static_cast<double>(cfg.n_rows) * cfg.n_cols);
  } catch (const Error& e) {
    // Too many 1s to move around: certainly denser than any reachable target.
    if (e.kind() == ErrorKind::infeasible_perturbation) return 1.0;
    throw;
  }
}

}  // namespace

double union_density_p(double target, std::size_t participating) {
  if (!(target > 0.0 && target < 1.0) || participating == 0) {
    throw Error(ErrorKind::calibration, "target density must lie in (0, 1) with at least one tile");
  }
  return std::sqrt(-std::expm1(std::log1p(-target) / static_cast<double>(participating)));
}

double calibrate_p(double target, const SynthConfig& cfg) {
  constexpr double kTolerance = 0.01;
  const double p0 = union_density_p(target, cfg.participating_tiles());
  const double d0 = pre_noise_density(cfg, p0);
  if (std::abs(d0 - target) <= kTolerance) return p0;

  double lo = p0;
  double hi = p0;
  if (d0 < target) {
    for (int i = 0; i < 60 && pre_noise_density(cfg, hi) < target; ++i) {
      lo = hi;
      hi = std::min(1.0, hi * 1.5);
      if (hi == 1.0) break;
    }
  } else {
    for (int i = 0; i < 60 && pre_noise_density(cfg, lo) > target; ++i) {
      hi = lo;
      lo *= 0.5;
    }
  }
  for (int step = 0; step < 40; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double d = pre_noise_density(cfg, mid);
    if (std::abs(d - target) <= kTolerance) return mid;
    (d < target ? lo : hi) = mid;
  }
  throw Error(ErrorKind::calibration, "could not reach density " + std::to_string(target));
}

SyntheticInstance generate(const SynthConfig& cfg) {
  cfg.validate();
  SyntheticInstance out;
  out.bernoulli_p = cfg.bernoulli_p ? *cfg.bernoulli_p : calibrate_p(*cfg.target_density, cfg);
  auto set = make_tiles(cfg, out.bernoulli_p);
  auto bits = assemble(cfg, set);
  out.pre_noise_density = static_cast<double>(bits.count()) / (static_cast<double>(cfg.n_rows) * cfg.n_cols);
  add_noise(cfg, bits);
  out.data = SparseBinaryMatrix::from_bits(bits);
  out.tiles = std::move(set.tiles);
  out.labels = std::move(set.labels);
  return out;
}

}  // namespace patternset::datagen
