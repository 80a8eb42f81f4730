#pragma once

// Synthetic benchmark instances: random base tiles, perturbed copies that
// overlap them, an OR-assembled data matrix, and uniform bit-flip noise.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "patternset/matrix.hpp"

namespace patternset::datagen {

enum class Assembly { base_only, all_tiles };

const char* to_string(Assembly assembly);
Assembly parse_assembly(const std::string& name);

struct SynthConfig {
  Index n_rows = 1000;
  Index n_cols = 1200;
  std::size_t n_base_tiles = 100;
  std::size_t n_copies = 5;
  // Exactly one of the two must be set.
  std::optional<double> bernoulli_p;
  std::optional<double> target_density;
  double perturb_fraction = 0.1;
  double noise_fraction = 0.1;
  Assembly assemble_from = Assembly::all_tiles;
  std::uint64_t seed = 0;

  void validate() const;
  // Tiles OR-ed into the data matrix.
  std::size_t participating_tiles() const;
};

// Tiles dominated by the data: assemble from every tile, no noise.
SynthConfig exact_preset(SynthConfig cfg);

struct TileLabel {
  std::size_t base = 0;
  std::size_t copy = 0;  // 0 for the base tile itself

  bool is_base() const { return copy == 0; }
  std::string to_string() const;
};

struct SyntheticInstance {
  SparseBinaryMatrix data;
  std::vector<Tile> tiles;  // base tile i has id i*(n_copies+1), its copies follow
  std::vector<TileLabel> labels;
  double bernoulli_p = 0.0;
  double pre_noise_density = 0.0;
};

// Throws Error(infeasible_perturbation) when a vector has fewer free
// positions than 1s to move, Error(calibration) when a target density cannot
// be reached.
SyntheticInstance generate(const SynthConfig& cfg);

// p with 1 - (1 - p^2)^T = target, i.e. the Bernoulli parameter for which T
// independent tiles reach the target density.
double union_density_p(double target, std::size_t participating);

// union_density_p, refined by bisection on the density of generated matrices
// (cfg's dimensions and seed) until within 0.01 of the target.
double calibrate_p(double target, const SynthConfig& cfg);

}  // namespace patternset::datagen
