#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "patternset/datagen.hpp"
#include "patternset/error.hpp"
#include "patternset/select.hpp"
#include "support.hpp"

using namespace patternset;

namespace {

std::vector<Tile> pick(std::span<const Tile> tiles, const SelectionResult& r) {
  std::vector<Tile> out;
  for (std::size_t i : r.chosen) out.push_back(tiles[i]);
  return out;
}

std::vector<TileId> ids(std::span<const Tile> tiles, const SelectionResult& r) {
  std::vector<TileId> out;
  for (std::size_t i : r.chosen) out.push_back(tiles[i].id());
  return out;
}

SelectionParams params_for(Mode mode, std::size_t t_max = 200) {
  SelectionParams p;
  p.mode = mode;
  p.t_max = t_max;
  return p;
}

// Set system as a one-column matrix: element e is row e, set s is the tile
// (s's elements) x {0}.
std::vector<std::size_t> textbook_greedy(const std::vector<std::set<Index>>& sets, std::size_t k) {
  std::set<Index> covered;
  std::vector<bool> used(sets.size(), false);
  std::vector<std::size_t> order;
  while (order.size() < k) {
    std::size_t best = sets.size();
    std::size_t best_gain = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (used[s]) continue;
      std::size_t gain = 0;
      for (Index e : sets[s]) gain += covered.count(e) ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    if (best == sets.size()) break;
    used[best] = true;
    order.push_back(best);
    covered.insert(sets[best].begin(), sets[best].end());
  }
  return order;
}

}  // namespace

TEST_CASE("input validation") {
  SparseBinaryMatrix d(3, 3, {{0, 0}});
  const std::vector<Tile> none;
  for (auto algo : {Algorithm::hapsi, Algorithm::greedy, Algorithm::naive}) {
    try {
      run_selection(algo, d, none, params_for(Mode::exact));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_input);
    }
    const std::vector<Tile> bad{Tile(0, {0}, {0}), Tile(17, {0, 1}, {0})};
    try {
      run_selection(algo, d, bad, params_for(Mode::exact));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::domination_violation);
      CHECK(std::string(e.what()).find("17") != std::string::npos);
    }
    CHECK_NOTHROW(run_selection(algo, d, bad, params_for(Mode::inexact)));
  }
  auto p = params_for(Mode::exact);
  p.t_max = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.t_max = 1;
  p.m_candidates = 0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("algorithm names round trip") {
  for (auto algo : {Algorithm::hapsi, Algorithm::greedy, Algorithm::naive})
    CHECK(parse_algorithm(to_string(algo)) == algo);
  CHECK_THROWS_AS(parse_algorithm("annealing"), Error);
}

TEST_CASE("a single tile is chosen only if it helps") {
  SparseBinaryMatrix d(4, 4, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {3, 3}});
  const std::vector<Tile> good{Tile(0, {0, 1}, {0, 1})};
  for (auto algo : {Algorithm::hapsi, Algorithm::greedy}) {
    const auto r = run_selection(algo, d, good, params_for(Mode::exact));
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].error == 1);
    CHECK(r.trace[0].iteration == 1);
  }
  // covers one 1 and three 0s: no improvement over the empty cover
  const std::vector<Tile> bad{Tile(0, {2, 3}, {2, 3})};
  for (auto algo : {Algorithm::hapsi, Algorithm::greedy}) {
    const auto r = run_selection(algo, d, bad, params_for(Mode::inexact));
    CHECK(r.trace.empty());
    CHECK(r.final_error(d) == 5);
  }
}

TEST_CASE("a partition of D is selected completely") {
  std::vector<Tile> tiles{Tile(0, {0, 1}, {0, 1, 2}), Tile(1, {2}, {0, 1, 2, 3}), Tile(2, {0, 1}, {3}),
                          Tile(3, {3, 4}, {0}), Tile(4, {3, 4}, {2, 3})};
  const auto d = testing::cover_matrix(tiles, 5, 4);
  for (auto algo : {Algorithm::hapsi, Algorithm::greedy, Algorithm::naive}) {
    const auto r = run_selection(algo, d, tiles, params_for(Mode::exact, tiles.size()));
    CHECK(r.final_error(d) == 0);
    CHECK(r.chosen.size() == tiles.size());
  }
}

TEST_CASE("identical tiles are chosen once") {
  SparseBinaryMatrix d(3, 3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const std::vector<Tile> tiles{Tile(0, {0, 1}, {0, 1}), Tile(1, {0, 1}, {0, 1}), Tile(2, {0, 1}, {0, 1})};
  for (auto algo : {Algorithm::hapsi, Algorithm::greedy}) {
    const auto r = run_selection(algo, d, tiles, params_for(Mode::exact));
    CHECK(r.chosen.size() == 1);
    CHECK(r.final_error(d) == 0);
  }
}

TEST_CASE("naive takes both copies where greedy diversifies") {
  const std::vector<Tile> tiles{Tile(0, {0, 1, 2}, {0, 1, 2}), Tile(1, {0, 1, 2}, {0, 1, 2}), Tile(2, {4}, {4})};
  const auto d = testing::cover_matrix(tiles, 5, 5);
  const auto params = params_for(Mode::exact, 2);
  const auto n = naive(d, tiles, params);
  CHECK(ids(tiles, n) == std::vector<TileId>{0, 1});
  CHECK(n.final_error(d) == 1);
  const auto g = greedy(d, tiles, params);
  CHECK(ids(tiles, g) == std::vector<TileId>{0, 2});
  CHECK(g.final_error(d) == 0);
}

TEST_CASE("naive ranks negative-gain tiles last") {
  SparseBinaryMatrix d(6, 6, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {4, 4}, {5, 5}});
  const std::vector<Tile> tiles{Tile(0, {3, 4, 5}, {3, 4, 5}), Tile(1, {0, 1}, {0, 1}), Tile(2, {5}, {5})};
  const auto r = naive(d, tiles, params_for(Mode::inexact, 3));
  CHECK(ids(tiles, r) == std::vector<TileId>{1, 2, 0});
  // the last tile makes the error grow
  REQUIRE(r.trace.size() == 3);
  CHECK(r.trace[2].error > r.trace[1].error);
}

TEST_CASE("naive equals greedy on disjoint exact tiles") {
  std::vector<Tile> tiles;
  Index row = 0;
  for (Index t = 0; t < 6; ++t) {
    std::vector<Index> rows;
    for (Index i = 0; i <= t; ++i) rows.push_back(row++);
    tiles.emplace_back(t, rows, std::vector<Index>{0, 1, 2});
  }
  const auto d = testing::cover_matrix(tiles, row, 3);
  const auto params = params_for(Mode::exact, 4);
  CHECK(ids(tiles, naive(d, tiles, params)) == ids(tiles, greedy(d, tiles, params)));
}

TEST_CASE("greedy solves Max-k-Cover like the textbook greedy") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Index universe = 40;
    std::vector<std::set<Index>> sets(15);
    std::vector<Tile> tiles;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const auto elems = testing::random_subset(universe, 0.15 + 0.02 * static_cast<double>(rng() % 10), rng);
      sets[s] = {elems.begin(), elems.end()};
      tiles.emplace_back(static_cast<TileId>(s), elems, std::vector<Index>{0});
    }
    const auto d = testing::cover_matrix(tiles, universe, 1);
    const std::size_t k = 1 + rng() % 6;
    const auto r = greedy(d, tiles, params_for(Mode::exact, k));
    CHECK(r.chosen == textbook_greedy(sets, k));
  }
}

TEST_CASE("trace errors match recomputation and strictly decrease") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = testing::random_matrix(30, 30, 0.3, rng);
    const auto tiles = testing::random_tiles(40, 30, 30, 0.25, rng);
    for (auto algo : {Algorithm::hapsi, Algorithm::greedy, Algorithm::naive}) {
      const auto r = run_selection(algo, d, tiles, params_for(Mode::inexact, 15));
      std::vector<Tile> so_far;
      for (std::size_t i = 0; i < r.trace.size(); ++i) {
        so_far.push_back(tiles[r.chosen[i]]);
        CHECK(r.trace[i].iteration == i + 1);
        CHECK(r.trace[i].tile_id == tiles[r.chosen[i]].id());
        CHECK(r.trace[i].error == testing::brute_error(d, so_far));
        CHECK(r.trace[i].rel_error == doctest::Approx(r.trace[i].error / 900.0));
        if (algo != Algorithm::naive && i > 0) CHECK(r.trace[i].error < r.trace[i - 1].error);
      }
      if (algo != Algorithm::naive && !r.trace.empty()) CHECK(r.trace[0].error < d.nnz());
    }
  }
}

TEST_CASE("exact mode never covers a zero and greedy beats naive") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    datagen::SynthConfig cfg;
    cfg.n_rows = 60;
    cfg.n_cols = 70;
    cfg.n_base_tiles = 10;
    cfg.n_copies = 3;
    cfg.bernoulli_p = 0.15;
    cfg.seed = seed;
    const auto inst = datagen::generate(datagen::exact_preset(cfg));
    const auto params = params_for(Mode::exact, 20);
    std::uint64_t naive_err = 0, greedy_err = 0;
    for (auto algo : {Algorithm::hapsi, Algorithm::greedy, Algorithm::naive}) {
      const auto r = run_selection(algo, inst.data, inst.tiles, params);
      for (const auto& rec : r.trace) CHECK(rec.covered_zeros == 0);
      if (algo == Algorithm::naive) naive_err = r.final_error(inst.data);
      if (algo == Algorithm::greedy) greedy_err = r.final_error(inst.data);
    }
    CHECK(greedy_err <= naive_err);
  }
}

TEST_CASE("unbounded sketches make hapsi follow greedy") {
  std::mt19937_64 rng(31);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    // distinct tile sizes and few overlaps keep greedy's maximizers unique
    const auto tiles = testing::random_tiles(12, 25, 25, 0.3, rng);
    const auto d = testing::cover_matrix(tiles, 25, 25);
    auto params = params_for(Mode::exact, 12);
    params.sketch.k = 25 * 25;
    params.sketch.n_reps = 1;
    params.m_candidates = tiles.size();
    const auto g = greedy(d, tiles, params);

    // skip instances with tied greedy gains, where tie-breaking may differ
    bool unique = true;
    CoverState cover(d);
    std::vector<bool> used(tiles.size(), false);
    for (std::size_t idx : g.chosen) {
      std::int64_t best = 0;
      int count = 0;
      for (std::size_t t = 0; t < tiles.size(); ++t) {
        if (used[t]) continue;
        const auto gain = cover.gain(tiles[t]);
        if (gain > best) {
          best = gain;
          count = 1;
        } else if (gain == best) {
          ++count;
        }
      }
      unique = unique && count == 1;
      used[idx] = true;
      cover.apply(tiles[idx]);
    }
    if (!unique) continue;
    ++compared;
    const auto h = hapsi(d, tiles, params);
    CHECK(h.chosen == g.chosen);
  }
  CHECK(compared >= 10);
}

TEST_CASE("results do not depend on thread count or evaluator") {
  datagen::SynthConfig cfg;
  cfg.n_rows = 80;
  cfg.n_cols = 90;
  cfg.n_base_tiles = 12;
  cfg.n_copies = 3;
  cfg.bernoulli_p = 0.2;
  cfg.seed = 5;
  const auto inst = datagen::generate(cfg);
  for (auto algo : {Algorithm::hapsi, Algorithm::greedy, Algorithm::naive}) {
    auto params = params_for(Mode::inexact, 30);
    const auto base = run_selection(algo, inst.data, inst.tiles, params);
    for (std::size_t threads : {2U, 8U}) {
      params.threads = threads;
      params.evaluator = threads == 2 ? Evaluator::tile_local : Evaluator::full_scan;
      const auto other = run_selection(algo, inst.data, inst.tiles, params);
      CHECK(other.chosen == base.chosen);
      REQUIRE(other.trace.size() == base.trace.size());
      for (std::size_t i = 0; i < base.trace.size(); ++i) CHECK(other.trace[i].error == base.trace[i].error);
    }
  }
}

TEST_CASE("strict pseudocode never scans past a failing candidate") {
  datagen::SynthConfig cfg;
  cfg.n_rows = 80;
  cfg.n_cols = 90;
  cfg.n_base_tiles = 12;
  cfg.n_copies = 3;
  cfg.bernoulli_p = 0.2;
  cfg.seed = 9;
  const auto inst = datagen::generate(cfg);
  auto params = params_for(Mode::inexact, 40);
  const auto loose = hapsi(inst.data, inst.tiles, params);
  params.strict_pseudocode = true;
  const auto strict = hapsi(inst.data, inst.tiles, params);
  CHECK(strict.chosen.size() <= loose.chosen.size());
  // both accept the same prefix while the top candidate keeps improving
  CHECK(std::equal(strict.chosen.begin(), strict.chosen.end(), loose.chosen.begin()));
}

TEST_CASE("hapsi is close to greedy on a small synthetic instance") {
  // 1000x1200 with 100 base tiles, shrunk by 20 along every axis
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    datagen::SynthConfig cfg;
    cfg.n_rows = 50;
    cfg.n_cols = 60;
    cfg.n_base_tiles = 5;
    cfg.target_density = 0.3;
    cfg.seed = seed;
    const auto inst = datagen::generate(cfg);
    const auto params = params_for(Mode::inexact);
    const auto h = hapsi(inst.data, inst.tiles, params);
    const auto g = greedy(inst.data, inst.tiles, params);
    CHECK(relative_error(h.final_error(inst.data), inst.data) <=
          relative_error(g.final_error(inst.data), inst.data) + 0.02);
    CHECK(pick(inst.tiles, h).size() == h.trace.size());
  }
}
