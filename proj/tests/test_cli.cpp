#include <algorithm>
#include <fstream>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "patternset/io.hpp"
#include "support.hpp"

using namespace patternset;
using testing::run_cli;

namespace {

// Small generated instance shared by the tests below.
struct Instance {
  std::filesystem::path dir;
  std::string matrix;
  std::string tiles;
};

Instance make_instance(const std::string& name, bool exact, std::uint64_t seed = 3) {
  Instance inst;
  inst.dir = testing::scratch_dir(name);
  inst.matrix = (inst.dir / "m.txt").string();
  inst.tiles = (inst.dir / "t.jsonl").string();
  std::vector<std::string> args{"generate", "--rows", "60", "--cols", "70", "--base-tiles", "8",
                                "--copies", "3", "--p", "0.2", "--seed", std::to_string(seed),
                                "--matrix-out", inst.matrix, "--tiles-out", inst.tiles};
  if (exact) args.push_back("--exact-preset");
  const auto r = run_cli(args);
  REQUIRE(r.code == 0);
  return inst;
}

}  // namespace

TEST_CASE("generate writes a commented matrix and labelled tiles") {
  const auto inst = make_instance("gen", false);
  const auto text = testing::slurp(inst.matrix);
  REQUIRE(text.rfind("# {", 0) == 0);
  const auto header = nlohmann::json::parse(text.substr(2, text.find('\n') - 2));
  CHECK(header["n_rows"] == 60);
  CHECK(header["n_copies"] == 3);
  CHECK(header["bernoulli_p"] == 0.2);
  CHECK(header.contains("pre_noise_density"));
  CHECK(io::load_tiles(inst.tiles).size() == 32);
  CHECK(testing::slurp(inst.tiles).find("copy-of-0") != std::string::npos);
  CHECK(io::load_matrix(inst.matrix).n_cols() == 70);
}

TEST_CASE("select writes trace, chosen tiles and summary") {
  const auto inst = make_instance("select", false);
  const auto out = inst.dir / "run";
  const auto r = run_cli({"select", "--algorithm", "greedy", "--mode", "inexact", "--matrix", inst.matrix,
                          "--tiles", inst.tiles, "--out-dir", out.string(), "--t-max", "5"});
  REQUIRE(r.code == 0);
  const auto summary = nlohmann::json::parse(testing::slurp(out / "summary.json"));
  CHECK(summary["algorithm"] == "greedy");
  CHECK(summary["config"]["t_max"] == 5);

  // the trace replays against a from-scratch error computation
  std::ifstream trace_in(out / "trace.csv");
  const auto trace = io::read_trace_csv(trace_in);
  const auto chosen = io::load_tiles((out / "chosen_tiles.jsonl").string());
  const auto data = io::load_matrix(inst.matrix);
  REQUIRE(trace.size() == chosen.size());
  CHECK(summary["final_error"] == trace.back().error);
  std::vector<Tile> so_far;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    so_far.push_back(chosen[i]);
    CHECK(trace[i].tile_id == chosen[i].id());
    CHECK(trace[i].error == testing::brute_error(data, so_far));
  }
}

TEST_CASE("exit codes") {
  const auto noisy = make_instance("codes", false);
  const auto dir = noisy.dir.string();
  SUBCASE("unknown flag is a parse failure") { CHECK(run_cli({"select", "--bogus"}).code == 2); }
  SUBCASE("no subcommand is a parse failure") { CHECK(run_cli({}).code == 2); }
  SUBCASE("malformed matrix is a parse failure") {
    const auto bad = noisy.dir / "bad.txt";
    std::ofstream(bad) << "2 2 1\n0 9\n";
    const auto r = run_cli({"select", "--matrix", bad.string(), "--tiles", noisy.tiles, "--out-dir", dir});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
  }
  SUBCASE("missing file is a parse failure") {
    CHECK(run_cli({"select", "--matrix", dir + "/none.txt", "--tiles", noisy.tiles, "--out-dir", dir}).code == 2);
  }
  SUBCASE("non-dominated tiles in exact mode") {
    const auto r = run_cli({"select", "--mode", "exact", "--matrix", noisy.matrix, "--tiles", noisy.tiles,
                            "--out-dir", dir});
    CHECK(r.code == 3);
    CHECK(r.err.find("tile") != std::string::npos);
  }
  SUBCASE("infeasible parameters") {
    CHECK(run_cli({"select", "--k", "0", "--matrix", noisy.matrix, "--tiles", noisy.tiles, "--out-dir", dir})
              .code == 4);
    CHECK(run_cli({"select", "--t-max", "0", "--matrix", noisy.matrix, "--tiles", noisy.tiles, "--out-dir", dir})
              .code == 4);
    CHECK(run_cli({"generate", "--rows", "10", "--cols", "10", "--p", "1.0", "--perturb", "0.5", "--matrix-out",
                   dir + "/x.txt", "--tiles-out", dir + "/y.jsonl"})
              .code == 4);
  }
}

TEST_CASE("print-config shows the documented defaults") {
  const auto r = run_cli({"select", "--print-config"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["k"] == 30);
  CHECK(j["n_reps"] == 10);
  CHECK(j["m_candidates"] == 30);
  CHECK(j["t_max"] == 200);
  CHECK(j["algorithm"] == "hapsi");
  CHECK(j["mode"] == "exact");
  CHECK(j["evaluator"] == "full_scan");
  CHECK(j["strict_pseudocode"] == false);
}

TEST_CASE("untimed traces do not depend on the thread count") {
  const auto inst = make_instance("threads", true);
  for (const std::string algo : {"hapsi", "greedy", "naive"}) {
    std::string traces[2];
    int slot = 0;
    for (const std::string threads : {"1", "8"}) {
      const auto out = inst.dir / (algo + threads);
      const auto r = run_cli({"select", "--algorithm", algo, "--matrix", inst.matrix, "--tiles", inst.tiles,
                              "--out-dir", out.string(), "--threads", threads, "--no-timing"});
      REQUIRE(r.code == 0);
      traces[slot++] = testing::slurp(out / "trace.csv");
    }
    CHECK(traces[0] == traces[1]);
  }
}

TEST_CASE("sketch dump lists every tile and repetition") {
  const auto inst = make_instance("sketch", true);
  const auto dump = inst.dir / "sketches.txt";
  const auto r = run_cli({"select", "--matrix", inst.matrix, "--tiles", inst.tiles, "--out-dir",
                          (inst.dir / "o").string(), "--reps", "3", "--k", "4", "--dump-sketches", dump.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(dump);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("modulus ", 0) == 0);
  std::size_t tile_lines = 0, rep_lines = 0;
  while (std::getline(in, line)) (line.rfind("tile ", 0) == 0 ? tile_lines : rep_lines) += 1;
  CHECK(tile_lines == 32);
  CHECK(rep_lines == 32 * 3);
}

TEST_CASE("bench writes one row per algorithm and value") {
  const auto dir = testing::scratch_dir("bench");
  const auto csv = dir / "bench.csv";
  const auto r = run_cli({"bench", "--rows", "60", "--cols", "70", "--copies", "3", "--p", "0.2", "--exact-preset",
                          "--sweep", "tiles", "--values", "16,32", "--t-max", "5", "--algorithms", "hapsi,greedy",
                          "--out", csv.string(), "--no-timing"});
  REQUIRE(r.code == 0);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "algorithm,sweep,value,n_rows,n_cols,n_tiles,final_error,rel_error,best_rel_error,n_chosen,wall_ms");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("convert itemsets and query pairs") {
  const auto dir = testing::scratch_dir("convert");
  const auto matrix = dir / "d.txt";
  std::ofstream(matrix) << "3 3 4\n0 0\n0 1\n1 1\n2 2\n";
  std::ofstream(dir / "items.txt") << "1\n0 1\n0 2\n";
  auto r = run_cli({"convert", "--itemsets", (dir / "items.txt").string(), "--matrix", matrix.string(),
                    "--tiles-out", (dir / "it.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  const auto tiles = io::load_tiles((dir / "it.jsonl").string());
  REQUIRE(tiles.size() == 2);
  CHECK(tiles[1].id() == 1);

  std::ofstream(dir / "pairs.jsonl") << "{\"uL\":[0,1,2],\"uR\":[1,2],\"vL\":[0],\"vR\":[1]}\n";
  r = run_cli({"convert", "--query-pairs", (dir / "pairs.jsonl").string(), "--left-cols", "2", "--right-cols", "2",
               "--rows", "3", "--matrix-out", (dir / "qd.txt").string(), "--tiles-out", (dir / "q.jsonl").string()});
  REQUIRE(r.code == 0);
  const auto q = io::load_tiles((dir / "q.jsonl").string());
  REQUIRE(q.size() == 1);
  CHECK(std::ranges::equal(q[0].cols(), std::vector<Index>{0, 3}));
  CHECK(io::load_matrix((dir / "qd.txt").string()).nnz() == 4);
}
