#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "patternset/adapters.hpp"
#include "patternset/error.hpp"
#include "patternset/io.hpp"
#include "patternset/kernels.hpp"
#include "patternset/parallel.hpp"

namespace patternset::cli {

SelectionParams RunConfig::selection_params() const {
  SelectionParams p;
  p.t_max = t_max;
  p.m_candidates = m_candidates;
  p.mode = mode;
  p.sketch.k = k;
  p.sketch.n_reps = n_reps;
  p.sketch.seed = seed;
  p.evaluator = evaluator;
  p.strict_pseudocode = strict_pseudocode;
  p.threads = threads;
  return p;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["algorithm"] = patternset::to_string(algorithm);
  j["mode"] = patternset::to_string(mode);
  j["matrix"] = matrix_path;
  j["tiles"] = tiles_path;
  j["output"] = output;
  j["k"] = k;
  j["n_reps"] = n_reps;
  j["m_candidates"] = m_candidates;
  j["t_max"] = t_max;
  j["seed"] = seed;
  j["strict_pseudocode"] = strict_pseudocode;
  j["evaluator"] = patternset::to_string(evaluator);
  j["threads"] = threads;
  j["timing"] = timing;
  return j;
}

namespace {

struct GenerateOptions {
  datagen::SynthConfig synth;
  double p = 0.0;
  double density = 0.0;
  std::string assemble = "all_tiles";
  bool exact = false;
  std::string matrix_out;
  std::string tiles_out;

  datagen::SynthConfig resolve() const {
    auto cfg = synth;
    cfg.assemble_from = datagen::parse_assembly(assemble);
    if (p > 0.0) cfg.bernoulli_p = p;
    if (density > 0.0) cfg.target_density = density;
    if (p <= 0.0 && density <= 0.0) cfg.target_density = 0.3;
    return exact ? datagen::exact_preset(cfg) : cfg;
  }
};

struct BenchOptions {
  std::string sweep = "tiles";
  std::vector<std::size_t> values;
  std::vector<std::string> algorithms{"hapsi", "greedy", "naive"};
};

struct ConvertOptions {
  std::string itemsets;
  std::string query_pairs;
  Index left_cols = 0;
  Index right_cols = 0;
  Index rows = 0;
  std::string matrix_out;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return in;
}

void add_selection_flags(CLI::App& app, RunConfig& cfg, std::string& mode, std::string& evaluator) {
  app.add_option("--mode", mode, "exact | inexact")->check(CLI::IsMember({"exact", "inexact"}));
  app.add_option("--k", cfg.k, "bottom-k sketch size");
  app.add_option("--reps", cfg.n_reps, "hash repetitions |H|");
  app.add_option("--m", cfg.m_candidates, "candidates verified per iteration");
  app.add_option("--t-max", cfg.t_max, "maximum number of tiles returned");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_flag("--strict-pseudocode", cfg.strict_pseudocode, "stop at the first non-improving candidate");
  app.add_option("--evaluator", evaluator, "full_scan | tile_local")
      ->check(CLI::IsMember({"full_scan", "tile_local"}));
  app.add_option("--threads", cfg.threads, "worker threads (default: PATTERNSET_THREADS or 1)");
}

void resolve_selection(RunConfig& cfg, const std::string& algorithm, const std::string& mode,
                       const std::string& evaluator, bool threads_given) {
  if (!algorithm.empty()) cfg.algorithm = parse_algorithm(algorithm);
  cfg.mode = mode == "inexact" ? Mode::inexact : Mode::exact;
  cfg.evaluator = evaluator == "tile_local" ? Evaluator::tile_local : Evaluator::full_scan;
  cfg.threads = resolve_thread_count(threads_given ? cfg.threads : 0);
}

int run_generate(const GenerateOptions& opt, std::ostream& out) {
  const auto synth = opt.resolve();
  auto inst = datagen::generate(synth);
  auto header = io::to_json(synth);
  header["calibrated_p"] = inst.bernoulli_p;
  header["pre_noise_density"] = inst.pre_noise_density;
  const std::string comment = header.dump();
  {
    auto f = open_output(opt.matrix_out);
    io::write_matrix(f, inst.data, comment);
  }
  std::vector<std::string> labels;
  labels.reserve(inst.labels.size());
  for (const auto& l : inst.labels) labels.push_back(l.to_string());
  {
    auto f = open_output(opt.tiles_out);
    io::write_tiles(f, inst.tiles, labels, comment);
  }
  out << "wrote " << inst.data.n_rows() << "x" << inst.data.n_cols() << " matrix (" << inst.data.nnz()
      << " ones, density " << inst.data.density() << ") and " << inst.tiles.size() << " tiles\n";
  return kOk;
}

int run_select(const RunConfig& cfg, const std::string& sketch_dump, std::ostream& out) {
  const auto data = io::load_matrix(cfg.matrix_path);
  const auto tiles = io::load_tiles(cfg.tiles_path);
  const auto params = cfg.selection_params();

  const auto start = std::chrono::steady_clock::now();
  const auto result = run_selection(cfg.algorithm, data, tiles, params);
  const double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(cfg.output);
  const std::filesystem::path dir(cfg.output);
  {
    auto f = open_output((dir / "trace.csv").string());
    io::write_trace_csv(f, result.trace, cfg.timing);
  }
  std::vector<Tile> chosen;
  for (std::size_t i : result.chosen) chosen.push_back(tiles[i]);
  {
    auto f = open_output((dir / "chosen_tiles.jsonl").string());
    io::write_tiles(f, chosen);
  }
  const auto final_error = result.final_error(data);
  nlohmann::ordered_json summary;
  summary["algorithm"] = to_string(cfg.algorithm);
  summary["mode"] = to_string(cfg.mode);
  summary["final_error"] = final_error;
  summary["final_rel_error"] = relative_error(final_error, data);
  summary["tile_count"] = result.chosen.size();
  summary["wall_time_ms"] = cfg.timing ? wall_ms : 0.0;
  summary["simd_backend"] = kernels::to_string(kernels::active_backend());
  summary["config"] = cfg.to_json();
  {
    auto f = open_output((dir / "summary.json").string());
    f << summary.dump(2) << '\n';
  }
  if (!sketch_dump.empty()) {
    hashing::SketchConfig sc = params.sketch;
    const auto family = hashing::HashFamily::draw(sc);
    const auto sketches = hashing::make_sketches(tiles, family, sc.k, data, cfg.mode);
    auto f = open_output(sketch_dump);
    io::write_sketches(f, sketches, family.modulus());
  }
  out << to_string(cfg.algorithm) << ": " << result.chosen.size() << " tiles, error " << final_error << " ("
      << relative_error(final_error, data) << ")\n";
  return kOk;
}

int run_bench(const RunConfig& cfg, const GenerateOptions& gen, const BenchOptions& bench, std::ostream& out) {
  if (bench.values.empty()) throw Error(ErrorKind::invalid_input, "bench needs --values");
  if (bench.sweep != "tiles" && bench.sweep != "rows") {
    throw Error(ErrorKind::invalid_input, "--sweep must be 'tiles' or 'rows'");
  }
  std::vector<Algorithm> algorithms;
  for (const auto& name : bench.algorithms) algorithms.push_back(parse_algorithm(name));

  std::ofstream file;
  if (!cfg.output.empty()) file = open_output(cfg.output);
  std::ostream& csv = cfg.output.empty() ? out : file;
  csv << "algorithm,sweep,value,n_rows,n_cols,n_tiles,final_error,rel_error,best_rel_error,n_chosen,wall_ms\n";

  const auto params = cfg.selection_params();
  for (std::size_t value : bench.values) {
    auto synth = gen.resolve();
    if (bench.sweep == "tiles") {
      synth.n_base_tiles = std::max<std::size_t>(1, value / (synth.n_copies + 1));
    } else {
      synth.n_rows = static_cast<Index>(value);
      synth.n_cols = static_cast<Index>(value + 200);
    }
    const auto inst = datagen::generate(synth);
    for (Algorithm algorithm : algorithms) {
      const auto start = std::chrono::steady_clock::now();
      const auto result = run_selection(algorithm, inst.data, inst.tiles, params);
      const double wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      const auto final_error = result.final_error(inst.data);
      double best = relative_error(inst.data.nnz(), inst.data);
      for (const auto& r : result.trace) best = std::min(best, r.rel_error);
      char buf[320];
      std::snprintf(buf, sizeof buf, "%s,%s,%zu,%u,%u,%zu,%llu,%.10g,%.10g,%zu,%.3f\n", to_string(algorithm),
                    bench.sweep.c_str(), value, inst.data.n_rows(), inst.data.n_cols(), inst.tiles.size(),
                    static_cast<unsigned long long>(final_error), relative_error(final_error, inst.data), best,
                    result.chosen.size(), cfg.timing ? wall_ms : 0.0);
      csv << buf;
    }
  }
  return kOk;
}

int run_convert(const ConvertOptions& opt, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const adapters::WarningSink warn = [&err](const std::string& msg) { err << "warning: " << msg << '\n'; };
  if (opt.itemsets.empty() == opt.query_pairs.empty()) {
    throw Error(ErrorKind::invalid_input, "give exactly one of --itemsets and --query-pairs");
  }
  std::vector<Tile> tiles;
  if (!opt.itemsets.empty()) {
    if (cfg.matrix_path.empty()) throw Error(ErrorKind::invalid_input, "--itemsets needs --matrix");
    const auto data = io::load_matrix(cfg.matrix_path);
    auto in = open_input(opt.itemsets);
    const auto itemsets = io::read_itemsets(in);
    tiles = adapters::tiles_from_itemsets(itemsets, data, warn);
  } else {
    auto in = open_input(opt.query_pairs);
    const auto pairs = io::read_query_pairs(in, opt.left_cols);
    tiles = adapters::tiles_from_query_pairs(pairs, warn);
    if (!opt.matrix_out.empty()) {
      if (opt.rows == 0) throw Error(ErrorKind::invalid_input, "--matrix-out needs --rows");
      const auto data = adapters::union_matrix(tiles, opt.rows, opt.left_cols + opt.right_cols);
      auto f = open_output(opt.matrix_out);
      io::write_matrix(f, data, "union of converted query-pair tiles");
    }
  }
  auto f = open_output(cfg.tiles_path);
  io::write_tiles(f, tiles);
  out << "wrote " << tiles.size() << " tiles\n";
  return kOk;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::parse:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::io: return kParseFailure;
    case ErrorKind::domination_violation: return kDominationViolation;
    case ErrorKind::invalid_input:
    case ErrorKind::infeasible_perturbation:
    case ErrorKind::calibration: return kInfeasibleParams;
  }
  return kInfeasibleParams;
}

void add_generator_flags(CLI::App& app, GenerateOptions& gen) {
  app.add_option("--rows", gen.synth.n_rows, "matrix rows");
  app.add_option("--cols", gen.synth.n_cols, "matrix columns");
  app.add_option("--base-tiles", gen.synth.n_base_tiles, "number of base tiles");
  app.add_option("--copies", gen.synth.n_copies, "perturbed copies per base tile");
  auto* p = app.add_option("--p", gen.p, "Bernoulli parameter of tile vectors");
  app.add_option("--density", gen.density, "target pre-noise data density (default 0.3)")->excludes(p);
  app.add_option("--perturb", gen.synth.perturb_fraction, "fraction d of 1s moved in each copy");
  app.add_option("--noise", gen.synth.noise_fraction, "fraction of cells flipped");
  app.add_option("--assemble", gen.assemble, "base_only | all_tiles")
      ->check(CLI::IsMember({"base_only", "all_tiles"}));
  app.add_flag("--exact-preset", gen.exact, "all_tiles, no noise: tiles dominated by the data");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern set selection with bottom-k hashing", "patternset"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string algorithm;
  std::string mode = "exact";
  std::string evaluator = "full_scan";
  bool print_config = false;
  bool no_timing = false;
  std::string sketch_dump;
  GenerateOptions gen;
  BenchOptions bench;
  ConvertOptions conv;

  auto* generate = app.add_subcommand("generate", "write a synthetic matrix and tile file");
  add_generator_flags(*generate, gen);
  generate->add_option("--seed", gen.synth.seed, "generator seed");
  generate->add_option("--matrix-out", gen.matrix_out, "matrix output path")->required();
  generate->add_option("--tiles-out", gen.tiles_out, "tile output path")->required();

  auto* select = app.add_subcommand("select", "select a tile set");
  select->add_option("--algorithm", algorithm, "hapsi | greedy | naive")
      ->check(CLI::IsMember({"hapsi", "greedy", "naive"}));
  add_selection_flags(*select, cfg, mode, evaluator);
  select->add_option("--matrix", cfg.matrix_path, "data matrix file");
  select->add_option("--tiles", cfg.tiles_path, "candidate tiles (JSON lines)");
  select->add_option("--out-dir", cfg.output, "directory for trace.csv, summary.json, chosen_tiles.jsonl");
  select->add_flag("--no-timing", no_timing, "write elapsed times as 0 (byte-stable output)");
  select->add_flag("--print-config", print_config, "print the resolved configuration and exit");
  select->add_option("--dump-sketches", sketch_dump, "also write the tile sketches to this file");

  auto* bench_cmd = app.add_subcommand("bench", "compare algorithms over a sweep of synthetic instances");
  add_selection_flags(*bench_cmd, cfg, mode, evaluator);
  bench_cmd->add_option("--data-seed", gen.synth.seed, "generator seed");
  add_generator_flags(*bench_cmd, gen);
  bench_cmd->add_option("--sweep", bench.sweep, "tiles | rows");
  bench_cmd->add_option("--values", bench.values, "sweep points (tile counts, or row counts with cols = rows + 200)")
      ->delimiter(',');
  bench_cmd->add_option("--algorithms", bench.algorithms, "comma-separated algorithms")->delimiter(',');
  bench_cmd->add_option("--out", cfg.output, "CSV output path (default stdout)");
  bench_cmd->add_flag("--no-timing", no_timing, "write wall times as 0");
  bench_cmd->add_flag("--print-config", print_config, "print the resolved configuration and exit");

  auto* convert = app.add_subcommand("convert", "turn itemsets or query-pair supports into tiles");
  convert->add_option("--itemsets", conv.itemsets, "itemset file, one itemset per line");
  convert->add_option("--matrix", cfg.matrix_path, "transaction matrix for --itemsets");
  convert->add_option("--query-pairs", conv.query_pairs, "query-pair supports (JSON lines)");
  convert->add_option("--left-cols", conv.left_cols, "columns of the left data view");
  convert->add_option("--right-cols", conv.right_cols, "columns of the right data view");
  convert->add_option("--rows", conv.rows, "entities, for --matrix-out");
  convert->add_option("--matrix-out", conv.matrix_out, "write the union-of-patterns matrix here");
  convert->add_option("--tiles-out", cfg.tiles_path, "tile output path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  }

  try {
    cfg.timing = !no_timing;
    if (generate->parsed()) {
      cfg.command = "generate";
      return run_generate(gen, out);
    }
    if (convert->parsed()) {
      cfg.command = "convert";
      return run_convert(conv, cfg, out, err);
    }
    CLI::App* cmd = select->parsed() ? select : bench_cmd;
    cfg.command = cmd->get_name();
    resolve_selection(cfg, algorithm, mode, evaluator, cmd->count("--threads") > 0);
    if (print_config) {
      auto j = cfg.to_json();
      if (bench_cmd->parsed()) {
        j["bench"] = {{"sweep", bench.sweep}, {"values", bench.values}, {"algorithms", bench.algorithms}};
        j["data"] = io::to_json(gen.resolve());
      }
      out << j.dump(2) << '\n';
      return kOk;
    }
    cfg.selection_params().validate();
    if (select->parsed()) {
      if (cfg.matrix_path.empty() || cfg.tiles_path.empty() || cfg.output.empty()) {
        err << "error: select needs --matrix, --tiles and --out-dir\n";
        return kParseFailure;
      }
      return run_select(cfg, sketch_dump, out);
    }
    return run_bench(cfg, gen, bench, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasibleParams;
  }
}

}  // namespace patternset::cli
