#include "patternset/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "patternset/error.hpp"

namespace patternset::io {
namespace {

bool is_skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

// Reads the next non-comment line; returns false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_skippable(line)) return true;
  }
  return false;
}

std::vector<std::uint64_t> parse_integers(const std::string& line, std::size_t line_no) {
  std::vector<std::uint64_t> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    std::uint64_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      throw ParseError(line_no, "expected non-negative integers, got '" + line + "'");
    }
    out.push_back(value);
    p = next;
  }
  return out;
}

Index to_index(std::uint64_t v, std::size_t line_no) {
  if (v > 0xFFFFFFFFull) throw ParseError(line_no, "index " + std::to_string(v) + " too large");
  return static_cast<Index>(v);
}

std::vector<Index> index_array(const nlohmann::json& obj, const char* key, std::size_t line_no) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    throw ParseError(line_no, std::string("missing array '") + key + "'");
  }
  std::vector<Index> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ParseError(line_no, std::string("'") + key + "' must hold non-negative integers");
    }
    out.push_back(to_index(v.get<std::uint64_t>(), line_no));
  }
  return out;
}

nlohmann::json parse_json_line(const std::string& line, std::size_t line_no) {
  try {
    auto obj = nlohmann::json::parse(line);
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
    return obj;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, e.what());
  }
}

void write_comment(std::ostream& out, const std::string& comment) {
  if (comment.empty()) return;
  std::istringstream lines(comment);
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
}

}  // namespace

SparseBinaryMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError(line_no, "missing 'm n nnz' header");
  const auto header = parse_integers(line, line_no);
  if (header.size() != 3) throw ParseError(line_no, "header must be 'm n nnz'");
  const Index m = to_index(header[0], line_no);
  const Index n = to_index(header[1], line_no);
  const std::uint64_t nnz = header[2];
  if (nnz > std::uint64_t{m} * n) throw ParseError(line_no, "nnz exceeds m*n");

  std::vector<Cell> ones;
  ones.reserve(nnz);
  BitMatrix seen(m, n);
  while (ones.size() < nnz) {
    if (!next_line(in, line, line_no)) {
      throw ParseError(line_no, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(ones.size()));
    }
    const auto ij = parse_integers(line, line_no);
    if (ij.size() != 2) throw ParseError(line_no, "entry must be 'i j'");
    if (ij[0] >= m || ij[1] >= n) throw ParseError(line_no, "entry outside the matrix");
    const Cell c{static_cast<Index>(ij[0]), static_cast<Index>(ij[1])};
    if (seen.test(c.row, c.col)) throw ParseError(line_no, "duplicate entry");
    seen.set(c.row, c.col);
    ones.push_back(c);
  }
  if (next_line(in, line, line_no)) throw ParseError(line_no, "more entries than nnz");
  return SparseBinaryMatrix(m, n, std::move(ones));
}

void write_matrix(std::ostream& out, const SparseBinaryMatrix& data, const std::string& comment) {
  write_comment(out, comment);
  out << data.n_rows() << ' ' << data.n_cols() << ' ' << data.nnz() << '\n';
  for (Index i = 0; i < data.n_rows(); ++i) {
    for (Index j : data.row_cols(i)) out << i << ' ' << j << '\n';
  }
}

std::vector<Tile> read_tiles(std::istream& in) {
  std::vector<Tile> tiles;
  std::unordered_set<TileId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    const auto obj = parse_json_line(line, line_no);
    if (!obj.contains("id") || !obj.at("id").is_number_integer() || obj.at("id").get<std::int64_t>() < 0) {
      throw ParseError(line_no, "missing non-negative integer 'id'");
    }
    const auto id = static_cast<TileId>(to_index(obj.at("id").get<std::uint64_t>(), line_no));
    if (!ids.insert(id).second) throw ParseError(line_no, "duplicate tile id " + std::to_string(id));
    auto rows = index_array(obj, "rows", line_no);
    auto cols = index_array(obj, "cols", line_no);
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    try {
      tiles.emplace_back(id, std::move(rows), std::move(cols));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return tiles;
}

void write_tiles(std::ostream& out, std::span<const Tile> tiles, std::span<const std::string> labels,
                 const std::string& comment) {
  if (!labels.empty() && labels.size() != tiles.size()) {
    throw Error(ErrorKind::invalid_input, "tile labels must match tile count");
  }
  write_comment(out, comment);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    nlohmann::ordered_json obj;
    obj["id"] = tiles[i].id();
    obj["rows"] = std::vector<Index>(tiles[i].rows().begin(), tiles[i].rows().end());
    obj["cols"] = std::vector<Index>(tiles[i].cols().begin(), tiles[i].cols().end());
    if (!labels.empty()) obj["label"] = labels[i];
    out << obj.dump() << '\n';
  }
}

std::vector<adapters::Itemset> read_itemsets(std::istream& in) {
  std::vector<adapters::Itemset> out;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    adapters::Itemset set;
    for (auto v : parse_integers(line, line_no)) set.items.push_back(to_index(v, line_no));
    std::sort(set.items.begin(), set.items.end());
    if (std::adjacent_find(set.items.begin(), set.items.end()) != set.items.end()) {
      throw ParseError(line_no, "repeated item in itemset");
    }
    out.push_back(std::move(set));
  }
  return out;
}

std::vector<adapters::QueryPairSupports> read_query_pairs(std::istream& in, Index n_cols_left) {
  std::vector<adapters::QueryPairSupports> out;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    const auto obj = parse_json_line(line, line_no);
    adapters::QueryPairSupports q;
    q.rows_left = index_array(obj, "uL", line_no);
    q.rows_right = index_array(obj, "uR", line_no);
    q.cols_left = index_array(obj, "vL", line_no);
    q.cols_right = index_array(obj, "vR", line_no);
    q.n_cols_left = n_cols_left;
    out.push_back(std::move(q));
  }
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace, bool with_timing) {
  out << "iter,tile_id,error,rel_error,elapsed_ms\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%zu,%u,%llu,%.10g,%.3f\n", r.iteration, r.tile_id,
                  static_cast<unsigned long long>(r.error), r.rel_error, with_timing ? r.elapsed_ms : 0.0);
    out << buf;
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty trace");
  ++line_no;
  if (line.rfind("iter,tile_id,error,rel_error,elapsed_ms", 0) != 0) throw ParseError(1, "unexpected trace header");
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    TraceRecord r;
    unsigned long long err = 0;
    unsigned id = 0;
    if (std::sscanf(line.c_str(), "%zu,%u,%llu,%lf,%lf", &r.iteration, &id, &err, &r.rel_error, &r.elapsed_ms) != 5) {
      throw ParseError(line_no, "malformed trace row");
    }
    r.tile_id = id;
    r.error = err;
    out.push_back(r);
  }
  return out;
}

void write_sketches(std::ostream& out, std::span<const hashing::TileSketch> sketches, std::uint64_t modulus) {
  out << "modulus " << modulus << '\n';
  for (const auto& s : sketches) {
    out << "tile " << s.tile_id << '\n';
    for (const auto& rep : s.per_rep) {
      for (std::size_t i = 0; i < rep.size(); ++i) out << (i ? " " : "") << rep[i];
      out << '\n';
    }
  }
}

nlohmann::ordered_json to_json(const datagen::SynthConfig& cfg) {
  nlohmann::ordered_json j;
  j["n_rows"] = cfg.n_rows;
  j["n_cols"] = cfg.n_cols;
  j["n_base_tiles"] = cfg.n_base_tiles;
  j["n_copies"] = cfg.n_copies;
  j["bernoulli_p"] = cfg.bernoulli_p ? nlohmann::json(*cfg.bernoulli_p) : nlohmann::json(nullptr);
  j["target_density"] = cfg.target_density ? nlohmann::json(*cfg.target_density) : nlohmann::json(nullptr);
  j["perturb_fraction"] = cfg.perturb_fraction;
  j["noise_fraction"] = cfg.noise_fraction;
  j["assemble_from"] = datagen::to_string(cfg.assemble_from);
  j["seed"] = cfg.seed;
  return j;
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return in;
}

}  // namespace

SparseBinaryMatrix load_matrix(const std::string& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

std::vector<Tile> load_tiles(const std::string& path) {
  auto in = open_input(path);
  return read_tiles(in);
}

}  // namespace patternset::io
