#pragma once

// Text formats.
//
// Matrix:  optional '#' comment lines, then "m n nnz", then nnz lines "i j"
//          (zero-based, written row-major sorted).
// Tiles:   JSON lines {"id":…, "rows":[…], "cols":[…]}; extra keys such as
//          "label" are carried through untouched by readers.
// Itemsets: one itemset per line, space-separated column indices.
// Query pairs: JSON lines {"uL":[…], "uR":[…], "vL":[…], "vR":[…]}.
// Trace:   CSV "iter,tile_id,error,rel_error,elapsed_ms".
//
// Readers throw ParseError carrying the 1-based line number.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "patternset/adapters.hpp"
#include "patternset/datagen.hpp"
#include "patternset/hashing.hpp"
#include "patternset/matrix.hpp"
#include "patternset/select.hpp"

namespace patternset::io {

SparseBinaryMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const SparseBinaryMatrix& data, const std::string& comment = {});

std::vector<Tile> read_tiles(std::istream& in);
// labels, when given, must be parallel to tiles.
void write_tiles(std::ostream& out, std::span<const Tile> tiles, std::span<const std::string> labels = {},
                 const std::string& comment = {});

std::vector<adapters::Itemset> read_itemsets(std::istream& in);
std::vector<adapters::QueryPairSupports> read_query_pairs(std::istream& in, Index n_cols_left);

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace, bool with_timing = true);
std::vector<TraceRecord> read_trace_csv(std::istream& in);

// Per tile a "tile <id>" line, then one line of numerators per repetition.
void write_sketches(std::ostream& out, std::span<const hashing::TileSketch> sketches, std::uint64_t modulus);

nlohmann::ordered_json to_json(const datagen::SynthConfig& cfg);

// File helpers; open failures are reported as Error(io).
SparseBinaryMatrix load_matrix(const std::string& path);
std::vector<Tile> load_tiles(const std::string& path);

}  // namespace patternset::io
