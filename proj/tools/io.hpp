#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "limitlab/rational.hpp"

namespace limitlab::cli {

struct Cell {
    enum class Kind { Integer, Float, Text };
    Kind kind;
    std::string text;
};

Cell cell(std::int64_t v);
Cell cell(std::uint64_t v);
Cell cell(double v);
Cell cell(const std::string& v);
Cell cell(const Int& v);

// One tabular result; serializes to canonical CSV (UTF-8, LF, mandatory
// header, shortest-round-trip floats) or to a JSON array of row objects.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> cells);
    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

// {"num": "...", "den": "..."} fragment for exact rationals in JSON reports.
std::string json_rational(const Rational& q);

std::string json_escape(const std::string& s);

// Writes bytes exactly as given; parent directory must exist.
void write_file(const std::string& path, const std::string& bytes);

struct ManifestData {
    std::string command_line;
    std::uint64_t seed = 0;
    std::uint64_t stream_first = 0;
    std::uint64_t stream_count = 0;
    std::string config;  // canonical resolved-config string
    double wall_ms = 0.0;
    std::vector<std::string> output_files;
};

// Writes <data path>.manifest.json: provenance plus an fnv1a64 fingerprint of
// every emitted data file, so outputs can be validated after the fact.
void write_manifest(const ManifestData& manifest, const std::string& manifest_path);

}  // namespace limitlab::cli
