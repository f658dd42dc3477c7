#include "io.hpp"

#include <fstream>
#include <stdexcept>

#include "limitlab/hash.hpp"
#include "limitlab/version.hpp"

namespace limitlab::cli {

Cell cell(std::int64_t v) { return {Cell::Kind::Integer, std::to_string(v)}; }
Cell cell(std::uint64_t v) { return {Cell::Kind::Integer, std::to_string(v)}; }
Cell cell(double v) { return {Cell::Kind::Float, format_double(v)}; }
Cell cell(const std::string& v) { return {Cell::Kind::Text, v}; }
Cell cell(const Int& v) { return {Cell::Kind::Integer, v.str()}; }

void Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns_.size())
        throw std::logic_error("Table: row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out += ',';
        out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c].text;
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json() const {
    std::string out = "[";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        out += r ? ",\n " : "\n ";
        out += '{';
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (c) out += ", ";
            out += '"' + json_escape(columns_[c]) + "\": ";
            const Cell& cellv = rows_[r][c];
            if (cellv.kind == Cell::Kind::Text)
                out += '"' + json_escape(cellv.text) + '"';
            else
                out += cellv.text;
        }
        out += '}';
    }
    out += "\n]\n";
    return out;
}

std::string json_rational(const Rational& q) {
    return std::string("{\"num\": \"") + boost::multiprecision::numerator(q).str() +
           "\", \"den\": \"" + boost::multiprecision::denominator(q).str() + "\"}";
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw std::runtime_error("cannot open for writing: " + path);
    stream.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!stream) throw std::runtime_error("write failed: " + path);
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw std::runtime_error("cannot reopen for hashing: " + path);
    return std::string(std::istreambuf_iterator<char>(stream),
                       std::istreambuf_iterator<char>());
}

}  // namespace

void write_manifest(const ManifestData& manifest, const std::string& manifest_path) {
    std::string out = "{\n";
    out += "  \"artifact_version\": \"" + std::string(kVersion) + "\",\n";
    out += "  \"command_line\": \"" + json_escape(manifest.command_line) + "\",\n";
    out += "  \"seed\": " + std::to_string(manifest.seed) + ",\n";
    out += "  \"stream_ids\": {\"first\": " + std::to_string(manifest.stream_first) +
           ", \"count\": " + std::to_string(manifest.stream_count) + "},\n";
    out += "  \"config\": \"" + json_escape(manifest.config) + "\",\n";
    out += "  \"config_hash\": \"" + to_hex(fnv1a64(manifest.config)) + "\",\n";
    out += "  \"wall_time_ms\": " + format_double(manifest.wall_ms) + ",\n";
    out += "  \"output_files\": [";
    for (std::size_t i = 0; i < manifest.output_files.size(); ++i) {
        const std::string& path = manifest.output_files[i];
        const std::string bytes = read_file(path);
        out += i ? ",\n    " : "\n    ";
        out += "{\"path\": \"" + json_escape(path) + "\", \"bytes\": " +
               std::to_string(bytes.size()) + ", \"fnv1a64\": \"" +
               to_hex(fnv1a64(bytes)) + "\"}";
    }
    out += "\n  ]\n}\n";
    write_file(manifest_path, out);
}

}  // namespace limitlab::cli
