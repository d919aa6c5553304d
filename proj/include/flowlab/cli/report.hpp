#pragma once

// Report tables: CSV with a header row and shortest round-trip floats, plus a
// JSON summary written next to it.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flowlab/error.hpp"

namespace flowlab::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw Error(ErrorKind::Validation, "row width does not match the header");
    rows.push_back(std::move(row));
  }
};

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_cell(row[c]);
    out += '\n';
  }
  return out;
}

/// Splits CSV text (no quoting; cells never contain commas) into header and rows.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    out.push_back(std::move(cells));
  }
  return out;
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw Error(ErrorKind::Validation, "not a number: " + s);
  return v;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + p.string() + " for writing");
  f << text;
  if (!f) throw Error(ErrorKind::IoError, "failed writing " + p.string());
}

struct ReportPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json. An empty table is an error.
inline ReportPaths emit_report(const Table& t, const Json& summary, const std::filesystem::path& dir,
                               const std::string& stem) {
  if (t.rows.empty()) throw Error(ErrorKind::Validation, "empty record list");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  ReportPaths p{dir / (stem + ".csv"), dir / (stem + ".json")};
  write_file(p.csv, to_csv(t));
  write_file(p.json, summary.dump(2) + "\n");
  return p;
}

}  // namespace flowlab::cli
