#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pxy/core.hpp"

namespace pxy {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return res.ec == std::errc{} && res.ptr == cell.data() + cell.size();
}

}  // namespace detail

/// Parses two comma-separated numeric columns (x, y). A first row that is not
/// numeric is taken as a header. Blank lines are skipped; row numbers in
/// errors are 1-based line numbers of the input.
inline PairedSample parse_csv(std::string_view text) {
  std::vector<Pair> pairs;
  std::size_t line_no = 0;
  bool first_content = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos
                                                                          : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 2)
      throw FormatError("row " + std::to_string(line_no) + ": expected 2 columns, found " +
                        std::to_string(cells.size()));

    double x = 0.0, y = 0.0;
    const bool ok = detail::parse_double(cells[0], x) && detail::parse_double(cells[1], y);
    if (!ok) {
      if (first_content) {
        first_content = false;
        continue;  // header
      }
      throw ParseError(line_no, "non-numeric cell");
    }
    first_content = false;
    if (!std::isfinite(x) || !std::isfinite(y)) throw ParseError(line_no, "non-finite value");
    pairs.push_back({x, y});
  }
  if (pairs.size() < 2)
    throw InsufficientData("need at least 2 data rows, found " + std::to_string(pairs.size()));
  return PairedSample(std::move(pairs));
}

inline PairedSample ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

/// Round-trip formatting (17 significant digits).
inline std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string sample_to_csv(const PairedSample& s) {
  std::string out = "x,y\n";
  for (const auto& p : s) out += format_full(p.x) + "," + format_full(p.y) + "\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace pxy
