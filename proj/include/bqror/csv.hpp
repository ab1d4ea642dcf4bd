#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bqror/errors.hpp"
#include "bqror/model.hpp"

namespace bqror::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "' is empty (header row required)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  for (auto& h : split_record(line)) t.header.push_back(trim(h));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_record(line);
    if (fields.size() != t.header.size()) {
      throw DataError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                      std::to_string(t.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    for (auto& f : fields) f = trim(f);
    t.rows.push_back(std::move(fields));
  }
  return t;
}

inline std::size_t column_index(const Table& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw DataError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - t.header.begin());
}

/// Parses a finite real; rows are 1-based data rows (header excluded).
inline double parse_real(const std::string& cell, std::size_t row, const std::string& column) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size() || errno == ERANGE || !std::isfinite(v)) {
    throw DataError("non-numeric or non-finite value '" + cell + "' at row " + std::to_string(row) +
                    ", column '" + column + "'");
  }
  return v;
}

/// Shortest round-trip representation of a double.
inline std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Six significant digits, for human-facing reports.
inline std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct LoadedDataset {
  OrdinalDataset data;
  std::map<double, int> label_map;  // original response value -> 1..J
  std::vector<std::string> log;
};

/// Reads an ordinal dataset. Response values must be integers; they are
/// relabelled to 1..J preserving order. An empty covariate list selects every
/// non-response column. With `intercept`, a leading ones column is added.
inline LoadedDataset load_dataset(const std::string& path, const std::string& response,
                                  std::vector<std::string> covariates, bool intercept) {
  const Table t = read_table(path);
  const std::size_t ycol = column_index(t, response);
  if (covariates.empty()) {
    for (const auto& h : t.header)
      if (h != response) covariates.push_back(h);
  }
  std::vector<std::size_t> xcols;
  for (const auto& c : covariates) {
    if (c == response) throw DataError("response column '" + c + "' listed as a covariate");
    xcols.push_back(column_index(t, c));
  }
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  const auto k = static_cast<Eigen::Index>(xcols.size()) + (intercept ? 1 : 0);
  if (k == 0) throw DataError("no covariates selected");
  if (n < k) {
    throw DataError("'" + path + "' has " + std::to_string(n) + " rows but " + std::to_string(k) +
                    " covariate columns; need at least as many rows as columns");
  }

  Matrix X(n, k);
  std::vector<double> raw(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    const auto r = static_cast<std::size_t>(i + 1);
    Eigen::Index c = 0;
    if (intercept) X(i, c++) = 1.0;
    for (std::size_t j = 0; j < xcols.size(); ++j) X(i, c++) = parse_real(row[xcols[j]], r, t.header[xcols[j]]);
    const double v = parse_real(row[ycol], r, response);
    if (v != std::floor(v)) {
      throw DataError("response value '" + row[ycol] + "' at row " + std::to_string(r) +
                      " is not an integer category");
    }
    raw[static_cast<std::size_t>(i)] = v;
  }

  std::map<double, int> label_map;
  for (double v : raw) label_map.emplace(v, 0);
  if (label_map.size() < 2) throw DataError("response column '" + response + "' has a single category");
  int next = 1;
  for (auto& [value, label] : label_map) label = next++;

  std::vector<std::string> log;
  std::vector<int> y(raw.size());
  bool relabelled = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    y[i] = label_map.at(raw[i]);
    relabelled = relabelled || (y[i] != static_cast<int>(raw[i]));
  }
  if (relabelled) {
    std::ostringstream msg;
    msg << "relabelled response categories:";
    for (const auto& [value, label] : label_map) msg << ' ' << value << "->" << label;
    log.push_back(msg.str());
  }
  std::vector<std::string> names;
  if (intercept) names.emplace_back("intercept");
  for (const auto& c : covariates) names.push_back(c);
  OrdinalDataset data(std::move(X), std::move(y), static_cast<int>(label_map.size()),
                      std::move(names));
  for (const auto& w : data.warnings()) log.push_back(w);
  return {std::move(data), std::move(label_map), std::move(log)};
}

/// Writes covariates (optionally without a leading intercept column) and the response.
inline void write_dataset(const std::string& path, const OrdinalDataset& data,
                          bool drop_intercept_column) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  const auto& names = data.covariate_names();
  const Eigen::Index first = (drop_intercept_column && !names.empty() && names[0] == "intercept") ? 1 : 0;
  for (Eigen::Index c = first; c < data.k(); ++c) out << names[static_cast<std::size_t>(c)] << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index c = first; c < data.k(); ++c) out << format_full(data.x()(i, c)) << ',';
    out << data.y()[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace bqror::csv
