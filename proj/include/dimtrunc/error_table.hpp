#pragma once

// Truncation-error tables: CSV persistence and log-log rate fits.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dimtrunc/error.hpp"

namespace dimtrunc {

struct ErrorRow {
  std::size_t s = 0;
  double error = 0.0;
};

/// Estimated truncation errors for increasing s, plus experiment metadata
/// (norm, theta, transform, n, s_ref, h, seed, ...).
struct ErrorTable {
  std::vector<ErrorRow> rows;
  std::map<std::string, std::string> metadata;

  std::optional<std::string> meta(const std::string& key) const {
    auto it = metadata.find(key);
    if (it == metadata.end()) return std::nullopt;
    return it->second;
  }

  std::optional<double> meta_number(const std::string& key) const {
    auto v = meta(key);
    if (!v) return std::nullopt;
    try {
      return std::stod(*v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  /// s strictly increasing; errors finite and nonnegative, zero only at
  /// s == s_ref when the metadata records it.
  void validate() const {
    const auto s_ref = meta_number("s_ref");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0 && rows[i].s <= rows[i - 1].s)
        throw ConfigError("table dimensions must be strictly increasing");
      if (!std::isfinite(rows[i].error) || rows[i].error < 0.0)
        throw ConfigError("table errors must be finite and nonnegative");
      if (rows[i].error == 0.0 && s_ref && static_cast<double>(rows[i].s) != *s_ref)
        throw ConfigError("zero error at s = " + std::to_string(rows[i].s) +
                          " below the reference dimension");
    }
  }
};

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string to_csv(const ErrorTable& table) {
  std::ostringstream out;
  out << "#";
  bool first = true;
  for (const auto& [k, v] : table.metadata) {
    out << (first ? " " : ";") << k << "=" << v;
    first = false;
  }
  out << "\n";
  out << "s,error\n";
  for (const auto& row : table.rows) out << row.s << "," << format_double(row.error) << "\n";
  return out.str();
}

inline ErrorTable parse_csv(const std::string& text) {
  ErrorTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string body = line.substr(1);
      std::istringstream pairs(body);
      for (std::string item; std::getline(pairs, item, ';');) {
        const auto b = item.find_first_not_of(' ');
        if (b == std::string::npos) continue;
        item = item.substr(b);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("metadata item without '='", line_no);
        table.metadata[item.substr(0, eq)] = item.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "s,error") throw ParseError("expected header 's,error'", line_no);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected 's,error' row", line_no);
    ErrorRow row;
    try {
      std::size_t used = 0;
      const std::string s_text = line.substr(0, comma);
      row.s = std::stoul(s_text, &used);
      if (used != s_text.size()) throw std::invalid_argument("s");
      const std::string e_text = line.substr(comma + 1);
      row.error = std::stod(e_text, &used);
      if (used != e_text.size()) throw std::invalid_argument("error");
    } catch (const std::exception&) {
      throw ParseError("malformed row '" + line + "'", line_no);
    }
    table.rows.push_back(row);
  }
  if (!header_seen) throw ParseError("missing header 's,error'", line_no);
  table.validate();
  return table;
}

inline void write_csv(const ErrorTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write table '" + path + "'");
  out << to_csv(table);
}

inline ErrorTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read table '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // log(error) at s = 1
  double residual = 0.0;   // root mean square of the log residuals
  std::size_t rows_used = 0;
  std::size_t zero_rows_excluded = 0;
};

/// s of the first row in the upper half of the table.
inline std::size_t default_s_min(const ErrorTable& table) {
  if (table.rows.empty()) return 0;
  return table.rows[table.rows.size() / 2].s;
}

/// Least squares line through (log s, log error) over rows with s >= s_min.
/// Zero-error rows are skipped and counted in zero_rows_excluded.
inline RateFit fit_rate(const ErrorTable& table, std::size_t s_min) {
  RateFit fit;
  std::vector<double> xs, ys;
  for (const auto& row : table.rows) {
    if (row.s < s_min) continue;
    if (row.error <= 0.0 || row.s == 0) {
      ++fit.zero_rows_excluded;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(row.s)));
    ys.push_back(std::log(row.error));
  }
  if (xs.size() < 2)
    throw ConfigError("rate fit needs at least 2 rows with s >= " + std::to_string(s_min) +
                      " and positive error, got " + std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("rate fit needs at least two distinct s values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.rows_used = xs.size();
  return fit;
}

}  // namespace dimtrunc
