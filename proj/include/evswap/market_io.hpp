#pragma once

// Readers for AGC traces (`timestamp,signal`) and clearing prices
// (`period,price_usd_per_mw`). Timestamps are seconds from midnight or
// HH:MM:SS; samples are grouped into hourly periods.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "evswap/core.hpp"
#include "evswap/regulation.hpp"

namespace evswap::io {

inline Error parse_error(const std::string& source, std::size_t line, const std::string& what) {
  return {ErrorCategory::parse, source + ":" + std::to_string(line) + ": " + what};
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

/// Seconds since midnight from either a number or HH:MM:SS.
inline bool parse_timestamp(std::string_view s, double& seconds) {
  if (s.find(':') == std::string_view::npos) return parse_double(s, seconds) && seconds >= 0.0;
  const auto parts = split(s, ':');
  if (parts.size() != 3) return false;
  double h, m, sec;
  if (!parse_double(parts[0], h) || !parse_double(parts[1], m) || !parse_double(parts[2], sec)) return false;
  if (h < 0 || m < 0 || m >= 60 || sec < 0 || sec >= 61) return false;
  seconds = h * 3600.0 + m * 60.0 + sec;
  return true;
}

inline bool is_header(const std::vector<std::string_view>& cols) {
  double v;
  return !cols.empty() && !parse_double(cols[0], v) && cols[0].find(':') == std::string_view::npos;
}

inline std::vector<regulation::AgcTrace> read_agc(std::istream& in, const std::string& source = "agc") {
  std::map<int, regulation::AgcTrace> by_period;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = split(t);
    if (first) {
      first = false;
      if (is_header(cols)) continue;
    }
    if (cols.size() != 2) throw parse_error(source, lineno, "expected 2 columns");
    double ts, g;
    if (!parse_timestamp(cols[0], ts)) throw parse_error(source, lineno, "bad timestamp");
    if (!parse_double(cols[1], g)) throw parse_error(source, lineno, "bad signal value");
    if (std::abs(g) > 1.0) throw parse_error(source, lineno, "signal outside [-1, 1]");
    const int z = static_cast<int>(std::floor(ts / 3600.0));
    auto& tr = by_period[z];
    tr.period = z;
    tr.g.push_back(g);
  }
  if (by_period.empty()) throw Error(ErrorCategory::parse, source + ": no AGC samples");
  std::vector<regulation::AgcTrace> out;
  for (auto& [z, tr] : by_period) out.push_back(std::move(tr));
  return out;
}

inline std::vector<double> read_prices(std::istream& in, const std::string& source = "prices") {
  std::map<int, double> by_period;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = split(t);
    if (first) {
      first = false;
      if (is_header(cols)) continue;
    }
    if (cols.size() != 2) throw parse_error(source, lineno, "expected 2 columns");
    double zd, p;
    if (!parse_double(cols[0], zd) || zd < 0 || zd != std::floor(zd))
      throw parse_error(source, lineno, "bad period index");
    if (!parse_double(cols[1], p) || p < 0.0) throw parse_error(source, lineno, "bad price");
    if (!by_period.emplace(static_cast<int>(zd), p).second)
      throw parse_error(source, lineno, "duplicate period");
  }
  std::vector<double> out;
  for (const auto& [z, p] : by_period) {
    if (z != static_cast<int>(out.size()))
      throw Error(ErrorCategory::parse, source + ": missing price for period " + std::to_string(out.size()));
    out.push_back(p);
  }
  if (out.empty()) throw Error(ErrorCategory::parse, source + ": no prices");
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCategory::io, "cannot open " + path);
  return f;
}

inline std::vector<regulation::AgcTrace> read_agc_file(const std::string& path) {
  auto f = open_input(path);
  return read_agc(f, path);
}

inline std::vector<double> read_prices_file(const std::string& path) {
  auto f = open_input(path);
  return read_prices(f, path);
}

inline regulation::RegulationMarket load_market(const std::string& agc_path, const std::string& price_path,
                                                double theta) {
  return regulation::RegulationMarket::from_traces(read_agc_file(agc_path), read_prices_file(price_path), theta);
}

}  // namespace evswap::io
