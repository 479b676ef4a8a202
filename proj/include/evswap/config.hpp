#pragma once

// INI parameter files. Sections and keys:
//
//   [system]      rho_s q_truck Q_cap T_C lambda_C lambda_S B_C
//   [costs]       c_C c_S c_I c_T c_B c_R c_E        (c_E: peak,off-peak)
//   [service]     eps_S eps_C eps_B theta
//   [regulation]  r_B_cap bernoulli_consistent_variance
//   [demand]      station_mean station_std peak_hours (comma lists)
//
// Every key is optional and defaults to the baseline; B_C defaults to
// lambda_C * T_C. Unknown sections or keys are rejected.

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "evswap/core.hpp"
#include "evswap/market_io.hpp"

namespace evswap::config {

struct Inputs {
  SystemParams params;
  StationDemand demand = baseline_station_demand();

  DemandProfile profile() const { return make_profile(demand, params.rho_s); }
  bool operator==(const Inputs&) const = default;
};

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <class T>
std::string format_list(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_same_v<T, int>)
      s += std::to_string(v[i]);
    else
      s += format_number(v[i]);
  }
  return s;
}

namespace detail_cfg {

inline Error bad(const std::string& key, const std::string& what) {
  return {ErrorCategory::parse, key + ": " + what};
}

inline double number(const std::string& key, const std::string& text) {
  double v;
  if (!io::parse_double(text, v)) throw bad(key, "not a number: '" + text + "'");
  return v;
}

inline std::vector<double> numbers(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (auto part : io::split(text)) out.push_back(number(key, std::string(part)));
  return out;
}

inline std::vector<int> integers(const std::string& key, const std::string& text) {
  std::vector<int> out;
  if (io::trim(text).empty()) return out;
  for (double v : numbers(key, text)) {
    if (v != static_cast<double>(static_cast<int>(v))) throw bad(key, "expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

inline bool boolean(const std::string& key, std::string text) {
  text = std::string(io::trim(text));
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw bad(key, "expected true or false");
}

}  // namespace detail_cfg

inline Inputs load(std::istream& in, const std::string& source = "config") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCategory::parse, source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  using detail_cfg::number;
  Inputs x;
  auto& p = x.params;
  std::optional<double> B_C;
  const std::map<std::string, std::map<std::string, std::function<void(const std::string&, const std::string&)>>>
      handlers = {
          {"system",
           {{"rho_s", [&](auto& k, auto& v) { p.rho_s = number(k, v); }},
            {"q_truck", [&](auto& k, auto& v) { p.q_truck = number(k, v); }},
            {"Q_cap", [&](auto& k, auto& v) { p.Q_cap = number(k, v); }},
            {"T_C", [&](auto& k, auto& v) { p.T_C = number(k, v); }},
            {"lambda_C", [&](auto& k, auto& v) { p.lambda_C = number(k, v); }},
            {"lambda_S", [&](auto& k, auto& v) { p.lambda_S = number(k, v); }},
            {"B_C", [&](auto& k, auto& v) { B_C = number(k, v); }}}},
          {"costs",
           {{"c_C", [&](auto& k, auto& v) { p.c_C = number(k, v); }},
            {"c_S", [&](auto& k, auto& v) { p.c_S = number(k, v); }},
            {"c_I", [&](auto& k, auto& v) { p.c_I = number(k, v); }},
            {"c_T", [&](auto& k, auto& v) { p.c_T = number(k, v); }},
            {"c_B", [&](auto& k, auto& v) { p.c_B = number(k, v); }},
            {"c_R", [&](auto& k, auto& v) { p.c_R = number(k, v); }},
            {"c_E", [&](auto& k, auto& v) { p.c_E = detail_cfg::numbers(k, v); }}}},
          {"service",
           {{"eps_S", [&](auto& k, auto& v) { p.eps_S = number(k, v); }},
            {"eps_C", [&](auto& k, auto& v) { p.eps_C = number(k, v); }},
            {"eps_B", [&](auto& k, auto& v) { p.eps_B = number(k, v); }},
            {"theta", [&](auto& k, auto& v) { p.theta = number(k, v); }}}},
          {"regulation",
           {{"r_B_cap", [&](auto& k, auto& v) { p.r_B_cap = number(k, v); }},
            {"bernoulli_consistent_variance",
             [&](auto& k, auto& v) { p.bernoulli_consistent_variance = detail_cfg::boolean(k, v); }}}},
          {"demand",
           {{"station_mean", [&](auto& k, auto& v) { x.demand.mean = detail_cfg::numbers(k, v); }},
            {"station_std", [&](auto& k, auto& v) { x.demand.std_dev = detail_cfg::numbers(k, v); }},
            {"peak_hours", [&](auto& k, auto& v) { x.demand.peak_periods = detail_cfg::integers(k, v); }}}},
      };
  for (const auto& [section, body] : tree) {
    const auto sec = handlers.find(section);
    if (sec == handlers.end()) {
      if (body.empty()) throw Error(ErrorCategory::parse, source + ": key '" + section + "' outside a section");
      throw Error(ErrorCategory::parse, source + ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      const auto h = sec->second.find(key);
      if (h == sec->second.end())
        throw Error(ErrorCategory::parse, source + ": unknown key '" + key + "' in [" + section + "]");
      h->second(key, value.data());
    }
  }
  p.B_C = B_C.value_or(p.lambda_C * p.T_C);
  p.validate();
  // Builds the profile once so demand errors surface at load time.
  (void)x.profile();
  if (p.c_E.size() != 2) throw invalid("c_E must list a peak and an off-peak price");
  return x;
}

inline Inputs load_text(const std::string& text, const std::string& source = "config") {
  std::istringstream in(text);
  return load(in, source);
}

inline Inputs load_file(const std::string& path) {
  auto f = io::open_input(path);
  return load(f, path);
}

/// Canonical text: every key, fixed order, shortest round-trip numbers.
inline std::string serialize(const Inputs& x) {
  const auto& p = x.params;
  const auto n = format_number;
  std::ostringstream o;
  o << "[system]\n"
    << "rho_s = " << n(p.rho_s) << "\nq_truck = " << n(p.q_truck) << "\nQ_cap = " << n(p.Q_cap)
    << "\nT_C = " << n(p.T_C) << "\nlambda_C = " << n(p.lambda_C) << "\nlambda_S = " << n(p.lambda_S)
    << "\nB_C = " << n(p.B_C) << "\n\n[costs]\n"
    << "c_C = " << n(p.c_C) << "\nc_S = " << n(p.c_S) << "\nc_I = " << n(p.c_I) << "\nc_T = " << n(p.c_T)
    << "\nc_B = " << n(p.c_B) << "\nc_R = " << n(p.c_R) << "\nc_E = " << format_list(p.c_E) << "\n\n[service]\n"
    << "eps_S = " << n(p.eps_S) << "\neps_C = " << n(p.eps_C) << "\neps_B = " << n(p.eps_B)
    << "\ntheta = " << n(p.theta) << "\n\n[regulation]\n";
  if (p.r_B_cap) o << "r_B_cap = " << n(*p.r_B_cap) << "\n";
  o << "bernoulli_consistent_variance = " << (p.bernoulli_consistent_variance ? "true" : "false")
    << "\n\n[demand]\n"
    << "station_mean = " << format_list(x.demand.mean) << "\nstation_std = " << format_list(x.demand.std_dev)
    << "\npeak_hours = " << format_list(x.demand.peak_periods) << "\n";
  return o.str();
}

}  // namespace evswap::config
