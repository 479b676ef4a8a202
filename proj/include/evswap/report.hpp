#pragma once

// Result emission: CSV tables, a small SVG line-chart writer and the run
// manifest. Numbers use shortest round-trip formatting so identical results
// give identical bytes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evswap/config.hpp"
#include "evswap/core.hpp"
#include "evswap/optimizer.hpp"
#include "evswap/regulation.hpp"
#include "evswap/scenarios.hpp"
#include "evswap/simkit.hpp"

namespace evswap::report {

inline constexpr const char* kVersion = "0.3.0";

using config::format_number;

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

  Csv& row(const std::vector<std::string>& cells) {
    detail::require(cells.size() == width_, "csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(cells[i]);
    }
    out_ << '\n';
    return *this;
  }

  std::string str() const { return out_.str(); }

 private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }

  std::size_t width_;
  std::ostringstream out_;
};

inline std::string num(double v) { return format_number(v); }

inline std::vector<std::string> decomposition_cells(const CostBreakdown& c) {
  return {num(c.electricity), num(c.station_depreciation), num(c.battery_depreciation), num(c.transport),
          num(c.regulation_income)};
}

inline const std::vector<std::string>& decomposition_header() {
  static const std::vector<std::string> h = {"electricity", "station_depreciation", "battery_depreciation",
                                             "transport", "regulation_income"};
  return h;
}

struct Metric {
  const char* name;
  const char* unit;
  double MetricsReport::*field;
};

inline const std::array<Metric, 3>& metrics() {
  static const std::array<Metric, 3> m = {{{"cost_density", "usd_per_day_km2", &MetricsReport::cost_density},
                                           {"battery_density", "batteries_per_km2", &MetricsReport::battery_density},
                                           {"avg_reg_capacity", "kw_per_km2", &MetricsReport::avg_reg_capacity}}};
  return m;
}

/// Long format: one row per (axis value, configuration, metric).
inline std::string sweep_csv(const std::vector<scenarios::SweepRow>& rows) {
  std::vector<std::string> h = {"axis", "value", "config", "metric", "unit", "metric_value"};
  for (const auto& d : decomposition_header()) h.push_back(d);
  for (const char* k : {"rho_c", "Q", "R", "r", "r_B", "eps_BS"}) h.emplace_back(k);
  Csv csv(h);
  for (const auto& r : rows) {
    for (const auto& m : metrics()) {
      std::vector<std::string> c = {std::string(scenarios::to_string(r.axis)), num(r.value), r.report.config.name(),
                                    m.name, m.unit, num(r.report.*m.field)};
      for (auto& d : decomposition_cells(r.report.decomposition)) c.push_back(d);
      const auto& s = r.report.stocks;
      for (double v : {r.report.decision.rho_c, r.report.decision.Q, s.R, s.r, s.r_B, r.eps_BS.value})
        c.push_back(num(v));
      csv.row(c);
    }
  }
  return csv.str();
}

/// One row per configuration with every metric and cost term.
inline std::string metrics_csv(const std::vector<MetricsReport>& reports) {
  std::vector<std::string> h = {"config", "cost_density", "battery_density", "avg_reg_capacity"};
  for (const auto& d : decomposition_header()) h.push_back(d);
  for (const char* k : {"rho_c", "Q", "R", "r", "r_B", "nu", "eps_BS"}) h.emplace_back(k);
  Csv csv(h);
  for (const auto& m : reports) {
    std::vector<std::string> c = {m.config.name(), num(m.cost_density), num(m.battery_density),
                                  num(m.avg_reg_capacity)};
    for (auto& d : decomposition_cells(m.decomposition)) c.push_back(d);
    const auto& s = m.stocks;
    for (double v : {m.decision.rho_c, m.decision.Q, s.R, s.r, s.r_B, s.nu, s.eps_BS}) c.push_back(num(v));
    csv.row(c);
  }
  return csv.str();
}

/// Key-value table for a centralized optimum.
inline std::string solution_csv(const Configuration& c, const opt::CentralizedSolution& s) {
  Csv csv({"key", "value"});
  const auto kv = [&](const char* k, double v) { csv.row({k, num(v)}); };
  csv.row({"config", c.name()});
  kv("rho_c", s.decision.rho_c);
  kv("Q", s.decision.Q);
  kv("objective", s.objective);
  kv("R", s.stocks.R);
  kv("r", s.stocks.r);
  kv("nu", s.stocks.nu);
  kv("electricity", s.cost.electricity);
  kv("station_depreciation", s.cost.station_depreciation);
  kv("battery_depreciation", s.cost.battery_depreciation);
  kv("transport", s.cost.transport);
  kv("regulation_income", s.cost.regulation_income);
  kv("Q_rounded", s.rounded.Q);
  kv("rounded_objective", s.rounded_objective);
  kv("rounding_gap", s.rounded_objective - s.objective);
  kv("coarse_min", s.coarse_min);
  kv("evaluations", static_cast<double>(s.evaluations));
  kv("rounds", static_cast<double>(s.rounds));
  return csv.str();
}

inline std::string decentralized_solution_csv(const Configuration& c, const opt::DecentralizedChoice& ch,
                                              const econ::DecentralizedEvaluation& ev, double eps_BS) {
  Csv csv({"key", "value"});
  const auto kv = [&](const char* k, double v) { csv.row({k, num(v)}); };
  csv.row({"config", c.name()});
  kv("r_B", ev.r_B);
  kv("r_B_min", ch.r_B_min);
  kv("r_B_cap", ch.r_B_cap);
  kv("eps_BS", eps_BS);
  kv("objective", ev.cost.total());
  kv("electricity", ev.cost.electricity);
  kv("station_depreciation", ev.cost.station_depreciation);
  kv("battery_depreciation", ev.cost.battery_depreciation);
  kv("transport", ev.cost.transport);
  kv("regulation_income", ev.cost.regulation_income);
  kv("income_slope", ch.income_slope);
  kv("depreciation_slope", ch.depreciation_slope);
  return csv.str();
}

/// Dense (rho_c, Q) matrix in long form; the optimum cell is flagged.
inline std::string surface_csv(const opt::Surface& s) {
  Csv csv({"rho_c", "Q", "cost_density", "relative_to_optimum", "is_optimum"});
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    for (std::size_t j = 0; j < s.Q.size(); ++j)
      csv.row({num(s.rho[i]), num(s.Q[j]), num(s.cost[i][j]), num(s.cost[i][j] / s.optimum.objective - 1.0),
               i == s.opt_i && j == s.opt_j ? "1" : "0"});
  return csv.str();
}

struct EtaRow {
  int period = 0;
  std::size_t samples = 0;
  double requested = 0.0;
  double eta = 0.0;
  double fulfilled = 0.0;
};

inline std::vector<EtaRow> eta_table(const std::vector<regulation::AgcTrace>& traces, double theta) {
  std::vector<EtaRow> out;
  for (const auto& t : traces) {
    EtaRow r;
    r.period = t.period;
    r.samples = t.g.size();
    r.requested = regulation::requested_mileage(t);
    r.eta = regulation::eta_z(t, theta);
    r.fulfilled = regulation::fulfilled_mileage(t, r.eta);
    out.push_back(r);
  }
  return out;
}

inline std::string eta_csv(const std::vector<EtaRow>& rows) {
  Csv csv({"period", "samples", "requested_mileage", "eta", "fulfilled_mileage"});
  for (const auto& r : rows)
    csv.row({std::to_string(r.period), std::to_string(r.samples), num(r.requested), num(r.eta), num(r.fulfilled)});
  return csv.str();
}

/// Simulation statistics with their standard errors and, where one exists,
/// the closed-form value they estimate.
inline std::string simstats_csv(const sim::SimStats& s, const std::vector<std::pair<std::string, double>>& targets) {
  Csv csv({"metric", "value", "std_error", "formula"});
  const auto target = [&](const std::string& k) -> std::string {
    for (const auto& [name, v] : targets)
      if (name == k) return num(v);
    return "";
  };
  const auto stat = [&](const std::string& k, const sim::Stat& v) {
    csv.row({k, num(v.value), num(v.std_error), target(k)});
  };
  stat("swap_stockout", s.swap_stockout);
  stat("charge_stockout", s.charge_stockout);
  stat("decentral_stockout", s.decentral_stockout);
  stat("deficit_mean", s.deficit_mean);
  stat("deficit_variance", s.deficit_variance);
  stat("station_stock_mean", s.station_stock_mean);
  for (std::size_t z = 0; z < s.available_capacity.size(); ++z)
    csv.row({"available_capacity_" + std::to_string(z), num(s.available_capacity[z]), "", ""});
  csv.row({"cycles", std::to_string(s.cycles), "", ""});
  csv.row({"stations", std::to_string(s.stations), "", ""});
  csv.row({"area_km2", num(s.area), "", ""});
  csv.row({"observed_hours", num(s.observed_hours), "", ""});
  csv.row({"conservation_error", num(s.conservation_error), "", ""});
  return csv.str();
}

inline std::string in_transit_csv(const sim::InTransitReport& r) {
  Csv csv({"period", "mean", "mean_se", "variance", "variance_se", "truck_share", "model_mean", "model_variance",
           "consistent_variance", "model_closer"});
  for (std::size_t z = 0; z < r.periods.size(); ++z) {
    const auto& p = r.periods[z];
    csv.row({std::to_string(z), num(p.mean.value), num(p.mean.std_error), num(p.variance.value),
             num(p.variance.std_error), num(p.station_share.value), num(p.model_mean), num(p.model_variance),
             num(p.consistent_variance), p.model_closer ? "1" : "0"});
  }
  return csv.str();
}

inline std::string radar_csv(const std::array<MetricsReport, 4>& reports) {
  const auto m = scenarios::normalize_radar(reports);
  Csv csv({"config", "cost_score", "battery_score", "grid_score"});
  for (std::size_t i = 0; i < 4; ++i)
    csv.row({reports[i].config.name(), num(m[i][0]), num(m[i][1]), num(m[i][2])});
  return csv.str();
}

// ---------------------------------------------------------------------------
// SVG

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;  // include the unit, e.g. "demand scale (-)"
  std::string y_label;
  std::vector<Series> series;
  int width = 640;
  int height = 420;
};

inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

/// Tick values on a 1/2/5 ladder covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double k : {1.0, 2.0, 5.0, 10.0})
    if (k * mag >= raw) {
      step = k * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

inline std::string tick_label(double v) {
  std::ostringstream o;
  o << std::setprecision(4) << v;
  return o.str();
}

inline std::string svg_line_chart(const Chart& c) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : c.series) {
    detail::require(s.x.size() == s.y.size(), "series '" + s.name + "' has mismatched lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!std::isfinite(xlo)) xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
  if (xhi == xlo) xhi = xlo + 1.0;
  if (yhi == ylo) yhi = ylo + 1.0;
  ylo = std::min(ylo, 0.0) < 0.0 ? ylo : 0.0;
  yhi += 0.05 * (yhi - ylo);

  const double L = 80, R = 160, T = 40, B = 60;
  const double pw = c.width - L - R, ph = c.height - T - B;
  const auto X = [&](double v) { return L + (v - xlo) / (xhi - xlo) * pw; };
  const auto Y = [&](double v) { return T + ph - (v - ylo) / (yhi - ylo) * ph; };

  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width << "\" height=\"" << c.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << L + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(c.title)
    << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\" stroke=\"black\"/>\n";
  for (double t : nice_ticks(xlo, xhi)) {
    o << "<line x1=\"" << X(t) << "\" y1=\"" << T + ph << "\" x2=\"" << X(t) << "\" y2=\"" << T + ph + 5
      << "\" stroke=\"black\"/>";
    o << "<text x=\"" << X(t) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << tick_label(t)
      << "</text>\n";
  }
  for (double t : nice_ticks(ylo, yhi)) {
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << Y(t) << "\" x2=\"" << L << "\" y2=\"" << Y(t)
      << "\" stroke=\"black\"/>";
    o << "<text x=\"" << L - 8 << "\" y=\"" << Y(t) + 4 << "\" text-anchor=\"end\">" << tick_label(t)
      << "</text>\n";
  }
  o << "<text class=\"x-label\" x=\"" << L + pw / 2 << "\" y=\"" << c.height - 15 << "\" text-anchor=\"middle\">"
    << xml_escape(c.x_label) << "</text>\n";
  o << "<text class=\"y-label\" x=\"18\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << T + ph / 2 << ")\">" << xml_escape(c.y_label) << "</text>\n";
  for (std::size_t k = 0; k < c.series.size(); ++k) {
    const auto& s = c.series[k];
    const char* col = palette[k % std::size(palette)];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!first) o << ' ';
      o << X(s.x[i]) << ',' << Y(s.y[i]);
      first = false;
    }
    o << "\"/>\n";
    const double ly = T + 10 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 32 << "\" y2=\"" << ly
      << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>";
    o << "<text x=\"" << L + pw + 38 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline std::string axis_label(scenarios::Axis a) {
  switch (a) {
    case scenarios::Axis::demand_scale: return "demand scale q (-)";
    case scenarios::Axis::power: return "charging power multiplier (x 41/7 kW)";
    case scenarios::Axis::battery_cost: return "battery cost multiplier (x c_B, c_R)";
  }
  return "";
}

/// One chart per metric, one line per configuration.
inline std::vector<std::pair<std::string, std::string>> sweep_charts(const std::vector<scenarios::SweepRow>& rows) {
  std::vector<std::pair<std::string, std::string>> out;
  if (rows.empty()) return out;
  const auto axis = rows.front().axis;
  static const std::array<const char*, 3> titles = {"Cost density", "Battery density", "Average regulation capacity"};
  static const std::array<const char*, 3> units = {"cost density ($/day/km^2)", "battery density (batteries/km^2)",
                                                   "regulation capacity (kW/km^2)"};
  for (std::size_t k = 0; k < 3; ++k) {
    Chart c;
    c.title = titles[k];
    c.x_label = axis_label(axis);
    c.y_label = units[k];
    for (const auto& r : rows) {
      const auto name = r.report.config.name();
      auto it = std::find_if(c.series.begin(), c.series.end(), [&](const Series& s) { return s.name == name; });
      if (it == c.series.end()) {
        c.series.push_back({name, {}, {}});
        it = std::prev(c.series.end());
      }
      it->x.push_back(r.value);
      it->y.push_back(r.report.*metrics()[k].field);
    }
    out.emplace_back(std::string(metrics()[k].name) + ".svg", svg_line_chart(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << v;
  return o.str();
}

inline std::string slurp(const std::string& path) {
  auto f = io::open_input(path);
  std::ostringstream o;
  o << f.rdbuf();
  return o.str();
}

struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;  // full argument vector after the program name
  std::vector<std::string> inputs;     // input file paths
  std::uint64_t seed = 0;
  std::string output_dir;
  std::string version = kVersion;
  std::string parameter_hash;

  /// Hash of the canonical parameters, the run options and the bytes of
  /// every input file. The output directory is not part of it.
  void compute_hash(const std::string& canonical_params, const std::string& options) {
    std::uint64_t h = fnv1a(command);
    h = fnv1a(std::string_view("\0", 1), h);
    h = fnv1a(canonical_params, h);
    h = fnv1a(std::string_view("\0", 1), h);
    h = fnv1a(options, h);
    for (const auto& in : inputs) {
      h = fnv1a(std::string_view("\0", 1), h);
      h = fnv1a(slurp(in), h);
    }
    parameter_hash = hex64(h);
  }

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["arguments"] = arguments;
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["version"] = version;
    j["parameter_hash"] = parameter_hash;
    return j.dump(2) + "\n";
  }
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCategory::io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCategory::io, "write failed for " + path.string());
}

/// Creates the directory and writes manifest.json into it.
inline void begin_output(const std::filesystem::path& dir, const RunManifest& m) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCategory::io, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "manifest.json", m.to_json());
}

}  // namespace evswap::report
