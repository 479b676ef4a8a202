#pragma once

// Four-configuration pipeline: centralized solve, eps_BS calibration,
// decentralized solve. Sweeps over demand scale, charging power and battery
// cost, plus radar normalization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "evswap/core.hpp"
#include "evswap/econ.hpp"
#include "evswap/geometry.hpp"
#include "evswap/optimizer.hpp"
#include "evswap/regulation.hpp"

namespace evswap::scenarios {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimate of the decentralized stockout probability matching
/// the centralized service. Demand over the replenishment window Delta and
/// over its first T^T share one path: N(T^T) = X1, N(Delta) = X1 + X2 with
/// independent normal pieces truncated at zero.
inline Estimate calibrate_eps_BS(const Decision& d, const StockPlan& s, const SystemParams& p,
                                 const DemandProfile& prof, std::size_t samples, std::uint64_t seed) {
  detail::require(samples >= 1, "calibration needs at least one sample");
  detail::require(d.Q > 0.0 && d.rho_c > 0.0, "calibration needs a centralized decision");
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double delta = inventory::replenishment_window(d.rho_c, p);
  if (!(delta > 0.0)) throw invalid("replenishment window must be positive");
  const double mu = prof.mu_bar_overall(), s2 = prof.sigma2_bar_overall();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> x1(tt * mu, std::sqrt(tt * s2));
  std::normal_distribution<double> x2((delta - tt) * mu, std::sqrt((delta - tt) * s2));
  const double held = d.rho_c / p.rho_s * s.R;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double a = std::max(0.0, x1(rng));
    const double b = std::max(0.0, x2(rng));
    const double v = std::max(0.0, std::max(0.0, a + b - held) + a - s.r) / d.Q;
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = samples > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
  return {std::clamp(mean, 0.0, 1.0), std::sqrt(var / n), samples};
}

struct CalibrationSpec {
  std::size_t samples = 200000;
  std::uint64_t seed = 20240831;
};

/// eps_BS kept inside the open unit interval so the quantile stays finite.
inline double usable_eps(double eps) { return std::clamp(eps, 1e-9, 1.0 - 1e-9); }

inline MetricsReport centralized_report(const Configuration& c, const opt::CentralizedSolution& sol,
                                        const SystemParams& p, const DemandProfile& prof) {
  MetricsReport m;
  m.config = c;
  m.decision = sol.decision;
  m.stocks = sol.stocks;
  m.decomposition = sol.cost;
  m.cost_density = sol.cost.total();
  m.battery_density = econ::centralized_battery_density(sol.decision, sol.stocks, p);
  m.avg_reg_capacity = regulation::average_capacity(sol.decision, sol.stocks, p, prof);
  return m;
}

inline MetricsReport decentralized_report(const Configuration& c, const SystemParams& p, const DemandProfile& prof,
                                          const regulation::RegulationMarket* market, double eps_BS) {
  const double eps = usable_eps(eps_BS);
  const auto choice = opt::choose_decentralized_stock(p, prof, market, c.regulation, eps);
  const auto ev = econ::evaluate_decentralized(p, prof, market, eps, c.regulation, choice.r_B);
  MetricsReport m;
  m.config = c;
  m.decision = {};
  m.stocks.r_B = ev.r_B;
  m.stocks.eps_BS = eps_BS;
  m.decomposition = ev.cost;
  m.cost_density = ev.cost.total();
  m.battery_density = econ::decentralized_battery_density(ev.r_B);
  m.avg_reg_capacity = regulation::average_capacity_decentralized(ev.r_B, p);
  return m;
}

/// One configuration. Decentralized configurations need eps_BS.
inline MetricsReport run_configuration(const Configuration& c, const SystemParams& p, const DemandProfile& prof,
                                       const regulation::RegulationMarket* market,
                                       std::optional<double> eps_BS = std::nullopt,
                                       const opt::SearchSpec& search = {}) {
  if (c.architecture == Architecture::centralized)
    return centralized_report(c, opt::optimize_centralized(p, prof, market, c.regulation, search), p, prof);
  if (!eps_BS) throw Error(ErrorCategory::usage, "decentralized configurations need a calibrated eps_BS");
  return decentralized_report(c, p, prof, market, *eps_BS);
}

struct PipelineResult {
  opt::CentralizedSolution central_off;
  std::optional<opt::CentralizedSolution> central_on;
  Estimate eps_BS;
  std::vector<MetricsReport> reports;  // in the order requested
};

inline bool needs_regulation(const std::vector<Configuration>& configs) {
  return std::any_of(configs.begin(), configs.end(), [](const Configuration& c) { return c.regulation; });
}

/// Centralized solve, then calibration at the regulation-off optimum, then
/// the decentralized configurations.
inline PipelineResult run_pipeline(const SystemParams& p, const DemandProfile& prof,
                                   const regulation::RegulationMarket* market,
                                   const std::vector<Configuration>& configs, const CalibrationSpec& calib = {},
                                   const opt::SearchSpec& search = {}) {
  PipelineResult r;
  r.central_off = opt::optimize_centralized(p, prof, market, false, search);
  if (needs_regulation(configs)) r.central_on = opt::optimize_centralized(p, prof, market, true, search);
  r.eps_BS = calibrate_eps_BS(r.central_off.decision, r.central_off.stocks, p, prof, calib.samples, calib.seed);
  for (const auto& c : configs) {
    if (c.architecture == Architecture::centralized) {
      auto m = centralized_report(c, c.regulation ? *r.central_on : r.central_off, p, prof);
      m.stocks.eps_BS = r.eps_BS.value;
      r.reports.push_back(m);
    } else {
      r.reports.push_back(decentralized_report(c, p, prof, market, r.eps_BS.value));
    }
  }
  return r;
}

enum class Axis { demand_scale, power, battery_cost };

inline std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::demand_scale: return "demand_scale";
    case Axis::power: return "power";
    case Axis::battery_cost: return "battery_cost";
  }
  return "?";
}

inline Axis parse_axis(std::string_view s) {
  for (Axis a : {Axis::demand_scale, Axis::power, Axis::battery_cost})
    if (to_string(a) == s) return a;
  throw Error(ErrorCategory::usage, "unknown sweep axis '" + std::string(s) + "'");
}

struct SweepSpec {
  Axis axis = Axis::demand_scale;
  std::vector<double> points;
  std::vector<Configuration> configs;

  void validate() const {
    detail::require(points.size() >= 2, "sweep needs at least 2 points");
    detail::require(std::is_sorted(points.begin(), points.end()), "sweep points must be sorted");
    for (double v : points) detail::require(v > 0.0 && std::isfinite(v), "sweep points must be positive");
    detail::require(!configs.empty(), "sweep needs at least one configuration");
  }
};

/// Parameters and per-station demand at one sweep point. Demand scaling
/// multiplies rho_s and the per-station mean and variance by s; power
/// scaling multiplies both charging powers and shortens the full-charge
/// time; battery-cost scaling multiplies c_B and c_R.
inline std::pair<SystemParams, StationDemand> apply_axis(Axis axis, double v, SystemParams p, StationDemand d) {
  switch (axis) {
    case Axis::demand_scale:
      p.rho_s *= v;
      d = d.scaled(v);
      break;
    case Axis::power:
      p.lambda_C *= v;
      p.lambda_S *= v;
      p.T_C /= v;
      break;
    case Axis::battery_cost:
      p.c_B *= v;
      p.c_R *= v;
      break;
  }
  return {p, d};
}

struct SweepRow {
  Axis axis = Axis::demand_scale;
  double value = 0.0;
  MetricsReport report;
  Estimate eps_BS;
};

inline std::vector<SweepRow> sweep(const SweepSpec& spec, const SystemParams& p, const StationDemand& demand,
                                   const regulation::RegulationMarket* market, const CalibrationSpec& calib = {},
                                   const opt::SearchSpec& search = {}) {
  spec.validate();
  std::vector<SweepRow> rows;
  for (double v : spec.points) {
    const auto [pp, dd] = apply_axis(spec.axis, v, p, demand);
    const auto prof = make_profile(dd, pp.rho_s);
    const auto res = run_pipeline(pp, prof, market, spec.configs, calib, search);
    for (const auto& m : res.reports) rows.push_back({spec.axis, v, m, res.eps_BS});
  }
  return rows;
}

using RadarMatrix = std::array<std::array<double, 3>, 4>;

/// Min-max normalization per metric across four configurations; 1 is best.
/// Cost and battery density are inverted. A metric equal across all
/// configurations maps to 1.
inline RadarMatrix normalize_radar(const std::array<MetricsReport, 4>& reports) {
  RadarMatrix out{};
  for (std::size_t k = 0; k < 3; ++k) {
    std::array<double, 4> v{};
    for (std::size_t i = 0; i < 4; ++i)
      v[i] = k == 0 ? reports[i].cost_density : k == 1 ? reports[i].battery_density : reports[i].avg_reg_capacity;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double span = *hi - *lo;
    for (std::size_t i = 0; i < 4; ++i) {
      if (span <= 0.0) {
        out[i][k] = 1.0;
        continue;
      }
      const double t = (v[i] - *lo) / span;
      out[i][k] = k == 2 ? t : 1.0 - t;
    }
  }
  return out;
}

}  // namespace evswap::scenarios
