#pragma once

// Command implementations behind the evswap tool. Each command loads its
// inputs, writes manifest.json into the output directory before any result
// file, and prints the primary table to `out` when no directory is given.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evswap/config.hpp"
#include "evswap/core.hpp"
#include "evswap/econ.hpp"
#include "evswap/market_io.hpp"
#include "evswap/optimizer.hpp"
#include "evswap/report.hpp"
#include "evswap/scenarios.hpp"
#include "evswap/simkit.hpp"

namespace evswap::cli {

namespace fs = std::filesystem;

inline int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::parse: return 3;
    case ErrorCategory::invalid_parameter: return 4;
    case ErrorCategory::infeasible: return 5;
    case ErrorCategory::io: return 6;
  }
  return 1;
}

struct DataOptions {
  std::string config;  // INI file; empty means baseline
  std::string agc;
  std::string prices;
  std::optional<double> theta;
};

struct Loaded {
  config::Inputs inputs;
  std::optional<regulation::RegulationMarket> market;
  std::vector<std::string> files;

  const regulation::RegulationMarket* market_ptr() const { return market ? &*market : nullptr; }
};

inline Loaded load_data(const DataOptions& o, bool need_market) {
  Loaded l;
  if (!o.config.empty()) {
    l.inputs = config::load_file(o.config);
    l.files.push_back(o.config);
  }
  if (o.theta) {
    l.inputs.params.theta = *o.theta;
    l.inputs.params.validate();
  }
  if (need_market && o.prices.empty())
    throw Error(ErrorCategory::usage, "regulation needs a price file: pass --prices");
  if (need_market && o.agc.empty()) throw Error(ErrorCategory::usage, "regulation needs an AGC file: pass --agc");
  if (!o.agc.empty() != !o.prices.empty())
    throw Error(ErrorCategory::usage, "--agc and --prices must be given together");
  if (!o.agc.empty()) {
    l.market = io::load_market(o.agc, o.prices, l.inputs.params.theta);
    l.files.push_back(o.agc);
    l.files.push_back(o.prices);
  }
  return l;
}

/// Inputs at demand scale s (s = 1 leaves them unchanged).
inline std::pair<SystemParams, StationDemand> at_scale(const config::Inputs& in, double s) {
  detail::require(s > 0.0 && std::isfinite(s), "--scale must be positive");
  return scenarios::apply_axis(scenarios::Axis::demand_scale, s, in.params, in.demand);
}

class Output {
 public:
  Output(std::string dir, std::ostream& out) : dir_(std::move(dir)), out_(out) {}

  bool to_dir() const { return !dir_.empty(); }

  void begin(report::RunManifest m, const Loaded& l, const std::string& options) {
    m.inputs = l.files;
    m.output_dir = dir_;
    m.compute_hash(config::serialize(l.inputs), options);
    if (to_dir()) report::begin_output(dir_, m);
  }

  /// Writes `name` into the directory, or prints it when `primary` and no
  /// directory was given.
  void emit(const std::string& name, const std::string& text, bool primary = false) {
    if (to_dir())
      report::write_file(fs::path(dir_) / name, text);
    else if (primary)
      out_ << text;
  }

 private:
  std::string dir_;
  std::ostream& out_;
};

struct Common {
  DataOptions data;
  std::string out_dir;
  std::vector<std::string> argv;
};

inline report::RunManifest manifest(const char* command, const Common& c, std::uint64_t seed) {
  report::RunManifest m;
  m.command = command;
  m.arguments = c.argv;
  m.seed = seed;
  return m;
}

inline std::string options_string(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + ";";
  return s;
}

// ---------------------------------------------------------------------------

struct EtaOptions {
  Common common;
};

inline int cmd_eta(const EtaOptions& o, std::ostream& out) {
  if (o.common.data.agc.empty()) throw Error(ErrorCategory::usage, "eta needs --agc");
  Loaded l;
  if (!o.common.data.config.empty()) {
    l.inputs = config::load_file(o.common.data.config);
    l.files.push_back(o.common.data.config);
  }
  const double theta = o.common.data.theta.value_or(l.inputs.params.theta);
  detail::require_open_unit(theta, "theta");
  const auto traces = io::read_agc_file(o.common.data.agc);
  l.files.push_back(o.common.data.agc);
  Output w(o.common.out_dir, out);
  w.begin(manifest("eta", o.common, 0), l, options_string({{"theta", report::num(theta)}}));
  w.emit("eta.csv", report::eta_csv(report::eta_table(traces, theta)), true);
  return 0;
}

// ---------------------------------------------------------------------------

struct CalibrationOptions {
  std::size_t samples = scenarios::CalibrationSpec{}.samples;
  std::uint64_t seed = scenarios::CalibrationSpec{}.seed;

  scenarios::CalibrationSpec spec() const { return {samples, seed}; }
  std::string str() const { return "samples=" + std::to_string(samples) + ";seed=" + std::to_string(seed) + ";"; }
};

struct OptimizeOptions {
  Common common;
  Architecture architecture = Architecture::centralized;
  bool regulation = false;
  double scale = 1.0;
  std::optional<double> eps_BS;
  CalibrationOptions calib;
  bool surface = false;
};

/// eps_BS from the regulation-off centralized optimum unless given.
inline double resolve_eps_BS(std::optional<double> given, const SystemParams& p, const DemandProfile& prof,
                             const regulation::RegulationMarket* market, const CalibrationOptions& calib) {
  if (given) {
    detail::require_open_unit(*given, "eps_BS");
    return *given;
  }
  const auto off = opt::optimize_centralized(p, prof, market, false);
  return scenarios::calibrate_eps_BS(off.decision, off.stocks, p, prof, calib.samples, calib.seed).value;
}

inline int cmd_optimize(const OptimizeOptions& o, std::ostream& out) {
  const auto l = load_data(o.common.data, o.regulation);
  const auto [p, demand] = at_scale(l.inputs, o.scale);
  const auto prof = make_profile(demand, p.rho_s);
  const Configuration c{o.architecture, o.regulation};
  Output w(o.common.out_dir, out);
  w.begin(manifest("optimize", o.common, o.calib.seed), l,
          options_string({{"config", c.name()},
                          {"scale", report::num(o.scale)},
                          {"eps_BS", o.eps_BS ? report::num(*o.eps_BS) : ""},
                          {"surface", o.surface ? "1" : "0"}}) +
              o.calib.str());
  if (o.architecture == Architecture::centralized) {
    const auto sol = opt::optimize_centralized(p, prof, l.market_ptr(), o.regulation);
    w.emit("solution.csv", report::solution_csv(c, sol), true);
    if (o.surface)
      w.emit("surface.csv", report::surface_csv(opt::sensitivity_surface(p, prof, l.market_ptr(), o.regulation)));
  } else {
    const double eps = scenarios::usable_eps(resolve_eps_BS(o.eps_BS, p, prof, l.market_ptr(), o.calib));
    const auto ch = opt::choose_decentralized_stock(p, prof, l.market_ptr(), o.regulation, eps);
    const auto ev = econ::evaluate_decentralized(p, prof, l.market_ptr(), eps, o.regulation, ch.r_B);
    w.emit("solution.csv", report::decentralized_solution_csv(c, ch, ev, eps), true);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepOptions {
  Common common;
  scenarios::Axis axis = scenarios::Axis::demand_scale;
  std::vector<double> points;  // empty means the axis default
  std::vector<Configuration> configs;  // empty means all four
  CalibrationOptions calib;
};

inline std::vector<double> default_points(scenarios::Axis a) {
  switch (a) {
    case scenarios::Axis::demand_scale: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    case scenarios::Axis::power: return {0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
    case scenarios::Axis::battery_cost: return {0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2};
  }
  return {};
}

inline int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  scenarios::SweepSpec spec;
  spec.axis = o.axis;
  spec.points = o.points.empty() ? default_points(o.axis) : o.points;
  if (o.configs.empty()) {
    const auto all = all_configurations();
    spec.configs.assign(all.begin(), all.end());
  } else {
    spec.configs = o.configs;
  }
  spec.validate();
  const auto l = load_data(o.common.data, scenarios::needs_regulation(spec.configs));
  std::string names;
  for (const auto& c : spec.configs) names += c.name() + " ";
  Output w(o.common.out_dir, out);
  w.begin(manifest("sweep", o.common, o.calib.seed), l,
          options_string({{"axis", std::string(scenarios::to_string(o.axis))},
                          {"points", config::format_list(spec.points)},
                          {"configs", names}}) +
              o.calib.str());
  const auto rows = scenarios::sweep(spec, l.inputs.params, l.inputs.demand, l.market_ptr(), o.calib.spec());
  w.emit("sweep.csv", report::sweep_csv(rows), true);
  for (const auto& [name, svg] : report::sweep_charts(rows)) w.emit(name, svg);
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  Common common;
  Architecture architecture = Architecture::centralized;
  double scale = 1.0;
  std::optional<double> rho_c;
  std::optional<double> Q;
  std::optional<double> r_B;
  std::optional<double> eps_BS;
  bool snap = true;  // round rho_c so each district holds a whole number of stations
  std::size_t stations = 1;  // decentralized stations simulated
  bool in_transit = false;
  sim::SimConfig sim;
  CalibrationOptions calib;
};

inline int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  o.sim.validate();
  const auto l = load_data(o.common.data, false);
  const auto [p, demand] = at_scale(l.inputs, o.scale);
  const auto prof = make_profile(demand, p.rho_s);
  const auto n = report::num;
  Output w(o.common.out_dir, out);
  const auto opt_str = [](const std::optional<double>& v) { return v ? report::num(*v) : std::string(); };
  w.begin(manifest("simulate", o.common, o.sim.seed), l,
          options_string({{"architecture", o.architecture == Architecture::centralized ? "c" : "d"},
                          {"scale", n(o.scale)},
                          {"rho_c", opt_str(o.rho_c)},
                          {"Q", opt_str(o.Q)},
                          {"r_B", opt_str(o.r_B)},
                          {"eps_BS", opt_str(o.eps_BS)},
                          {"snap", o.snap ? "1" : "0"},
                          {"stations", std::to_string(o.stations)},
                          {"in_transit", o.in_transit ? "1" : "0"},
                          {"horizon", n(o.sim.horizon)},
                          {"warmup", n(o.sim.warmup)},
                          {"seed", std::to_string(o.sim.seed)},
                          {"model", o.sim.model == sim::DemandModel::gaussian ? "gaussian" : "compound_poisson"},
                          {"rates", o.sim.rates == sim::RateMode::stationary ? "stationary" : "hourly"},
                          {"area", n(o.sim.area)},
                          {"dt", n(o.sim.sample_dt)},
                          {"batches", std::to_string(o.sim.batches)}}) +
              o.calib.str());

  std::vector<std::pair<std::string, double>> targets;
  if (o.architecture == Architecture::centralized) {
    Decision d;
    if (o.rho_c && o.Q) {
      d = {*o.rho_c, *o.Q};
    } else {
      const auto sol = opt::optimize_centralized(p, prof, nullptr, false);
      d = {o.rho_c.value_or(sol.decision.rho_c), o.Q.value_or(sol.decision.Q)};
    }
    if (o.snap) d.rho_c = sim::snap_rho_c(d.rho_c, p.rho_s);
    d.validate(p);
    const auto s = inventory::centralized_stock_plan(d, p, prof);
    const auto stats = sim::simulate_centralized(d, s, p, prof, o.sim);
    const auto dm = sim::expected_deficit(d, p, prof);
    targets = {{"swap_stockout", p.eps_S},
               {"charge_stockout", p.eps_C},
               {"deficit_mean", dm.mean},
               {"deficit_variance", dm.variance},
               {"rho_c", d.rho_c},
               {"Q", d.Q},
               {"R", s.R},
               {"r", s.r}};
    w.emit("simstats.csv", report::simstats_csv(stats, targets), true);
    if (o.in_transit) w.emit("in_transit.csv", report::in_transit_csv(sim::measure_in_transit(d, p, prof, o.sim)));
  } else {
    if (o.in_transit) throw Error(ErrorCategory::usage, "--in-transit applies to the centralized architecture");
    const double eps = scenarios::usable_eps(resolve_eps_BS(o.eps_BS, p, prof, nullptr, o.calib));
    const double r_B = o.r_B.value_or(inventory::decentralized_stock(p, prof, eps));
    detail::require(r_B >= 0.0, "r_B must be nonnegative");
    const auto stats = sim::simulate_decentralized(r_B, p, prof, o.sim, o.stations);
    targets = {{"decentral_stockout", eps}, {"r_B", r_B}};
    w.emit("simstats.csv", report::simstats_csv(stats, targets), true);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportOptions {
  Common common;
  double scale = 5.0;
  CalibrationOptions calib;
};

/// All four configurations at one demand scale: metrics, radar scores,
/// sensitivity surfaces and the eta table.
inline int cmd_report(const ReportOptions& o, std::ostream& out) {
  const auto l = load_data(o.common.data, true);
  const auto [p, demand] = at_scale(l.inputs, o.scale);
  const auto prof = make_profile(demand, p.rho_s);
  Output w(o.common.out_dir, out);
  w.begin(manifest("report", o.common, o.calib.seed), l,
          options_string({{"scale", report::num(o.scale)}}) + o.calib.str());
  const auto all = all_configurations();
  const std::vector<Configuration> configs(all.begin(), all.end());
  const auto res = scenarios::run_pipeline(p, prof, l.market_ptr(), configs, o.calib.spec());
  std::array<MetricsReport, 4> four;
  std::copy(res.reports.begin(), res.reports.end(), four.begin());
  w.emit("metrics.csv", report::metrics_csv(res.reports), true);
  w.emit("radar.csv", report::radar_csv(four));
  w.emit("surface_off.csv", report::surface_csv(opt::sensitivity_surface(p, prof, l.market_ptr(), false)));
  w.emit("surface_on.csv", report::surface_csv(opt::sensitivity_surface(p, prof, l.market_ptr(), true)));
  w.emit("eta.csv", report::eta_csv(report::eta_table(io::read_agc_file(o.common.data.agc), p.theta)));
  return 0;
}

}  // namespace evswap::cli
