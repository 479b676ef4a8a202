// evswap: command-line front end.
//
//   evswap eta      --agc FILE [--theta T] [--out DIR]
//   evswap optimize [--config INI] [--agc FILE --prices FILE] --architecture A --regulation on|off
//   evswap sweep    [--config INI] --agc FILE --prices FILE --axis demand_scale|power|battery_cost
//   evswap simulate [--config INI] --architecture A [--rho-c X --Q Y | --r-B Z] [--horizon H] [--seed S]
//   evswap report   [--config INI] --agc FILE --prices FILE [--scale 5]
//
// Failures print "error: <category>: <message>" on stderr.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evswap/cli.hpp"

namespace {

using namespace evswap;

void add_data(CLI::App* app, cli::Common& c, bool market) {
  app->add_option("--config", c.data.config, "INI parameter file (baseline when omitted)")->check(CLI::ExistingFile);
  if (market) {
    app->add_option("--agc", c.data.agc, "AGC CSV: timestamp,signal");
    app->add_option("--prices", c.data.prices, "price CSV: period,price_usd_per_mw");
  }
  app->add_option("--theta", c.data.theta, "mileage performance threshold");
  app->add_option("--out", c.out_dir, "output directory (prints the main table when omitted)");
}

void add_calibration(CLI::App* app, cli::CalibrationOptions& c) {
  app->add_option("--samples", c.samples, "Monte-Carlo samples for eps_BS calibration")->check(CLI::PositiveNumber);
  app->add_option("--calib-seed", c.seed, "seed for eps_BS calibration");
}

const std::map<std::string, Architecture> kArch = {{"centralized", Architecture::centralized},
                                                   {"decentralized", Architecture::decentralized}};
const std::map<std::string, bool> kOnOff = {{"on", true}, {"off", false}};

std::vector<double> parse_points(const std::string& text) {
  std::vector<double> v;
  for (auto part : io::split(text)) {
    double x;
    if (!io::parse_double(part, x)) throw Error(ErrorCategory::usage, "--points: not a number '" + std::string(part) + "'");
    v.push_back(x);
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Location-inventory-grid model for battery swapping networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", report::kVersion);

  std::vector<std::string> args(argv + 1, argv + argc);

  cli::EtaOptions eta;
  auto* s_eta = app.add_subcommand("eta", "per-period eta table from an AGC trace");
  add_data(s_eta, eta.common, true);

  cli::OptimizeOptions optz;
  std::string opt_reg = "off";
  auto* s_opt = app.add_subcommand("optimize", "optimal decision for one configuration");
  add_data(s_opt, optz.common, true);
  s_opt->add_option("--architecture", optz.architecture, "centralized or decentralized")
      ->transform(CLI::CheckedTransformer(kArch));
  s_opt->add_option("--regulation", opt_reg, "on or off")->check(CLI::IsMember({"on", "off"}));
  s_opt->add_option("--scale", optz.scale, "demand scale");
  s_opt->add_option("--eps-BS", optz.eps_BS, "decentralized stockout probability (calibrated when omitted)");
  s_opt->add_flag("--surface", optz.surface, "also write the (rho_c, Q) sensitivity surface");
  add_calibration(s_opt, optz.calib);

  cli::SweepOptions sw;
  std::string sw_axis = "demand_scale", sw_points, sw_configs;
  auto* s_sw = app.add_subcommand("sweep", "metrics of every configuration along one axis");
  add_data(s_sw, sw.common, true);
  s_sw->add_option("--axis", sw_axis, "demand_scale, power or battery_cost");
  s_sw->add_option("--points", sw_points, "comma-separated axis values");
  s_sw->add_option("--configs", sw_configs, "comma-separated configurations (default all four)");
  add_calibration(s_sw, sw.calib);

  cli::SimulateOptions sim;
  std::string sim_model = "gaussian", sim_rates = "stationary";
  bool no_snap = false;
  auto* s_sim = app.add_subcommand("simulate", "discrete-event simulation at a decision");
  add_data(s_sim, sim.common, false);
  s_sim->add_option("--architecture", sim.architecture, "centralized or decentralized")
      ->transform(CLI::CheckedTransformer(kArch));
  s_sim->add_option("--scale", sim.scale, "demand scale");
  s_sim->add_option("--rho-c", sim.rho_c, "charging stations per km^2 (optimum when omitted)");
  s_sim->add_option("--Q", sim.Q, "re-order quantity (optimum when omitted)");
  s_sim->add_option("--r-B", sim.r_B, "decentralized spare stock per km^2 (formula minimum when omitted)");
  s_sim->add_option("--eps-BS", sim.eps_BS, "decentralized stockout probability (calibrated when omitted)");
  s_sim->add_flag("--no-snap", no_snap, "keep rho_c as given instead of rounding to whole districts");
  s_sim->add_option("--stations", sim.stations, "decentralized stations to simulate")->check(CLI::PositiveNumber);
  s_sim->add_flag("--in-transit", sim.in_transit, "also measure in-transit battery moments");
  s_sim->add_option("--horizon", sim.sim.horizon, "simulated hours including warmup");
  s_sim->add_option("--warmup", sim.sim.warmup, "discarded hours");
  s_sim->add_option("--seed", sim.sim.seed, "random seed");
  s_sim->add_option("--model", sim_model, "gaussian or compound_poisson")
      ->check(CLI::IsMember({"gaussian", "compound_poisson"}));
  s_sim->add_option("--rates", sim_rates, "stationary or hourly")->check(CLI::IsMember({"stationary", "hourly"}));
  s_sim->add_option("--area", sim.sim.area, "simulated area in km^2 (one district when 0)");
  s_sim->add_option("--dt", sim.sim.sample_dt, "decentralized grid step in hours");
  s_sim->add_option("--batches", sim.sim.batches, "batch means for standard errors");
  add_calibration(s_sim, sim.calib);

  cli::ReportOptions rep;
  auto* s_rep = app.add_subcommand("report", "four-configuration comparison with surfaces");
  add_data(s_rep, rep.common, true);
  s_rep->add_option("--scale", rep.scale, "demand scale");
  add_calibration(s_rep, rep.calib);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << to_string(ErrorCategory::usage) << ": " << e.what() << "\n";
    return cli::exit_code(ErrorCategory::usage);
  }

  try {
    if (s_eta->parsed()) {
      eta.common.argv = args;
      return cli::cmd_eta(eta, std::cout);
    }
    if (s_opt->parsed()) {
      optz.common.argv = args;
      optz.regulation = kOnOff.at(opt_reg);
      return cli::cmd_optimize(optz, std::cout);
    }
    if (s_sw->parsed()) {
      sw.common.argv = args;
      sw.axis = scenarios::parse_axis(sw_axis);
      if (!sw_points.empty()) sw.points = parse_points(sw_points);
      if (!sw_configs.empty())
        for (auto part : io::split(sw_configs)) sw.configs.push_back(parse_configuration(io::trim(part)));
      return cli::cmd_sweep(sw, std::cout);
    }
    if (s_sim->parsed()) {
      sim.common.argv = args;
      sim.snap = !no_snap;
      sim.sim.model = sim_model == "gaussian" ? sim::DemandModel::gaussian : sim::DemandModel::compound_poisson;
      sim.sim.rates = sim_rates == "stationary" ? sim::RateMode::stationary : sim::RateMode::hourly;
      return cli::cmd_simulate(sim, std::cout);
    }
    if (s_rep->parsed()) {
      rep.common.argv = args;
      return cli::cmd_report(rep, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.category()) << ": " << e.what() << "\n";
    return cli::exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
