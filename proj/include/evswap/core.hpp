#pragma once

// Shared domain types for the location-inventory-grid model.
//
// Units used throughout the library:
//   densities            km^-2
//   demand densities     demands h^-1 km^-2 (variances demands^2 h^-1 km^-2)
//   stocks               batteries km^-2
//   capacities           kW km^-2
//   cost densities       $ day^-1 km^-2
//   clearing prices      $ MW^-1 per period

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace evswap {

enum class ErrorCategory { parse, invalid_parameter, infeasible, io, usage };

inline std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::parse: return "parse_error";
    case ErrorCategory::invalid_parameter: return "invalid_parameter";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::io: return "io_error";
    case ErrorCategory::usage: return "usage_error";
  }
  return "error";
}

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

inline Error invalid(const std::string& what) { return {ErrorCategory::invalid_parameter, what}; }
inline Error infeasible(const std::string& what) { return {ErrorCategory::infeasible, what}; }

inline constexpr double kHoursPerDay = 24.0;

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw invalid(what);
}

inline void require_open_unit(double v, const char* key) {
  if (!(v > 0.0 && v < 1.0)) throw invalid(std::string(key) + " out of (0,1)");
}

}  // namespace detail

/// Per-period, per-scenario swap-demand densities.
///
/// Scenario n of period z carries a time share kappa(z, n); the shares of a
/// period sum to one. Aggregates are time-weighted means over periods and are
/// computed once at construction.
class DemandProfile {
public:
  static DemandProfile make(std::vector<std::vector<double>> kappa,
                            std::vector<std::vector<double>> mu_bar,
                            std::vector<double> sigma2_bar) {
    DemandProfile p;
    p.kappa_ = std::move(kappa);
    p.mu_bar_ = std::move(mu_bar);
    p.sigma2_bar_ = std::move(sigma2_bar);
    p.check_shape();
    p.compute_aggregates();
    return p;
  }

  /// Stationary profile: one scenario, the same density in every period.
  static DemandProfile uniform(double mu_bar, double sigma2_bar, std::size_t periods = 1) {
    return make(std::vector<std::vector<double>>(periods, std::vector<double>{1.0}),
                std::vector<std::vector<double>>(periods, std::vector<double>{mu_bar}),
                std::vector<double>(periods, sigma2_bar));
  }

  std::size_t periods() const { return kappa_.size(); }
  std::size_t scenarios() const { return kappa_.empty() ? 0 : kappa_.front().size(); }
  /// Hours per period; the profile always spans one day.
  double period_hours() const { return kHoursPerDay / static_cast<double>(periods()); }

  double kappa(std::size_t z, std::size_t n) const { return kappa_.at(z).at(n); }
  double mu_bar(std::size_t z, std::size_t n) const { return mu_bar_.at(z).at(n); }
  double sigma2_bar(std::size_t z) const { return sigma2_bar_.at(z); }

  /// Time-weighted mean demand density of period z.
  double period_mean(std::size_t z) const {
    double m = 0.0;
    for (std::size_t n = 0; n < scenarios(); ++n) m += kappa_[z][n] * mu_bar_[z][n];
    return m;
  }

  double mu_bar_overall() const { return mu_bar_overall_; }
  double sigma2_bar_overall() const { return sigma2_bar_overall_; }
  double sigma_bar_overall() const { return std::sqrt(sigma2_bar_overall_); }

  /// Sum over periods and scenarios of kappa * mu_bar * period length
  /// (swap demands per day per km^2).
  double daily_demand() const {
    double s = 0.0;
    for (std::size_t z = 0; z < periods(); ++z) s += period_mean(z);
    return s * period_hours();
  }

  /// Multiplies every mean by `mean_factor` and every variance by `var_factor`.
  DemandProfile scaled(double mean_factor, double var_factor) const {
    auto mu = mu_bar_;
    for (auto& row : mu)
      for (auto& v : row) v *= mean_factor;
    auto s2 = sigma2_bar_;
    for (auto& v : s2) v *= var_factor;
    return make(kappa_, std::move(mu), std::move(s2));
  }

  /// Re-checks the aggregation identity to 1e-12 relative.
  bool aggregates_consistent() const {
    const auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    double mu = 0.0, s2 = 0.0;
    for (std::size_t z = 0; z < periods(); ++z) {
      for (std::size_t n = 0; n < scenarios(); ++n) mu += kappa_[z][n] * mu_bar_[z][n];
      s2 += sigma2_bar_[z];
    }
    const double zc = static_cast<double>(periods());
    return close(mu / zc, mu_bar_overall_) && close(s2 / zc, sigma2_bar_overall_);
  }

private:
  void check_shape() const {
    detail::require(!kappa_.empty(), "demand profile has no periods");
    detail::require(mu_bar_.size() == kappa_.size() && sigma2_bar_.size() == kappa_.size(),
                    "demand profile arrays disagree on the number of periods");
    const std::size_t n = kappa_.front().size();
    detail::require(n >= 1, "demand profile has no scenarios");
    for (std::size_t z = 0; z < kappa_.size(); ++z) {
      detail::require(kappa_[z].size() == n && mu_bar_[z].size() == n,
                      "demand profile arrays disagree on the number of scenarios");
      double share = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        detail::require(kappa_[z][k] >= 0.0, "kappa must be nonnegative");
        detail::require(mu_bar_[z][k] >= 0.0 && std::isfinite(mu_bar_[z][k]),
                        "mu_bar must be nonnegative");
        share += kappa_[z][k];
      }
      detail::require(std::abs(share - 1.0) <= 1e-9,
                      "kappa of period " + std::to_string(z) + " does not sum to 1");
      detail::require(sigma2_bar_[z] >= 0.0 && std::isfinite(sigma2_bar_[z]),
                      "sigma2_bar must be nonnegative");
    }
  }

  void compute_aggregates() {
    double mu = 0.0, s2 = 0.0;
    for (std::size_t z = 0; z < periods(); ++z) {
      mu += period_mean(z);
      s2 += sigma2_bar_[z];
    }
    mu_bar_overall_ = mu / static_cast<double>(periods());
    sigma2_bar_overall_ = s2 / static_cast<double>(periods());
  }

  std::vector<std::vector<double>> kappa_;
  std::vector<std::vector<double>> mu_bar_;
  std::vector<double> sigma2_bar_;
  double mu_bar_overall_ = 0.0;
  double sigma2_bar_overall_ = 0.0;
};

/// Per-swapping-station hourly demand statistics, before conversion to
/// densities. Scenario 0 is peak, scenario 1 off-peak.
struct StationDemand {
  std::vector<double> mean;        // demands per hour per station
  std::vector<double> std_dev;     // per hour per station
  std::vector<int> peak_periods;   // periods billed at the peak electricity price

  StationDemand scaled(double s) const {
    StationDemand d = *this;
    const double sd_factor = std::sqrt(s);
    for (auto& m : d.mean) m *= s;
    for (auto& v : d.std_dev) v *= sd_factor;
    return d;
  }

  bool operator==(const StationDemand&) const = default;
};

/// Hourly swap demand observed at a single station: 5.68 (sd 3.71) from
/// 0:00 to 8:59 and 14.51 (sd 3.90) from 9:00 to 23:59. Peak electricity hours
/// are 8-10 a.m. and 3-8 p.m.
inline StationDemand baseline_station_demand() {
  StationDemand d;
  for (int z = 0; z < 24; ++z) {
    const bool night = z < 9;
    d.mean.push_back(night ? 5.68 : 14.51);
    d.std_dev.push_back(night ? 3.71 : 3.90);
  }
  d.peak_periods = {8, 9, 15, 16, 17, 18, 19};
  return d;
}

/// Converts per-station statistics to densities: mu_bar = mu * rho_s and
/// sigma2_bar = sigma^2 * rho_s.
inline DemandProfile make_profile(const StationDemand& d, double rho_s) {
  detail::require(rho_s > 0.0, "rho_s must be positive");
  detail::require(!d.mean.empty() && d.mean.size() == d.std_dev.size(),
                  "station_mean and station_std must have the same nonzero length");
  const std::size_t periods = d.mean.size();
  std::vector<std::vector<double>> kappa(periods, std::vector<double>{0.0, 1.0});
  for (int p : d.peak_periods) {
    detail::require(p >= 0 && static_cast<std::size_t>(p) < periods,
                    "peak_hours entry " + std::to_string(p) + " outside the period range");
    kappa[static_cast<std::size_t>(p)] = {1.0, 0.0};
  }
  std::vector<std::vector<double>> mu(periods);
  std::vector<double> s2(periods);
  for (std::size_t z = 0; z < periods; ++z) {
    detail::require(d.mean[z] >= 0.0 && d.std_dev[z] >= 0.0, "station demand must be nonnegative");
    mu[z] = {d.mean[z] * rho_s, d.mean[z] * rho_s};
    s2[z] = d.std_dev[z] * d.std_dev[z] * rho_s;
  }
  return DemandProfile::make(std::move(kappa), std::move(mu), std::move(s2));
}

inline constexpr double kBaselineRhoS = 0.04;

inline DemandProfile baseline_profile() { return make_profile(baseline_station_demand(), kBaselineRhoS); }

/// Physical, cost and service-level parameters. Defaults are the baseline
/// Beijing-calibrated values.
struct SystemParams {
  double rho_s = kBaselineRhoS;  // swapping stations km^-2
  double q_truck = 30.0;         // km h^-1
  double Q_cap = 30.0;           // batteries per truck / station stocking space
  double T_C = 0.78;             // h, full charge at lambda_C
  double lambda_C = 41.0;        // kW
  double lambda_S = 7.0;         // kW
  double B_C = 41.0 * 0.78;      // kWh per battery

  double c_C = 11.10;  // $/h per charging station
  double c_S = 4.46;   // $/h per swapping station (reported only)
  double c_I = 4.64;   // $/h per swapping station with on-site charging
  double c_T = 1.13;   // $/km
  double c_B = 0.10;   // $/h per battery
  double c_R = 0.27;   // $/h per battery in regulation
  std::vector<double> c_E = {0.223, 0.068};  // $/kWh per scenario (peak, off-peak)

  double eps_S = 0.03;
  double eps_C = 0.03;
  double eps_B = 0.03;
  double theta = 0.75;

  std::optional<double> r_B_cap;  // batteries km^-2; defaults to 2 x minimum r_B
  bool bernoulli_consistent_variance = false;

  /// Full-charge time at the on-site power lambda_S (energy per battery is
  /// fixed, so charge time scales inversely with power).
  double onsite_charge_time() const { return T_C * lambda_C / lambda_S; }

  double effective_rB_cap(double rB_min) const { return r_B_cap.value_or(2.0 * rB_min); }

  void validate() const {
    using detail::require;
    require(rho_s > 0.0, "rho_s must be positive");
    require(q_truck > 0.0, "q_truck must be positive");
    require(Q_cap >= 1.0, "Q_cap must be at least 1");
    require(T_C > 0.0, "T_C must be positive");
    require(lambda_S > 0.0, "lambda_S must be positive");
    require(lambda_C >= lambda_S, "lambda_C must be at least lambda_S");
    require(B_C > 0.0, "B_C must be positive");
    require(c_C >= 0.0, "c_C must be nonnegative");
    require(c_S >= 0.0, "c_S must be nonnegative");
    require(c_I >= 0.0, "c_I must be nonnegative");
    require(c_T >= 0.0, "c_T must be nonnegative");
    require(c_B > 0.0, "c_B must be positive");
    require(c_R >= c_B, "c_R must be at least c_B");
    require(!c_E.empty(), "c_E needs one price per scenario");
    for (double e : c_E) require(e >= 0.0, "c_E must be nonnegative");
    detail::require_open_unit(eps_S, "eps_S");
    detail::require_open_unit(eps_C, "eps_C");
    detail::require_open_unit(eps_B, "eps_B");
    require(theta > 0.0 && theta <= 1.0, "theta out of (0,1]");
    if (r_B_cap) require(*r_B_cap >= 0.0, "r_B_cap must be nonnegative");
  }

  bool operator==(const SystemParams&) const = default;
};

/// Centralized design variables at one location.
struct Decision {
  double rho_c = 0.0;  // charging stations km^-2
  double Q = 1.0;      // batteries per re-order

  void validate(const SystemParams& p) const {
    detail::require(rho_c > 0.0 && rho_c <= p.rho_s * (1.0 + 1e-12), "rho_c must lie in (0, rho_s]");
    detail::require(Q >= 1.0 && Q <= p.Q_cap * (1.0 + 1e-12), "Q must lie in [1, Q_cap]");
  }
};

/// Stock levels implied by a decision (all per km^2, except nu in batteries).
struct StockPlan {
  double R = 0.0;      // charging-station primary stock
  double r = 0.0;      // swapping-station re-order point
  double r_B = 0.0;    // decentralized spare stock
  double nu = std::numeric_limits<double>::infinity();
  double eps_BS = 0.0;
};

enum class Architecture { centralized, decentralized };

struct Configuration {
  Architecture architecture = Architecture::centralized;
  bool regulation = false;

  std::string name() const {
    std::string s = architecture == Architecture::centralized ? "centralized" : "decentralized";
    if (regulation) s += "+FR";
    return s;
  }
  bool operator==(const Configuration&) const = default;
};

inline std::array<Configuration, 4> all_configurations() {
  return {{{Architecture::decentralized, false},
           {Architecture::centralized, false},
           {Architecture::decentralized, true},
           {Architecture::centralized, true}}};
}

inline Configuration parse_configuration(std::string_view s) {
  for (const auto& c : all_configurations())
    if (c.name() == s) return c;
  throw Error(ErrorCategory::usage, "unknown configuration '" + std::string(s) + "'");
}

/// Cost terms in $ day^-1 km^-2. Income enters as a negative number.
struct CostBreakdown {
  double electricity = 0.0;
  double station_depreciation = 0.0;
  double battery_depreciation = 0.0;
  double transport = 0.0;
  double regulation_income = 0.0;

  double total() const {
    return electricity + station_depreciation + battery_depreciation + transport + regulation_income;
  }
};

struct MetricsReport {
  Configuration config;
  double cost_density = 0.0;      // $ day^-1 km^-2
  double battery_density = 0.0;   // batteries km^-2
  double avg_reg_capacity = 0.0;  // kW km^-2
  CostBreakdown decomposition;
  Decision decision;  // meaningful for centralized configurations
  StockPlan stocks;
};

}  // namespace evswap
