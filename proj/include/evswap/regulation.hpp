#pragma once

// Frequency-regulation market: mileage from AGC traces, the performance
// fraction eta_z, in-transit battery moments and capacity bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "evswap/core.hpp"
#include "evswap/geometry.hpp"
#include "evswap/normal.hpp"

namespace evswap::regulation {

/// AGC samples of one bidding period, uniformly spaced.
struct AgcTrace {
  int period = 0;
  std::vector<double> g;

  void validate() const {
    if (g.size() < 2)
      throw invalid("AGC trace of period " + std::to_string(period) + " has fewer than 2 samples");
    for (double v : g)
      if (!(std::abs(v) <= 1.0))
        throw invalid("AGC signal outside [-1, 1] in period " + std::to_string(period));
  }
};

inline double requested_mileage(const AgcTrace& trace) {
  trace.validate();
  double m = 0.0;
  for (std::size_t w = 1; w < trace.g.size(); ++w) m += std::abs(trace.g[w] - trace.g[w - 1]);
  return m;
}

/// Mileage followed by a resource whose output is clipped to [-eta, eta].
inline double fulfilled_mileage(const AgcTrace& trace, double eta) {
  trace.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw invalid("eta out of [0,1]");
  const auto clip = [eta](double v) { return std::clamp(v, -eta, eta); };
  double m = 0.0;
  double prev = clip(trace.g.front());
  for (std::size_t w = 1; w < trace.g.size(); ++w) {
    const double cur = clip(trace.g[w]);
    m += std::abs(cur - prev);
    prev = cur;
  }
  return m;
}

inline constexpr double kEtaTolerance = 1e-6;

/// Smallest eta whose clipped mileage reaches theta times the requested
/// mileage, by bisection. Returns the upper end of the final bracket, so the
/// requirement always holds at the returned value.
inline double eta_z(const AgcTrace& trace, double theta, double tol = kEtaTolerance) {
  if (!(theta > 0.0 && theta <= 1.0)) throw invalid("theta out of (0,1]");
  const double requested = requested_mileage(trace);
  if (requested == 0.0) return 0.0;
  const double target = theta * requested;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (fulfilled_mileage(trace, mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// Per-period clearing prices and performance fractions.
struct RegulationMarket {
  std::vector<double> prices;  // $ per MW per period
  std::vector<double> eta;
  double theta = 0.75;

  std::size_t periods() const { return prices.size(); }

  void validate() const {
    detail::require(!prices.empty(), "regulation market has no periods");
    detail::require(prices.size() == eta.size(), "price and eta tables disagree on the number of periods");
    for (double p : prices) detail::require(p >= 0.0 && std::isfinite(p), "clearing prices must be nonnegative");
    for (double e : eta) detail::require(e >= 0.0 && e <= 1.0, "eta must lie in [0,1]");
  }

  void validate_for(const DemandProfile& prof) const {
    validate();
    detail::require(periods() == prof.periods(),
                    "regulation market has " + std::to_string(periods()) + " periods, demand profile has " +
                        std::to_string(prof.periods()));
  }

  /// Derives eta from one trace per period; traces must cover periods
  /// 0..prices.size()-1.
  static RegulationMarket from_traces(const std::vector<AgcTrace>& traces, std::vector<double> prices,
                                      double theta) {
    RegulationMarket m;
    m.theta = theta;
    m.prices = std::move(prices);
    m.eta.assign(m.prices.size(), -1.0);
    for (const auto& t : traces) {
      if (t.period < 0 || static_cast<std::size_t>(t.period) >= m.prices.size())
        throw invalid("AGC period " + std::to_string(t.period) + " has no clearing price");
      m.eta[static_cast<std::size_t>(t.period)] = eta_z(t, theta);
    }
    for (std::size_t z = 0; z < m.eta.size(); ++z)
      if (m.eta[z] < 0.0) throw invalid("no AGC samples for period " + std::to_string(z));
    m.validate();
    return m;
  }
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Moments of the in-transit battery density L for a demand density mu_bar:
/// mean T^T mu_bar, variance T^T mu_bar (Q - T^T mu_bar), or with rho_s Q in
/// place of Q under the Bernoulli-consistent switch.
inline Moments in_transit_moments(double mu_bar, const Decision& d, const SystemParams& p) {
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double mean = tt * mu_bar;
  const double top = p.rho_s * d.Q;
  if (mean > top * (1.0 + 1e-12))
    throw infeasible("in-transit probability exceeds 1: T^T*mu_bar = " + std::to_string(mean) +
                     " > rho_s*Q = " + std::to_string(top));
  const double scale = p.bernoulli_consistent_variance ? top : d.Q;
  return {mean, std::max(0.0, mean * (scale - mean))};
}

inline Moments in_transit_moments(std::size_t z, const Decision& d, const SystemParams& p,
                                  const DemandProfile& prof) {
  return in_transit_moments(prof.period_mean(z), d, p);
}

struct Capacity {
  double value = 0.0;        // kW km^-2
  bool eta_capped = false;   // eta_z was zero and the bound was capped
};

inline constexpr double kEtaFloor = 1e-6;

inline Capacity divide_by_eta(double numerator, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw invalid("eta out of [0,1]");
  const double num = std::max(0.0, numerator);
  if (eta == 0.0) return {num / kEtaFloor, true};
  return {num / eta, false};
}

/// Available regulation power of the centralized system in period z before
/// division by eta_z.
inline double centralized_available_power(std::size_t z, const Decision& d, const StockPlan& s,
                                          const SystemParams& p, const DemandProfile& prof, double eps_B) {
  detail::require_open_unit(eps_B, "eps_B");
  const auto L = in_transit_moments(z, d, p, prof);
  return p.lambda_C * s.R + p.lambda_S * (s.r + p.rho_s * d.Q) -
         (p.lambda_C + p.lambda_S) * (L.mean + safety_factor(eps_B) * std::sqrt(L.variance));
}

inline Capacity centralized_capacity_bound(std::size_t z, const Decision& d, const StockPlan& s,
                                           const SystemParams& p, const DemandProfile& prof, double eta,
                                           double eps_B) {
  return divide_by_eta(centralized_available_power(z, d, s, p, prof, eps_B), eta);
}

inline Capacity centralized_capacity_bound(std::size_t z, const Decision& d, const StockPlan& s,
                                           const SystemParams& p, const DemandProfile& prof, double eta) {
  return centralized_capacity_bound(z, d, s, p, prof, eta, p.eps_B);
}

inline Capacity decentralized_capacity_bound(double r_B, const SystemParams& p, double eta) {
  detail::require(r_B >= 0.0, "r_B must be nonnegative");
  return divide_by_eta(p.lambda_S * r_B, eta);
}

/// Daily income in $ day^-1 km^-2 from bidding `capacity[z]` kW km^-2 in each
/// period. Periods with eta_z = 0 earn nothing.
inline double daily_income(const std::vector<Capacity>& capacity, const RegulationMarket& m) {
  detail::require(capacity.size() == m.periods(), "capacity and market periods disagree");
  double s = 0.0;
  for (std::size_t z = 0; z < capacity.size(); ++z)
    if (!capacity[z].eta_capped) s += m.prices[z] * capacity[z].value / 1000.0;
  return s;
}

/// Long-run average regulation power of the centralized system (kW km^-2).
inline double average_capacity(const Decision& d, const StockPlan& s, const SystemParams& p,
                               const DemandProfile& prof) {
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double base = p.lambda_C * s.R + p.lambda_S * (s.r + d.Q * p.rho_s);
  double total = 0.0;
  for (std::size_t z = 0; z < prof.periods(); ++z)
    for (std::size_t n = 0; n < prof.scenarios(); ++n)
      total += prof.kappa(z, n) *
               std::max(0.0, base - (p.lambda_C + p.lambda_S) * tt * prof.mu_bar(z, n));
  return total / static_cast<double>(prof.periods());
}

inline double average_capacity_decentralized(double r_B, const SystemParams& p) {
  detail::require(r_B >= 0.0, "r_B must be nonnegative");
  return p.lambda_S * r_B;
}

}  // namespace evswap::regulation
