#pragma once

// Stock levels under the (r, Q) policy: deficit variance phi(Q), charging
// station primary stock R, swapping-station re-order point r and the
// decentralized spare stock r_B. Every stock is clamped at zero.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "evswap/core.hpp"
#include "evswap/geometry.hpp"
#include "evswap/normal.hpp"

namespace evswap::inventory {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Two-branch deficit variance. The small-Q branch is
/// small_const + small_quad * (Q^2 - 1); the large-Q branch is
/// large_lin * Q - large_const. `nu` separates them.
struct PhiPieces {
  double small_const = 0.0;
  double small_quad = 0.0;
  double large_lin = 0.0;
  double large_const = 0.0;
  double nu = kInf;

  double small_branch(double Q) const { return small_const + small_quad * (Q * Q - 1.0); }
  double large_branch(double Q) const { return large_lin * Q - large_const; }

  /// Branch selected by Q, clamped at zero (the large branch turns negative
  /// for Q below the lead-time demand).
  double operator()(double Q) const {
    if (Q < 0.0) throw invalid("phi: negative Q");
    return std::max(0.0, Q <= nu ? small_branch(Q) : large_branch(Q));
  }
};

/// Smaller positive root of Q^2/6 - delta*mu*Q + (delta*sigma2 + (delta*mu)^2 - 1/6) = 0,
/// the per-station branch-equality condition; +inf when no positive root
/// exists or when mu = 0.
inline double breakpoint_per_station(double delta, double mu, double sigma2) {
  if (mu <= 0.0) return kInf;
  const double dm = delta * mu;
  const double a = 1.0 / 6.0;
  const double b = -dm;
  const double c = delta * sigma2 + dm * dm - 1.0 / 6.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kInf;
  const double q = -0.5 * (b - std::sqrt(disc));  // b < 0, so q > 0
  const double hi = q / a;
  const double lo = c / q;
  if (lo > 0.0) return lo;
  if (hi > 0.0) return hi;
  return kInf;
}

/// Per-station deficit variance for window delta, station mean mu and
/// variance sigma2.
inline PhiPieces phi_pieces_per_station(double delta, double mu, double sigma2) {
  PhiPieces p;
  p.small_const = delta * sigma2;
  p.small_quad = 1.0 / 6.0;
  p.large_lin = delta * mu;
  p.large_const = delta * mu * delta * mu;
  p.nu = breakpoint_per_station(delta, mu, sigma2);
  return p;
}

/// Replenishment window Delta = 2 T^T + T^C.
inline double replenishment_window(double rho_c, const SystemParams& p) {
  return 2.0 * geometry::one_way_travel_time(rho_c, p.q_truck) + p.T_C;
}

/// Density form of the deficit variance, per charging station:
/// the per-station form scaled by rho_s / rho_c stations per district.
inline PhiPieces phi_pieces(double rho_c, const SystemParams& p, const DemandProfile& prof) {
  detail::require(rho_c > 0.0, "rho_c must be positive");
  const double delta = replenishment_window(rho_c, p);
  const double mu = prof.mu_bar_overall();
  const double s2 = prof.sigma2_bar_overall();
  PhiPieces f;
  f.small_const = s2 / rho_c * delta;
  f.small_quad = p.rho_s / (6.0 * rho_c);
  f.large_lin = delta * mu / rho_c;
  f.large_const = delta * delta * mu * mu / (p.rho_s * rho_c);
  f.nu = breakpoint_per_station(delta, mu / p.rho_s, s2 / p.rho_s);
  return f;
}

inline double phi(double Q, double rho_c, const SystemParams& p, const DemandProfile& prof) {
  return phi_pieces(rho_c, p, prof)(Q);
}

inline double breakpoint_nu(double rho_c, const SystemParams& p, const DemandProfile& prof) {
  return phi_pieces(rho_c, p, prof).nu;
}

/// Minimum aggregate primary stock of charging stations R (per km^2) meeting
/// stockout probability eps_C.
inline double primary_stock(const Decision& d, const SystemParams& p, const DemandProfile& prof,
                            double eps_C) {
  detail::require_open_unit(eps_C, "eps_C");
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double mean = (tt + p.T_C) * prof.mu_bar_overall() + d.Q * p.rho_s;
  const double safety = safety_factor(eps_C) * std::sqrt(phi(d.Q, d.rho_c, p, prof)) * d.rho_c;
  return std::max(0.0, mean + safety);
}

inline double primary_stock(const Decision& d, const SystemParams& p, const DemandProfile& prof) {
  return primary_stock(d, p, prof, p.eps_C);
}

/// Minimum aggregate re-order point of swapping stations r (per km^2)
/// meeting stockout probability eps_S over the lead time T^T.
inline double reorder_point(double rho_c, const SystemParams& p, const DemandProfile& prof,
                            double eps_S) {
  detail::require_open_unit(eps_S, "eps_S");
  const double tt = geometry::one_way_travel_time(rho_c, p.q_truck);
  const double raw = tt * prof.mu_bar_overall() - p.rho_s +
                     safety_factor(eps_S) * std::sqrt(tt * p.rho_s) * prof.sigma_bar_overall();
  return std::max(0.0, raw);
}

inline double reorder_point(double rho_c, const SystemParams& p, const DemandProfile& prof) {
  return reorder_point(rho_c, p, prof, p.eps_S);
}

/// Minimum decentralized spare stock r_B (per km^2) for on-site charging
/// time `charge_time` and stockout probability eps_BS.
inline double decentralized_stock(double charge_time, const SystemParams& p, const DemandProfile& prof,
                                  double eps_BS) {
  detail::require_open_unit(eps_BS, "eps_BS");
  detail::require(charge_time > 0.0, "charge time must be positive");
  const double raw = charge_time * prof.mu_bar_overall() - p.rho_s +
                     safety_factor(eps_BS) * std::sqrt(charge_time * p.rho_s) * prof.sigma_bar_overall();
  return std::max(0.0, raw);
}

/// r_B at the on-site charging power lambda_S.
inline double decentralized_stock(const SystemParams& p, const DemandProfile& prof, double eps_BS) {
  return decentralized_stock(p.onsite_charge_time(), p, prof, eps_BS);
}

inline StockPlan centralized_stock_plan(const Decision& d, const SystemParams& p, const DemandProfile& prof) {
  StockPlan s;
  s.R = primary_stock(d, p, prof);
  s.r = reorder_point(d.rho_c, p, prof);
  s.nu = breakpoint_nu(d.rho_c, p, prof);
  return s;
}

}  // namespace evswap::inventory
