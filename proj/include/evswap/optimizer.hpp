#pragma once

// Two-dimensional search over (rho_c, Q): a coarse log/linear grid followed
// by alternating golden-section line searches. Infeasible points evaluate to
// +inf.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "evswap/core.hpp"
#include "evswap/econ.hpp"
#include "evswap/inventory.hpp"
#include "evswap/regulation.hpp"

namespace evswap::opt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
struct LineMin {
  T x{};
  double f = kInf;
};

/// Golden-section minimization of f on [a, b]. The endpoints are evaluated
/// too, and the best point seen is returned.
template <class F>
LineMin<double> golden_section(F&& f, double a, double b, double xtol, int max_iter = 200) {
  if (b < a) std::swap(a, b);
  constexpr double R = 0.6180339887498949;
  LineMin<double> best{a, f(a)};
  const auto keep = [&best](double x, double fx) {
    if (fx < best.f) best = {x, fx};
  };
  if (b == a) return best;
  keep(b, f(b));
  double x1 = b - R * (b - a), x2 = a + R * (b - a);
  double f1 = f(x1), f2 = f(x2);
  keep(x1, f1);
  keep(x2, f2);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - R * (b - a);
      f1 = f(x1);
      keep(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + R * (b - a);
      f2 = f(x2);
      keep(x2, f2);
    }
  }
  return best;
}

struct SearchSpec {
  double rho_lo = 1e-5;
  double rho_hi = 0.0;  // 0 means rho_s
  double Q_lo = 1.0;
  double Q_hi = 0.0;    // 0 means Q_cap
  std::size_t grid_rho = 40;
  std::size_t grid_Q = 40;
  double tolerance = 1e-4;  // relative improvement on the objective
  int max_rounds = 50;

  SearchSpec resolved(const SystemParams& p) const {
    SearchSpec s = *this;
    if (s.rho_hi <= 0.0) s.rho_hi = p.rho_s;
    if (s.Q_hi <= 0.0) s.Q_hi = p.Q_cap;
    s.rho_hi = std::min(s.rho_hi, p.rho_s);
    s.Q_hi = std::min(s.Q_hi, p.Q_cap);
    s.Q_lo = std::max(s.Q_lo, 1.0);
    return s;
  }

  void validate() const {
    detail::require(rho_lo > 0.0 && rho_hi >= rho_lo, "search range for rho_c is empty");
    detail::require(Q_lo >= 1.0 && Q_hi >= Q_lo, "search range for Q is empty");
    detail::require(grid_rho >= 2 && grid_Q >= 2, "coarse grid needs at least 2 points per axis");
    detail::require(tolerance > 0.0, "tolerance must be positive");
  }
};

/// Cost density of a centralized decision, +inf where the decision is
/// infeasible.
class CentralizedObjective {
public:
  CentralizedObjective(const SystemParams& p, const DemandProfile& prof, const regulation::RegulationMarket* market,
                       bool regulation_on)
      : p_(p), prof_(prof), market_(market), reg_(regulation_on) {
    p_.validate();
    if (reg_) econ::require_market(market_, prof_);
  }

  double operator()(double rho_c, double Q) const {
    ++evaluations_;
    try {
      return econ::centralized_cost_density({rho_c, Q}, p_, prof_, market_, reg_).total();
    } catch (const Error& e) {
      if (e.category() == ErrorCategory::infeasible) return kInf;
      throw;
    }
  }

  double nu(double rho_c) const { return inventory::breakpoint_nu(rho_c, p_, prof_); }
  std::size_t evaluations() const { return evaluations_; }

private:
  SystemParams p_;
  DemandProfile prof_;
  const regulation::RegulationMarket* market_;
  bool reg_;
  mutable std::size_t evaluations_ = 0;
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

struct CentralizedSolution {
  Decision decision;
  StockPlan stocks;
  CostBreakdown cost;
  double objective = kInf;
  double coarse_min = kInf;
  Decision rounded;           // Q rounded to the nearest feasible integer
  double rounded_objective = kInf;
  std::size_t evaluations = 0;
  int rounds = 0;
};

/// Minimizes f(rho_c, Q) given as a callable plus the breakpoint function.
template <class F, class Nu>
CentralizedSolution minimize_2d(F&& f, Nu&& nu, const SearchSpec& s) {
  s.validate();
  CentralizedSolution sol;
  const auto rhos = log_grid(s.rho_lo, s.rho_hi, s.grid_rho);
  const auto qs = linear_grid(s.Q_lo, s.Q_hi, s.grid_Q);
  double best = kInf;
  double br = rhos.front(), bq = qs.front();
  for (double r : rhos)
    for (double q : qs) {
      const double v = f(r, q);
      if (v < best) {
        best = v;
        br = r;
        bq = q;
      }
    }
  if (!std::isfinite(best)) throw infeasible("no feasible (rho_c, Q) on the coarse grid");
  sol.coarse_min = best;

  const double ulo = std::log(s.rho_lo), uhi = std::log(s.rho_hi);
  const double uxtol = 1e-10 * std::max(1.0, uhi - ulo);
  const double qxtol = 1e-10 * std::max(1.0, s.Q_hi);
  for (int round = 0; round < s.max_rounds; ++round) {
    sol.rounds = round + 1;
    const double before = best;

    const double q_fixed = bq;
    const auto line_rho = golden_section([&](double u) { return f(std::exp(u), q_fixed); }, ulo, uhi, uxtol);
    if (line_rho.f < best) {
      best = line_rho.f;
      br = std::exp(line_rho.x);
    }

    const double r_fixed = br;
    const auto fq = [&](double q) { return f(r_fixed, q); };
    const double split = std::clamp(nu(r_fixed), s.Q_lo, s.Q_hi);
    for (const auto& [a, b] : {std::pair{s.Q_lo, split}, std::pair{split, s.Q_hi}}) {
      if (b <= a) continue;
      const auto line_q = golden_section(fq, a, b, qxtol);
      if (line_q.f < best) {
        best = line_q.f;
        bq = line_q.x;
      }
    }

    if (before - best <= s.tolerance * std::abs(best)) break;
  }
  sol.decision = {br, bq};
  sol.objective = best;
  if (!(sol.objective <= sol.coarse_min)) throw std::logic_error("refinement worsened the coarse optimum");

  const double lo_int = std::ceil(s.Q_lo), hi_int = std::floor(s.Q_hi);
  if (lo_int <= hi_int) {
    double q_near = std::clamp(std::round(bq), lo_int, hi_int);
    double q_other = q_near <= bq ? std::min(q_near + 1.0, hi_int) : std::max(q_near - 1.0, lo_int);
    for (double q : {q_near, q_other}) {
      const double v = f(br, q);
      if (std::isfinite(v)) {
        sol.rounded = {br, q};
        sol.rounded_objective = v;
        break;
      }
    }
  }
  return sol;
}

inline CentralizedSolution optimize_centralized(const SystemParams& p, const DemandProfile& prof,
                                                const regulation::RegulationMarket* market, bool regulation_on,
                                                const SearchSpec& spec = {}) {
  const CentralizedObjective obj(p, prof, market, regulation_on);
  const SearchSpec s = spec.resolved(p);
  auto sol = minimize_2d([&](double r, double q) { return obj(r, q); }, [&](double r) { return obj.nu(r); }, s);
  const auto ev = econ::evaluate_centralized(sol.decision, p, prof, market, regulation_on);
  sol.stocks = ev.stocks;
  sol.cost = ev.cost;
  sol.evaluations = obj.evaluations();
  return sol;
}

/// Exhaustive grid minimum, used as a reference.
inline std::pair<Decision, double> brute_force(const SystemParams& p, const DemandProfile& prof,
                                               const regulation::RegulationMarket* market, bool regulation_on,
                                               std::size_t n_rho, std::size_t n_Q, const SearchSpec& spec = {}) {
  const CentralizedObjective obj(p, prof, market, regulation_on);
  const SearchSpec s = spec.resolved(p);
  Decision best_d;
  double best = kInf;
  for (double r : log_grid(s.rho_lo, s.rho_hi, n_rho))
    for (double q : linear_grid(s.Q_lo, s.Q_hi, n_Q)) {
      const double v = obj(r, q);
      if (v < best) {
        best = v;
        best_d = {r, q};
      }
    }
  return {best_d, best};
}

struct SurfaceSpec {
  double rho_lo_factor = 0.5;
  double rho_hi_factor = 2.0;
  double Q_lo_factor = 0.5;
  double Q_hi_factor = 1.5;
  std::size_t n_rho = 31;
  std::size_t n_Q = 31;
};

/// Cost density over a (rho_c, Q) box around the optimum. The optimum's
/// coordinates are inserted into both axes.
struct Surface {
  std::vector<double> rho;
  std::vector<double> Q;
  std::vector<std::vector<double>> cost;  // cost[i][j] at (rho[i], Q[j])
  std::size_t opt_i = 0;
  std::size_t opt_j = 0;
  CentralizedSolution optimum;

  /// Largest |C / C* - 1| along the row or column through the optimum.
  double max_deviation_Q() const {
    double m = 0.0;
    for (double v : cost[opt_i]) m = std::max(m, std::abs(v / optimum.objective - 1.0));
    return m;
  }
  double max_deviation_rho() const {
    double m = 0.0;
    for (const auto& row : cost) m = std::max(m, std::abs(row[opt_j] / optimum.objective - 1.0));
    return m;
  }
};

inline std::vector<double> with_point(std::vector<double> axis, double x, std::size_t& index) {
  axis.push_back(x);
  std::sort(axis.begin(), axis.end());
  axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  index = static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), x) - axis.begin());
  return axis;
}

inline Surface sensitivity_surface(const SystemParams& p, const DemandProfile& prof,
                                   const regulation::RegulationMarket* market, bool regulation_on,
                                   const SurfaceSpec& grid = {}, const SearchSpec& spec = {}) {
  Surface s;
  s.optimum = optimize_centralized(p, prof, market, regulation_on, spec);
  const SearchSpec r = spec.resolved(p);
  const auto& d = s.optimum.decision;
  const double rlo = std::max(r.rho_lo, d.rho_c * grid.rho_lo_factor);
  const double rhi = std::min(r.rho_hi, d.rho_c * grid.rho_hi_factor);
  const double qlo = std::max(r.Q_lo, d.Q * grid.Q_lo_factor);
  const double qhi = std::min(r.Q_hi, d.Q * grid.Q_hi_factor);
  s.rho = with_point(log_grid(rlo, rhi, grid.n_rho), d.rho_c, s.opt_i);
  s.Q = with_point(linear_grid(qlo, qhi, grid.n_Q), d.Q, s.opt_j);
  const CentralizedObjective obj(p, prof, market, regulation_on);
  s.cost.assign(s.rho.size(), std::vector<double>(s.Q.size()));
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    for (std::size_t j = 0; j < s.Q.size(); ++j) s.cost[i][j] = obj(s.rho[i], s.Q[j]);
  return s;
}

/// Relative cost increase when Q is scaled by `factor` at the optimal rho_c.
inline double relative_loss_Q(const CentralizedSolution& sol, const SystemParams& p, const DemandProfile& prof,
                              const regulation::RegulationMarket* market, bool regulation_on, double factor) {
  const CentralizedObjective obj(p, prof, market, regulation_on);
  const double q = std::clamp(sol.decision.Q * factor, 1.0, p.Q_cap);
  return obj(sol.decision.rho_c, q) / sol.objective - 1.0;
}

struct DecentralizedChoice {
  double r_B = 0.0;
  double r_B_min = 0.0;
  double r_B_cap = 0.0;
  double income_slope = 0.0;        // $ day^-1 per battery km^-2
  double depreciation_slope = 0.0;  // 24 c_R
};

/// Decentralized spare stock: the service-level minimum, or under regulation
/// the more profitable end of [r_B_min, r_B_cap].
inline DecentralizedChoice choose_decentralized_stock(const SystemParams& p, const DemandProfile& prof,
                                                      const regulation::RegulationMarket* market,
                                                      bool regulation_on, double eps_BS) {
  DecentralizedChoice c;
  c.r_B_min = inventory::decentralized_stock(p, prof, eps_BS);
  c.r_B_cap = p.effective_rB_cap(c.r_B_min);
  if (c.r_B_cap < c.r_B_min)
    throw invalid("r_B_cap " + std::to_string(c.r_B_cap) + " is below the minimum r_B " + std::to_string(c.r_B_min));
  c.r_B = c.r_B_min;
  if (!regulation_on) return c;
  econ::require_market(market, prof);
  c.income_slope = econ::decentralized_income_slope(p, *market);
  c.depreciation_slope = kHoursPerDay * p.c_R;
  if (c.income_slope > c.depreciation_slope) c.r_B = c.r_B_cap;
  return c;
}

/// Independently optimized cells of a region.
struct RegionSolution {
  std::vector<CentralizedSolution> cells;
  double total = 0.0;  // $ day^-1
};

inline RegionSolution optimize_region(const std::vector<econ::Cell>& cells,
                                      const regulation::RegulationMarket* market, bool regulation_on,
                                      const SearchSpec& spec = {}) {
  RegionSolution r;
  for (const auto& c : cells) {
    detail::require(c.area > 0.0, "cell area must be positive");
    r.cells.push_back(optimize_centralized(c.params, c.profile, market, regulation_on, spec));
    r.total += r.cells.back().objective * c.area;
  }
  return r;
}

}  // namespace evswap::opt
