#pragma once

// Battery and cost densities of both paradigms. All costs are
// $ day^-1 km^-2; hourly rates are multiplied by 24.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "evswap/core.hpp"
#include "evswap/geometry.hpp"
#include "evswap/inventory.hpp"
#include "evswap/regulation.hpp"

namespace evswap::econ {

inline double centralized_battery_density(const Decision& d, const StockPlan& s, const SystemParams& p) {
  return s.R + s.r + d.Q * p.rho_s;
}

inline double decentralized_battery_density(double r_B) { return r_B; }

/// Daily charging energy cost, priced per scenario.
inline double electricity_cost(const SystemParams& p, const DemandProfile& prof) {
  detail::require(p.c_E.size() == prof.scenarios(),
                  "c_E has " + std::to_string(p.c_E.size()) + " prices for " + std::to_string(prof.scenarios()) +
                      " scenarios");
  double s = 0.0;
  for (std::size_t z = 0; z < prof.periods(); ++z)
    for (std::size_t n = 0; n < prof.scenarios(); ++n) s += p.c_E[n] * prof.kappa(z, n) * prof.mu_bar(z, n);
  return s * p.B_C * prof.period_hours();
}

/// Daily truck cost: one round trip per re-order of Q batteries.
inline double transport_cost(const Decision& d, const SystemParams& p, const DemandProfile& prof) {
  return 2.0 * std::numbers::sqrt2 * p.c_T / (3.0 * std::sqrt(d.rho_c) * d.Q) * prof.daily_demand();
}

inline double battery_rate(const SystemParams& p, bool regulation_on) { return regulation_on ? p.c_R : p.c_B; }

/// Everything derived from one centralized decision.
struct CentralizedEvaluation {
  StockPlan stocks;
  CostBreakdown cost;
  std::vector<regulation::Capacity> capacity;  // per period, empty when regulation is off
  bool eta_capped = false;
};

inline void require_market(const regulation::RegulationMarket* m, const DemandProfile& prof) {
  if (m == nullptr) throw Error(ErrorCategory::usage, "regulation requires AGC and price data");
  m->validate_for(prof);
}

inline CentralizedEvaluation evaluate_centralized(const Decision& d, const SystemParams& p,
                                                  const DemandProfile& prof,
                                                  const regulation::RegulationMarket* market,
                                                  bool regulation_on) {
  d.validate(p);
  CentralizedEvaluation e;
  e.stocks = inventory::centralized_stock_plan(d, p, prof);
  e.cost.electricity = electricity_cost(p, prof);
  e.cost.station_depreciation = kHoursPerDay * p.c_C * d.rho_c;
  e.cost.battery_depreciation =
      kHoursPerDay * battery_rate(p, regulation_on) * centralized_battery_density(d, e.stocks, p);
  e.cost.transport = transport_cost(d, p, prof);
  if (regulation_on) {
    require_market(market, prof);
    e.capacity.reserve(prof.periods());
    for (std::size_t z = 0; z < prof.periods(); ++z) {
      e.capacity.push_back(regulation::centralized_capacity_bound(z, d, e.stocks, p, prof, market->eta[z]));
      e.eta_capped = e.eta_capped || e.capacity.back().eta_capped;
    }
    e.cost.regulation_income = -regulation::daily_income(e.capacity, *market);
  }
  return e;
}

inline CostBreakdown centralized_cost_density(const Decision& d, const SystemParams& p, const DemandProfile& prof,
                                              const regulation::RegulationMarket* market, bool regulation_on) {
  return evaluate_centralized(d, p, prof, market, regulation_on).cost;
}

/// Regulation income per unit of decentralized spare stock ($ day^-1 per
/// battery km^-2).
inline double decentralized_income_slope(const SystemParams& p, const regulation::RegulationMarket& m) {
  double s = 0.0;
  for (std::size_t z = 0; z < m.periods(); ++z)
    if (m.eta[z] > 0.0) s += m.prices[z] * p.lambda_S / m.eta[z];
  return s / 1000.0;
}

struct DecentralizedEvaluation {
  double r_B = 0.0;
  double r_B_min = 0.0;
  CostBreakdown cost;
  std::vector<regulation::Capacity> capacity;
};

inline DecentralizedEvaluation evaluate_decentralized(const SystemParams& p, const DemandProfile& prof,
                                                      const regulation::RegulationMarket* market, double eps_BS,
                                                      bool regulation_on,
                                                      std::optional<double> r_B_override = std::nullopt) {
  DecentralizedEvaluation e;
  e.r_B_min = inventory::decentralized_stock(p, prof, eps_BS);
  e.r_B = e.r_B_min;
  if (r_B_override) {
    const double cap = p.effective_rB_cap(e.r_B_min);
    if (*r_B_override < e.r_B_min * (1.0 - 1e-12))
      throw invalid("r_B override " + std::to_string(*r_B_override) + " is below the service-level minimum " +
                    std::to_string(e.r_B_min));
    if (*r_B_override > cap * (1.0 + 1e-12))
      throw invalid("r_B override " + std::to_string(*r_B_override) + " exceeds r_B_cap " + std::to_string(cap));
    e.r_B = *r_B_override;
  }
  e.cost.electricity = electricity_cost(p, prof);
  e.cost.station_depreciation = kHoursPerDay * p.c_I * p.rho_s;
  e.cost.battery_depreciation = kHoursPerDay * battery_rate(p, regulation_on) * e.r_B;
  if (regulation_on) {
    require_market(market, prof);
    for (std::size_t z = 0; z < prof.periods(); ++z)
      e.capacity.push_back(regulation::decentralized_capacity_bound(e.r_B, p, market->eta[z]));
    e.cost.regulation_income = -regulation::daily_income(e.capacity, *market);
  }
  return e;
}

inline CostBreakdown decentralized_cost_density(const SystemParams& p, const DemandProfile& prof,
                                                const regulation::RegulationMarket* market, double eps_BS,
                                                bool regulation_on,
                                                std::optional<double> r_B_override = std::nullopt) {
  return evaluate_decentralized(p, prof, market, eps_BS, regulation_on, r_B_override).cost;
}

/// A region cell with its own parameters and decision.
struct Cell {
  double area = 1.0;  // km^2
  SystemParams params;
  DemandProfile profile;
  Decision decision;
};

/// Sum over cells of centralized cost density times area ($ day^-1).
inline double regional_total_cost(const std::vector<Cell>& cells, const regulation::RegulationMarket* market,
                                  bool regulation_on) {
  double total = 0.0;
  for (const auto& c : cells) {
    detail::require(c.area > 0.0, "cell area must be positive");
    total += centralized_cost_density(c.decision, c.params, c.profile, market, regulation_on).total() * c.area;
  }
  return total;
}

}  // namespace evswap::econ
