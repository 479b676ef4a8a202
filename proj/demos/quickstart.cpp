// Baseline walk-through: centralized optimum, calibrated decentralized
// stock, and a short simulation check of the centralized stock levels.

#include <iostream>

#include "evswap/evswap.hpp"

int main() {
  using namespace evswap;
  const SystemParams p;
  const auto prof = baseline_profile();

  const auto sol = opt::optimize_centralized(p, prof, nullptr, false);
  std::cout << "centralized optimum: rho_c = " << sol.decision.rho_c << " /km^2, Q = " << sol.decision.Q
            << ", cost = " << sol.objective << " $/day/km^2\n";
  std::cout << "  R = " << sol.stocks.R << ", r = " << sol.stocks.r << " batteries/km^2\n";

  const auto eps = scenarios::calibrate_eps_BS(sol.decision, sol.stocks, p, prof, 100000, 7);
  const double r_B = inventory::decentralized_stock(p, prof, scenarios::usable_eps(eps.value));
  std::cout << "eps_BS = " << eps.value << " (se " << eps.std_error << "), r_B = " << r_B << " batteries/km^2\n";

  Decision d = sol.decision;
  d.rho_c = sim::snap_rho_c(d.rho_c, p.rho_s);
  const auto s = inventory::centralized_stock_plan(d, p, prof);
  sim::SimConfig cfg;
  cfg.horizon = 2400;
  const auto st = sim::simulate_centralized(d, s, p, prof, cfg);
  std::cout << "simulated swap stockout " << st.swap_stockout.value << " +- " << st.swap_stockout.std_error
            << ", charge stockout " << st.charge_stockout.value << " +- " << st.charge_stockout.std_error << "\n";
}
