#include <cmath>

#include <gtest/gtest.h>

#include "evswap/econ.hpp"
#include "evswap/optimizer.hpp"
#include "test_data.hpp"

using namespace evswap;
using namespace evswap::econ;

TEST(BatteryDensity, Sums) {
  SystemParams p;
  p.rho_s = 0.1;
  EXPECT_DOUBLE_EQ(centralized_battery_density({0.01, 20.0}, StockPlan{10.0, 1.0}, p), 13.0);
  EXPECT_DOUBLE_EQ(centralized_battery_density({0.01, 0.0}, StockPlan{}, p), 0.0);
  EXPECT_DOUBLE_EQ(decentralized_battery_density(1.0722), 1.0722);
  EXPECT_DOUBLE_EQ(decentralized_battery_density(0.0), 0.0);
}

// Spreadsheet-style recomputation from the published parameters.
TEST(CentralizedCost, TermByTermAtBaseline) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const Decision d{0.009, 22.0};
  const auto c = centralized_cost_density(d, p, prof, nullptr, false);

  const double rho_s = 0.04, B_C = 41.0 * 0.78;
  const double peak = 5.68 + 6 * 14.51, off = 8 * 5.68 + 9 * 14.51;
  const double electricity = B_C * rho_s * (0.223 * peak + 0.068 * off);
  EXPECT_NEAR(c.electricity, electricity, 1e-9 * electricity);

  EXPECT_NEAR(c.station_depreciation, 24 * 11.10 * 0.009, 1e-12);

  const double tt = std::sqrt(2.0) / (3.0 * 30.0 * std::sqrt(0.009));
  const double mu = (9 * 5.68 + 15 * 14.51) / 24.0 * rho_s;
  const double s2 = (9 * 3.71 * 3.71 + 15 * 3.90 * 3.90) / 24.0 * rho_s;
  const double delta = 2 * tt + 0.78;
  // phi at Q = 22 per district; pick the branch by the smaller root.
  const double mi = mu / rho_s, vi = s2 / rho_s;
  const double A = 1.0 / 6, Bq = -delta * mi, C = delta * vi + delta * delta * mi * mi - 1.0 / 6;
  const double nu = (-Bq - std::sqrt(Bq * Bq - 4 * A * C)) / (2 * A);
  const double phi_station = 22.0 <= nu ? delta * vi + (22.0 * 22.0 - 1) / 6 : delta * mi * 22.0 - delta * delta * mi * mi;
  const double phi = rho_s / 0.009 * phi_station;
  const double R = (tt + 0.78) * mu + 22.0 * rho_s + 1.8807936081512509 * std::sqrt(phi) * 0.009;
  const double r = tt * mu - rho_s + 1.8807936081512509 * std::sqrt(tt * rho_s) * std::sqrt(s2);
  EXPECT_NEAR(c.battery_depreciation, 24 * 0.10 * (R + r + 22.0 * rho_s), 1e-9);

  const double transport = 2 * std::sqrt(2.0) * 1.13 / (3 * std::sqrt(0.009) * 22.0) * (24 * mu);
  EXPECT_NEAR(c.transport, transport, 1e-9 * transport);
  EXPECT_DOUBLE_EQ(c.regulation_income, 0.0);

  const double total = electricity + 24 * 11.10 * 0.009 + 24 * 0.10 * (R + r + 22.0 * rho_s) + transport;
  EXPECT_NEAR(c.total(), total, 1e-9 * total);
}

TEST(CentralizedCost, ZeroDemandLeavesDepreciation) {
  const SystemParams p;
  const auto prof = DemandProfile::uniform(0.0, 0.0, 24);
  SystemParams one = p;
  one.c_E = {0.1};
  const auto c = centralized_cost_density({0.01, 1.0}, one, prof, nullptr, false);
  EXPECT_NEAR(c.total(), 24 * (p.c_C * 0.01 + p.c_B * 2 * p.rho_s), 1e-12);
  EXPECT_DOUBLE_EQ(c.transport, 0.0);
  EXPECT_DOUBLE_EQ(c.electricity, 0.0);
}

TEST(CentralizedCost, TransportInverseInQ) {
  const SystemParams p;
  const auto prof = baseline_profile();
  EXPECT_NEAR(transport_cost({0.01, 10.0}, p, prof), 2.0 * transport_cost({0.01, 20.0}, p, prof), 1e-12);
}

TEST(CentralizedCost, DivergesAsRhoVanishes) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const double a = centralized_cost_density({1e-4, 30.0}, p, prof, nullptr, false).total();
  const double b = centralized_cost_density({1e-6, 30.0}, p, prof, nullptr, false).total();
  EXPECT_GT(b, a);
  EXPECT_GT(transport_cost({1e-8, 30.0}, p, prof), 100.0 * transport_cost({1e-2, 30.0}, p, prof));
}

TEST(CentralizedCost, RegulationOffIgnoresMarket) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const Decision d{0.01, 15.0};
  EXPECT_DOUBLE_EQ(centralized_cost_density(d, p, prof, nullptr, false).total(),
                   centralized_cost_density(d, p, prof, &bundled_market(), false).total());
}

TEST(CentralizedCost, RegulationOnUsesResultBound) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const auto& m = bundled_market();
  const Decision d{0.01, 15.0};
  const auto ev = evaluate_centralized(d, p, prof, &m, true);
  double income = 0.0;
  for (std::size_t z = 0; z < 24; ++z) {
    const double avail = regulation::centralized_available_power(z, d, ev.stocks, p, prof, p.eps_B);
    income += m.prices[z] * std::max(0.0, avail) / m.eta[z] / 1000.0;
  }
  EXPECT_NEAR(-ev.cost.regulation_income, income, 1e-9 * income);
  EXPECT_NEAR(ev.cost.battery_depreciation, 24 * p.c_R * centralized_battery_density(d, ev.stocks, p), 1e-9);
  EXPECT_THROW(evaluate_centralized(d, p, prof, nullptr, true), Error);
}

TEST(DecentralizedCost, ZeroDemand) {
  SystemParams p;
  p.c_E = {0.1};
  const auto c = decentralized_cost_density(p, DemandProfile::uniform(0.0, 0.0, 24), nullptr, 0.03, false);
  EXPECT_NEAR(c.total(), 24 * 4.64 * 0.04, 1e-12);
  EXPECT_NEAR(c.total(), 4.454, 5e-4);
  EXPECT_DOUBLE_EQ(c.transport, 0.0);
}

TEST(DecentralizedCost, RegulationIdentity) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const auto& m = bundled_market();
  const auto off = evaluate_decentralized(p, prof, &m, 0.03, false);
  const auto on = evaluate_decentralized(p, prof, &m, 0.03, true);
  const double income = -on.cost.regulation_income;
  EXPECT_NEAR(on.cost.total() - off.cost.total(), 24 * (p.c_R - p.c_B) * off.r_B - income, 1e-9);
  EXPECT_NEAR(income, decentralized_income_slope(p, m) * off.r_B, 1e-9);
}

TEST(DecentralizedCost, RegulationLowersCostWithBundledPrices) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const auto& m = bundled_market();
  const double eps = 0.0212;
  const auto ch = opt::choose_decentralized_stock(p, prof, &m, true, eps);
  const double on = decentralized_cost_density(p, prof, &m, eps, true, ch.r_B).total();
  const double off = decentralized_cost_density(p, prof, &m, eps, false).total();
  EXPECT_LT(on, off);
}

TEST(DecentralizedCost, OverrideBounds) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const double lo = inventory::decentralized_stock(p, prof, 0.03);
  EXPECT_THROW(evaluate_decentralized(p, prof, nullptr, 0.03, false, lo * 0.9), Error);
  EXPECT_THROW(evaluate_decentralized(p, prof, nullptr, 0.03, false, lo * 2.1), Error);
  EXPECT_DOUBLE_EQ(evaluate_decentralized(p, prof, nullptr, 0.03, false, lo * 1.5).r_B, lo * 1.5);
}

TEST(DecentralizedCost, ElectricityMatchesCentralized) {
  const SystemParams p;
  const auto prof = baseline_profile();
  EXPECT_DOUBLE_EQ(decentralized_cost_density(p, prof, nullptr, 0.03, false).electricity,
                   centralized_cost_density({0.01, 10.0}, p, prof, nullptr, false).electricity);
}

TEST(Decomposition, SumsToTotal) {
  const SystemParams p;
  const auto prof = baseline_profile();
  for (bool reg : {false, true}) {
    const auto c = centralized_cost_density({0.02, 25.0}, p, prof, &bundled_market(), reg);
    const double sum = c.electricity + c.station_depreciation + c.battery_depreciation + c.transport + c.regulation_income;
    EXPECT_NEAR(c.total(), sum, 1e-9 * std::abs(sum));
  }
}

TEST(Region, TotalsAndIndependence) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const Decision d{0.01, 20.0};
  const double density = centralized_cost_density(d, p, prof, nullptr, false).total();
  EXPECT_NEAR(regional_total_cost({{1.0, p, prof, d}}, nullptr, false), density, 1e-12);
  EXPECT_NEAR(regional_total_cost({{1.0, p, prof, d}, {1.0, p, prof, d}}, nullptr, false), 2 * density, 1e-12);
  EXPECT_THROW(regional_total_cost({{0.0, p, prof, d}}, nullptr, false), Error);
}

TEST(Region, IndependentCellsBeatSharedDecision) {
  std::vector<Cell> cells;
  for (double s : {1.0, 2.0, 3.5, 5.0}) {
    SystemParams p;
    p.rho_s *= s;
    cells.push_back({1.0 + s, p, make_profile(baseline_station_demand().scaled(s), p.rho_s), {}});
  }
  const auto region = opt::optimize_region(cells, nullptr, false);
  double sum = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    sum += opt::optimize_centralized(cells[i].params, cells[i].profile, nullptr, false).objective * cells[i].area;
    cells[i].decision = region.cells[i].decision;
  }
  EXPECT_NEAR(region.total, sum, 1e-9 * sum);
  EXPECT_NEAR(regional_total_cost(cells, nullptr, false), region.total, 1e-6 * sum);
  // Shared (rho_c, Q) on a grid, limited by the sparsest cell.
  double joint = 1e300;
  const double rho_max = cells.front().params.rho_s;
  for (double r : opt::log_grid(1e-5, rho_max, 80))
    for (double q : opt::linear_grid(1.0, 30.0, 59)) {
      auto shared = cells;
      for (auto& c : shared) c.decision = {r, q};
      try {
        joint = std::min(joint, regional_total_cost(shared, nullptr, false));
      } catch (const Error&) {
      }
    }
  EXPECT_GE(joint, region.total * (1 - 1e-9));
}
