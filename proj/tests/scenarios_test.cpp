#include <cmath>

#include <gtest/gtest.h>

#include "evswap/scenarios.hpp"
#include "test_data.hpp"

using namespace evswap;
using namespace evswap::scenarios;

namespace {

std::vector<Configuration> four() {
  const auto a = all_configurations();
  return {a.begin(), a.end()};
}

MetricsReport metric(double cost, double battery, double cap) {
  MetricsReport m;
  m.cost_density = cost;
  m.battery_density = battery;
  m.avg_reg_capacity = cap;
  return m;
}

}  // namespace

TEST(Calibration, StableAcrossSeeds) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const auto sol = opt::optimize_centralized(p, prof, nullptr, false);
  const auto a = calibrate_eps_BS(sol.decision, sol.stocks, p, prof, 100000, 1);
  const auto b = calibrate_eps_BS(sol.decision, sol.stocks, p, prof, 100000, 2);
  EXPECT_LE(std::abs(a.value - b.value), 3.0 * std::hypot(a.std_error, b.std_error));
  EXPECT_GT(a.value, 0.0);
  EXPECT_LT(a.value, 1.0);
  const auto c = calibrate_eps_BS(sol.decision, sol.stocks, p, prof, 100000, 1);
  EXPECT_EQ(a.value, c.value);
}

TEST(Calibration, HugeStocksGiveZero) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const Decision d{0.01, 20.0};
  StockPlan s;
  s.R = 1e6;
  s.r = 1e6;
  EXPECT_DOUBLE_EQ(calibrate_eps_BS(d, s, p, prof, 10000, 3).value, 0.0);
}

TEST(Calibration, DeterministicDemandLimit) {
  const SystemParams p;
  const double mu = 0.5;
  const auto prof = DemandProfile::uniform(mu, 1e-16);
  const Decision d{0.01, 30.0};
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double delta = inventory::replenishment_window(d.rho_c, p);
  const auto e = calibrate_eps_BS(d, StockPlan{}, p, prof, 1000, 4);
  ASSERT_LT((delta + tt) * mu / d.Q, 1.0);
  EXPECT_NEAR(e.value, (delta * mu + tt * mu) / d.Q, 1e-6);
}

TEST(Calibration, RejectsBadInputs) {
  const SystemParams p;
  EXPECT_THROW(calibrate_eps_BS({0.01, 20.0}, StockPlan{}, p, baseline_profile(), 0, 1), Error);
  EXPECT_THROW(calibrate_eps_BS({0.0, 20.0}, StockPlan{}, p, baseline_profile(), 10, 1), Error);
}

TEST(Pipeline, OrderingAtScaleFive) {
  SystemParams p;
  const auto [ps, dd] = apply_axis(Axis::demand_scale, 5.0, p, baseline_station_demand());
  const auto r = run_pipeline(ps, make_profile(dd, ps.rho_s), &bundled_market(), four());
  const auto& dec = r.reports[0];
  const auto& cen = r.reports[1];
  const auto& dec_fr = r.reports[2];
  const auto& cen_fr = r.reports[3];
  for (const auto* m : {&dec, &cen, &dec_fr}) {
    EXPECT_LT(cen_fr.cost_density, m->cost_density);
    EXPECT_GT(cen_fr.avg_reg_capacity, m->avg_reg_capacity);
  }
  EXPECT_LT(dec_fr.cost_density, dec.cost_density);
  EXPECT_LT(cen.battery_density, dec.battery_density);
  EXPECT_LE(cen_fr.battery_density, dec_fr.battery_density);
  EXPECT_GE(cen_fr.battery_density, cen.battery_density);
  EXPECT_GE(dec_fr.battery_density, dec.battery_density);
}

TEST(Pipeline, DecentralizedNeedsCalibration) {
  const SystemParams p;
  EXPECT_THROW(run_configuration({Architecture::decentralized, false}, p, baseline_profile(), nullptr), Error);
}

TEST(Pipeline, RegulationOffOnlyNeedsNoMarket) {
  const SystemParams p;
  const std::vector<Configuration> off = {{Architecture::decentralized, false}, {Architecture::centralized, false}};
  const auto r = run_pipeline(p, baseline_profile(), nullptr, off);
  EXPECT_EQ(r.reports.size(), 2u);
  EXPECT_FALSE(r.central_on.has_value());
}

TEST(Pipeline, Deterministic) {
  const SystemParams p;
  const auto a = run_pipeline(p, baseline_profile(), &bundled_market(), four());
  const auto b = run_pipeline(p, baseline_profile(), &bundled_market(), four());
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.reports[i].cost_density, b.reports[i].cost_density);
    EXPECT_EQ(a.reports[i].battery_density, b.reports[i].battery_density);
  }
}

TEST(Sweep, FirstPointMatchesDirectRun) {
  const SystemParams p;
  SweepSpec spec{Axis::demand_scale, {1.0, 2.0}, four()};
  const auto rows = sweep(spec, p, baseline_station_demand(), &bundled_market());
  ASSERT_EQ(rows.size(), 8u);
  const auto direct = run_pipeline(p, baseline_profile(), &bundled_market(), four());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rows[i].report.cost_density, direct.reports[i].cost_density);
}

TEST(Sweep, DemandAxisScalesDensitiesQuadratically) {
  const SystemParams p;
  const auto [ps, dd] = apply_axis(Axis::demand_scale, 3.0, p, baseline_station_demand());
  const auto prof = make_profile(dd, ps.rho_s);
  EXPECT_NEAR(ps.rho_s, 0.12, 1e-15);
  EXPECT_NEAR(prof.mu_bar_overall(), 9.0 * baseline_profile().mu_bar_overall(), 1e-12);
  EXPECT_NEAR(prof.sigma2_bar_overall(), 9.0 * baseline_profile().sigma2_bar_overall(), 1e-12);
}

TEST(Sweep, PowerAxisBatteryDensities) {
  const SystemParams p;
  SweepSpec spec{Axis::power, {0.5, 1.0, 1.5, 2.0, 3.0, 4.0},
                 {{Architecture::centralized, false}, {Architecture::decentralized, false}}};
  const auto rows = sweep(spec, p, baseline_station_demand(), nullptr);
  for (std::size_t k = 2; k < rows.size(); k += 2) {
    EXPECT_LE(rows[k].report.battery_density, rows[k - 2].report.battery_density * (1 + 1e-6));
    EXPECT_LT(rows[k + 1].report.battery_density, rows[k - 1].report.battery_density);
  }
}

TEST(Sweep, BatteryCostKeepsDecentralizedStable) {
  const SystemParams p;
  SweepSpec spec{Axis::battery_cost, {0.5, 1.0, 1.5, 2.0}, four()};
  const auto rows = sweep(spec, p, baseline_station_demand(), &bundled_market());
  const double dec0 = rows[0].report.battery_density;
  for (std::size_t base = 0; base < rows.size(); base += 4) {
    const auto& dec = rows[base].report;
    const auto& cen = rows[base + 1].report;
    const auto& dec_fr = rows[base + 2].report;
    EXPECT_NEAR(dec.battery_density, dec0, 0.05 * dec0);
    EXPECT_GE(dec_fr.battery_density, dec.battery_density);
    if (base) EXPECT_LE(cen.battery_density, rows[base - 3].report.battery_density);
  }
}

TEST(Sweep, SpecValidation) {
  SweepSpec s{Axis::demand_scale, {1.0}, four()};
  EXPECT_THROW(s.validate(), Error);
  s.points = {2.0, 1.0};
  EXPECT_THROW(s.validate(), Error);
  s.points = {1.0, 2.0};
  s.configs.clear();
  EXPECT_THROW(s.validate(), Error);
  EXPECT_THROW(parse_axis("voltage"), Error);
  EXPECT_EQ(parse_axis("power"), Axis::power);
}

TEST(Radar, InvertsCostAndBattery) {
  const std::array<MetricsReport, 4> r = {metric(10, 5, 1), metric(8, 3, 4), metric(9, 5, 2), metric(6, 4, 7)};
  const auto m = normalize_radar(r);
  EXPECT_DOUBLE_EQ(m[3][0], 1.0);
  EXPECT_DOUBLE_EQ(m[0][0], 0.0);
  EXPECT_DOUBLE_EQ(m[1][1], 1.0);
  EXPECT_DOUBLE_EQ(m[0][1], 0.0);
  EXPECT_DOUBLE_EQ(m[3][2], 1.0);
  EXPECT_DOUBLE_EQ(m[0][2], 0.0);
  EXPECT_DOUBLE_EQ(m[2][0], 0.25);
  for (const auto& row : m)
    for (double v : row) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
}

TEST(Radar, EqualMetricMapsToOne) {
  const std::array<MetricsReport, 4> r = {metric(10, 5, 1), metric(8, 5, 4), metric(9, 5, 2), metric(6, 5, 7)};
  const auto m = normalize_radar(r);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(m[i][1], 1.0);
}
