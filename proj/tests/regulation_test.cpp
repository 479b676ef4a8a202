#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "evswap/market_io.hpp"
#include "evswap/regulation.hpp"

using namespace evswap;
using namespace evswap::regulation;

namespace {

AgcTrace ramp(std::size_t n = 901) {
  AgcTrace t;
  for (std::size_t i = 0; i < n; ++i) t.g.push_back(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  return t;
}

// Brute-force scan: smallest grid eta meeting the requirement.
double eta_by_scan(const AgcTrace& t, double theta, double step) {
  const double need = theta * requested_mileage(t);
  for (double e = 0.0; e <= 1.0 + 1e-12; e += step)
    if (fulfilled_mileage(t, std::min(e, 1.0)) >= need) return e;
  return 1.0;
}

}  // namespace

TEST(Mileage, Requested) {
  EXPECT_DOUBLE_EQ(requested_mileage({0, {0.3, 0.3, 0.3}}), 0.0);
  EXPECT_NEAR(requested_mileage(ramp()), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(requested_mileage({0, {0.0, 1.0, -1.0, 1.0}}), 5.0);
  EXPECT_THROW(requested_mileage({0, {0.5}}), Error);
  EXPECT_THROW(requested_mileage({0, {0.5, 1.5}}), Error);
}

TEST(Mileage, Fulfilled) {
  const AgcTrace t{0, {0.0, 1.0, -1.0, 1.0, 0.2}};
  EXPECT_DOUBLE_EQ(fulfilled_mileage(t, 1.0), requested_mileage(t));
  EXPECT_DOUBLE_EQ(fulfilled_mileage(t, 0.0), 0.0);
  EXPECT_NEAR(fulfilled_mileage(ramp(), 0.3), 0.6, 1e-12);
  EXPECT_THROW(fulfilled_mileage(t, 1.1), Error);
}

TEST(Mileage, FulfilledNondecreasingAndBounded) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    AgcTrace t;
    for (int i = 0; i < 200; ++i) t.g.push_back(u(rng));
    double prev = 0.0;
    for (double e = 0.0; e <= 1.0; e += 0.01) {
      const double f = fulfilled_mileage(t, e);
      EXPECT_GE(f, prev - 1e-12);
      EXPECT_LE(f, requested_mileage(t) + 1e-12);
      prev = f;
    }
  }
}

TEST(Eta, ConstantTraceIsZero) {
  for (double th : {0.1, 0.75, 1.0}) EXPECT_DOUBLE_EQ(eta_z({0, {0.4, 0.4, 0.4, 0.4}}, th), 0.0);
}

TEST(Eta, RampGivesTheta) {
  EXPECT_NEAR(eta_z(ramp(), 0.7), 0.7, 1e-6);
  EXPECT_NEAR(eta_z(ramp(), 0.25), 0.25, 1e-6);
  EXPECT_THROW(eta_z(ramp(), 0.0), Error);
  EXPECT_THROW(eta_z(ramp(), 1.5), Error);
}

TEST(Eta, MinimalityProperty) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01(0.0, 0.08);
  for (int rep = 0; rep < 30; ++rep) {
    AgcTrace t;
    double g = 0.0;
    for (int i = 0; i < 900; ++i) {
      g = std::clamp(g + n01(rng), -1.0, 1.0);
      t.g.push_back(g);
    }
    for (double th : {0.5, 0.75, 0.9}) {
      const double e = eta_z(t, th);
      const double need = th * requested_mileage(t);
      EXPECT_GE(fulfilled_mileage(t, e), need);
      if (e > 1e-4) EXPECT_LT(fulfilled_mileage(t, e - 1e-4), need);
    }
  }
}

TEST(Eta, BundledDayAgreesWithGridScan) {
  const auto traces = io::read_agc_file(std::string(EVSWAP_DATA_DIR) + "/sample_agc_day.csv");
  ASSERT_EQ(traces.size(), 24u);
  for (const auto& t : traces) EXPECT_NEAR(eta_z(t, 0.75), eta_by_scan(t, 0.75, 1e-3), 1e-3) << t.period;
}

TEST(Market, FromTraces) {
  std::vector<AgcTrace> traces = {ramp(), ramp()};
  traces[0].period = 0;
  traces[1].period = 1;
  const auto m = RegulationMarket::from_traces(traces, {10.0, 20.0}, 0.7);
  EXPECT_NEAR(m.eta[0], 0.7, 1e-6);
  EXPECT_THROW(RegulationMarket::from_traces(traces, {10.0, 20.0, 30.0}, 0.7), Error);
  EXPECT_THROW(RegulationMarket::from_traces(traces, {10.0}, 0.7), Error);
}

TEST(InTransit, ModelFormExample) {
  SystemParams p;
  p.rho_s = 1.0;
  const Decision d{0.01, 2.0};
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const auto m = in_transit_moments(0.5 / tt, d, p);
  EXPECT_NEAR(m.mean, 0.5, 1e-12);
  EXPECT_NEAR(m.variance, 0.75, 1e-12);
  // rho_s Q = Q here, so both forms agree.
  p.bernoulli_consistent_variance = true;
  EXPECT_NEAR(in_transit_moments(0.5 / tt, d, p).variance, 0.75, 1e-12);
}

TEST(InTransit, ZeroDemandAndFormsDiffer) {
  SystemParams p;
  const Decision d{0.01, 10.0};
  const auto z = in_transit_moments(0.0, d, p);
  EXPECT_DOUBLE_EQ(z.mean, 0.0);
  EXPECT_DOUBLE_EQ(z.variance, 0.0);
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double mu = 0.2 / tt;
  const auto model = in_transit_moments(mu, d, p);
  p.bernoulli_consistent_variance = true;
  const auto cons = in_transit_moments(mu, d, p);
  EXPECT_NEAR(model.variance, 0.2 * (10.0 - 0.2), 1e-12);
  EXPECT_NEAR(cons.variance, 0.2 * (0.4 - 0.2), 1e-12);
}

TEST(InTransit, ProbabilityAboveOneIsInfeasible) {
  SystemParams p;
  const Decision d{0.0001, 1.0};
  try {
    in_transit_moments(5.0, d, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::infeasible);
    EXPECT_NE(std::string(e.what()).find("rho_s*Q"), std::string::npos);
  }
}

TEST(Capacity, CentralizedWorkedExample) {
  SystemParams p;
  p.rho_s = 1.0;
  const Decision d{0.01, 2.0};
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const auto prof = DemandProfile::uniform(0.5 / tt, 1.0);
  StockPlan s;
  s.R = 10.0;
  s.r = 1.0;
  const double expected = (431.0 - 48.0 * (0.5 + 1.8807936081512509 * std::sqrt(0.75))) / 0.8;
  const auto c = centralized_capacity_bound(0, d, s, p, prof, 0.8, 0.03);
  EXPECT_NEAR(c.value, expected, 1e-9);
  EXPECT_NEAR(c.value, 411.02, 0.01);
  EXPECT_FALSE(c.eta_capped);
  EXPECT_NEAR(centralized_capacity_bound(0, d, s, p, prof, 0.8, 0.5).value, (431.0 - 48.0 * 0.5) / 0.8, 1e-9);
}

TEST(Capacity, CentralizedClampsAndCaps) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const Decision d{0.01, 5.0};
  EXPECT_DOUBLE_EQ(centralized_capacity_bound(12, d, StockPlan{}, p, prof, 0.7).value, 0.0);
  StockPlan s;
  s.R = 5.0;
  const auto capped = centralized_capacity_bound(12, d, s, p, prof, 0.0);
  EXPECT_TRUE(capped.eta_capped);
  EXPECT_NEAR(capped.value, centralized_available_power(12, d, s, p, prof, p.eps_B) / kEtaFloor, 1e-3);
}

TEST(Capacity, MonotoneInStocksAndEta) {
  const SystemParams p;
  const auto prof = baseline_profile();
  const Decision d{0.01, 10.0};
  StockPlan s{3.0, 0.5};
  const double base = centralized_capacity_bound(10, d, s, p, prof, 0.6).value;
  StockPlan more = s;
  more.R += 1.0;
  EXPECT_GE(centralized_capacity_bound(10, d, more, p, prof, 0.6).value, base);
  more = s;
  more.r += 1.0;
  EXPECT_GE(centralized_capacity_bound(10, d, more, p, prof, 0.6).value, base);
  EXPECT_LE(centralized_capacity_bound(10, d, s, p, prof, 0.9).value, base);
}

TEST(Capacity, Decentralized) {
  const SystemParams p;
  EXPECT_NEAR(decentralized_capacity_bound(1.0722, p, 0.8).value, 9.382, 5e-4);
  EXPECT_DOUBLE_EQ(decentralized_capacity_bound(0.0, p, 0.8).value, 0.0);
  SystemParams unit = p;
  unit.lambda_S = 1.0;
  unit.lambda_C = 1.0;
  EXPECT_DOUBLE_EQ(decentralized_capacity_bound(3.0, unit, 1.0).value, 3.0);
  EXPECT_THROW(centralized_capacity_bound(12, {0.01, 1.0}, StockPlan{}, p, baseline_profile(), 0.7), Error);
  EXPECT_THROW(decentralized_capacity_bound(-1.0, p, 0.8), Error);
}

TEST(Income, SkipsCappedPeriodsAndConvertsUnits) {
  RegulationMarket m{{10.0, 20.0, 30.0}, {0.5, 0.0, 1.0}, 0.75};
  const std::vector<Capacity> c = {{100.0, false}, {1e9, true}, {50.0, false}};
  EXPECT_NEAR(daily_income(c, m), (10.0 * 100.0 + 30.0 * 50.0) / 1000.0, 1e-12);
}

TEST(AverageCapacity, ZeroDemandAndSinglePeriod) {
  const SystemParams p;
  const Decision d{0.01, 10.0};
  const StockPlan s{3.0, 0.5};
  const double full = p.lambda_C * 3.0 + p.lambda_S * (0.5 + 10.0 * p.rho_s);
  EXPECT_NEAR(average_capacity(d, s, p, DemandProfile::uniform(0.0, 0.0, 24)), full, 1e-12);
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  EXPECT_NEAR(average_capacity(d, s, p, DemandProfile::uniform(0.1, 0.1)), full - 48.0 * tt * 0.1, 1e-12);
  EXPECT_NEAR(average_capacity_decentralized(2.0, p), 14.0, 1e-12);
}
