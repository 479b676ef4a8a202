#include <sstream>

#include <gtest/gtest.h>

#include "evswap/config.hpp"
#include "evswap/market_io.hpp"
#include "test_data.hpp"

using namespace evswap;

namespace {

ErrorCategory category_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCategory::usage;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, BundledBaselineMatchesDefaults) {
  const auto x = config::load_file(data_path("baseline.ini"));
  const config::Inputs def;
  EXPECT_EQ(x.params, def.params);
  EXPECT_EQ(x.demand.mean, def.demand.mean);
  EXPECT_EQ(x.demand.std_dev, def.demand.std_dev);
  EXPECT_EQ(x.demand.peak_periods, def.demand.peak_periods);
}

TEST(Config, EmptyFileIsBaseline) {
  EXPECT_EQ(config::load_text(""), config::Inputs{});
}

TEST(Config, OverridesAndDerivedB_C) {
  const auto x = config::load_text("[system]\nT_C = 1.5\nlambda_C = 20\n[costs]\nc_E = 0.3, 0.1\n");
  EXPECT_DOUBLE_EQ(x.params.T_C, 1.5);
  EXPECT_DOUBLE_EQ(x.params.B_C, 30.0);
  EXPECT_EQ(x.params.c_E, (std::vector<double>{0.3, 0.1}));
  EXPECT_DOUBLE_EQ(config::load_text("[system]\nB_C = 7\n").params.B_C, 7.0);
}

TEST(Config, RoundTrip) {
  auto x = config::load_text("[service]\neps_S = 0.0123456789\n[regulation]\nr_B_cap = 0.75\n");
  EXPECT_EQ(config::load_text(config::serialize(x)), x);
  const config::Inputs def;
  EXPECT_EQ(config::load_text(config::serialize(def)), def);
  EXPECT_EQ(config::serialize(config::load_text(config::serialize(x))), config::serialize(x));
}

TEST(Config, RejectsOutOfRange) {
  const auto f = [] { config::load_text("[service]\neps_S = 1.5\n"); };
  EXPECT_EQ(category_of(f), ErrorCategory::invalid_parameter);
  EXPECT_NE(message_of(f).find("eps_S"), std::string::npos);
  EXPECT_EQ(category_of([] { config::load_text("[system]\nrho_s = -1\n"); }), ErrorCategory::invalid_parameter);
  EXPECT_EQ(category_of([] { config::load_text("[costs]\nc_E = 0.2\n"); }), ErrorCategory::invalid_parameter);
}

TEST(Config, RejectsUnknownNames) {
  EXPECT_EQ(category_of([] { config::load_text("[system]\nrho = 1\n"); }), ErrorCategory::parse);
  EXPECT_EQ(category_of([] { config::load_text("[misc]\nx = 1\n"); }), ErrorCategory::parse);
  EXPECT_EQ(category_of([] { config::load_text("[system]\nrho_s = abc\n"); }), ErrorCategory::parse);
  EXPECT_EQ(category_of([] { config::load_text("[regulation]\nbernoulli_consistent_variance = maybe\n"); }),
            ErrorCategory::parse);
  EXPECT_EQ(category_of([] { config::load_text("[demand]\npeak_hours = 1.5\n"); }), ErrorCategory::parse);
}

TEST(Config, DemandListsMustAgree) {
  EXPECT_THROW(config::load_text("[demand]\nstation_mean = 1,2,3\n"), Error);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_EQ(category_of([] { config::load_file("/nonexistent/evswap.ini"); }), ErrorCategory::io);
}

TEST(MarketIo, BundledFilesCoverTheDay) {
  const auto traces = io::read_agc_file(data_path("sample_agc_day.csv"));
  ASSERT_EQ(traces.size(), 24u);
  for (std::size_t z = 0; z < 24; ++z) {
    EXPECT_EQ(traces[z].period, static_cast<int>(z));
    EXPECT_EQ(traces[z].g.size(), 900u);
  }
  const auto prices = io::read_prices_file(data_path("sample_prices.csv"));
  EXPECT_EQ(prices.size(), 24u);
  EXPECT_EQ(bundled_market().periods(), 24u);
}

TEST(MarketIo, TimestampForms) {
  std::istringstream a("0,0.1\n3600,0.2\n01:00:04,0.3\n");
  const auto t = io::read_agc(a);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[1].g, (std::vector<double>{0.2, 0.3}));
}

TEST(MarketIo, ParseErrorsCarryLine) {
  std::istringstream bad("timestamp,signal\n00:00:00,0.1\n00:00:04,x\n");
  const auto msg = message_of([&] { io::read_agc(bad, "agc.csv"); });
  EXPECT_NE(msg.find("agc.csv:3"), std::string::npos);
  std::istringstream big("0,1.5\n");
  EXPECT_EQ(category_of([&] { io::read_agc(big); }), ErrorCategory::parse);
  std::istringstream gap("period,price\n0,1\n2,3\n");
  EXPECT_EQ(category_of([&] { io::read_prices(gap); }), ErrorCategory::parse);
  std::istringstream dup("0,1\n0,3\n");
  EXPECT_EQ(category_of([&] { io::read_prices(dup); }), ErrorCategory::parse);
  std::istringstream neg("0,-1\n");
  EXPECT_EQ(category_of([&] { io::read_prices(neg); }), ErrorCategory::parse);
  std::istringstream empty("period,price\n");
  EXPECT_EQ(category_of([&] { io::read_prices(empty); }), ErrorCategory::parse);
}

TEST(MarketIo, MissingFileIsIoError) {
  EXPECT_EQ(category_of([] { io::read_prices_file("/nonexistent/p.csv"); }), ErrorCategory::io);
}
