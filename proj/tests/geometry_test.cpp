#include <cmath>

#include <gtest/gtest.h>

#include "evswap/geometry.hpp"

using namespace evswap;
using namespace evswap::geometry;

// Mean Manhattan distance from the center of a diamond district of area
// 1/rho_c, by midpoint quadrature over the bounding square.
static double diamond_mean_distance(double rho_c, int n = 1200) {
  const double a = std::sqrt(1.0 / (2.0 * rho_c));
  const double h = 2.0 * a / n;
  double sum = 0.0, area = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -a + (i + 0.5) * h, y = -a + (j + 0.5) * h;
      const double d = std::abs(x) + std::abs(y);
      if (d <= a) {
        sum += d;
        area += 1.0;
      }
    }
  return sum / area;
}

TEST(Geometry, DistanceClosedForm) {
  EXPECT_NEAR(avg_one_way_distance(2.0 / 9.0), 1.0, 1e-12);
  EXPECT_NEAR(avg_one_way_distance(0.01), 4.7140, 5e-5);
}

TEST(Geometry, DistanceMatchesQuadrature) {
  for (double rho : {0.01, 0.2, 3.0}) EXPECT_NEAR(avg_one_way_distance(rho), diamond_mean_distance(rho), 2e-3 * avg_one_way_distance(rho));
}

TEST(Geometry, ScaleLaw) {
  for (double rho : {1e-4, 0.04, 1.0})
    for (double k : {0.5, 2.0, 7.0}) EXPECT_NEAR(avg_one_way_distance(k * k * rho), avg_one_way_distance(rho) / k, 1e-12);
  EXPECT_NEAR(avg_one_way_distance(0.16), avg_one_way_distance(0.04) / 2.0, 1e-12);
}

TEST(Geometry, TravelTime) {
  EXPECT_NEAR(one_way_travel_time(0.01, 30.0), 0.15713, 5e-6);
  EXPECT_NEAR(one_way_travel_time(0.01, 60.0), one_way_travel_time(0.01, 30.0) / 2.0, 1e-15);
  EXPECT_NEAR(one_way_travel_time(2.0 / 9.0, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(one_way_travel_time(DistrictGeometry{0.01, 30.0}), one_way_travel_time(0.01, 30.0), 1e-15);
}

TEST(Geometry, TransportCost) {
  EXPECT_NEAR(transport_cost_per_one_way(0.01, 1.13), 5.3268, 1e-4);
  EXPECT_DOUBLE_EQ(transport_cost_per_one_way(0.01, 0.0), 0.0);
  EXPECT_NEAR(transport_cost_per_one_way(2.0 / 9.0, 1.0), 1.0, 1e-12);
}

TEST(Geometry, RejectsNonpositiveInputs) {
  EXPECT_THROW(avg_one_way_distance(0.0), Error);
  EXPECT_THROW(avg_one_way_distance(-1.0), Error);
  EXPECT_THROW(one_way_travel_time(0.01, 0.0), Error);
}

TEST(Geometry, StrictlyDecreasing) {
  double prev = avg_one_way_distance(1e-5);
  for (double rho = 2e-5; rho < 10.0; rho *= 1.7) {
    const double d = avg_one_way_distance(rho);
    EXPECT_LT(d, prev);
    prev = d;
  }
}
