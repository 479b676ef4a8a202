#pragma once

// Continuous-approximation districting. Each charging station sits at the
// centre of a diamond (rotated-square) district of area 1/rho_c; travel uses
// the Manhattan metric.

#include <cmath>
#include <numbers>

#include "evswap/core.hpp"

namespace evswap::geometry {

struct DistrictGeometry {
  double rho_c = 0.0;    // km^-2
  double q_truck = 0.0;  // km h^-1

  void validate() const {
    detail::require(rho_c > 0.0, "rho_c must be positive");
    detail::require(q_truck > 0.0, "q_truck must be positive");
  }
};

/// Mean one-way L1 distance from a swapping station to its district centre:
/// sqrt(2) / (3 sqrt(rho_c)) km.
inline double avg_one_way_distance(double rho_c) {
  detail::require(rho_c > 0.0, "rho_c must be positive");
  return std::numbers::sqrt2 / (3.0 * std::sqrt(rho_c));
}

/// One-way truck trip time T^T in hours.
inline double one_way_travel_time(double rho_c, double q_truck) {
  detail::require(q_truck > 0.0, "q_truck must be positive");
  return avg_one_way_distance(rho_c) / q_truck;
}

inline double one_way_travel_time(const DistrictGeometry& g) {
  g.validate();
  return one_way_travel_time(g.rho_c, g.q_truck);
}

/// Cost of one one-way truck trip, c_T per km.
inline double transport_cost_per_one_way(double rho_c, double c_T) {
  detail::require(c_T >= 0.0, "c_T must be nonnegative");
  return c_T * avg_one_way_distance(rho_c);
}

}  // namespace evswap::geometry
