#pragma once

// Monte-Carlo oracle for the stock formulas.
//
// Swap demand at each station is a Brownian motion with the station's mean
// and variance rates (the normal approximation), or a compound Poisson
// process behind a switch. The centralized simulation is event-driven: a
// re-order fires when the station stock first reaches r_i + 1, found by
// exact first-passage sampling; the truck arrives T^T later with Q charged
// batteries and picks up the depleted ones, which are back in charged stock
// at the charging station after another T^T + T^C. The decentralized
// simulation runs on a fixed grid and tracks demand over the last on-site
// charge time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "evswap/core.hpp"
#include "evswap/geometry.hpp"
#include "evswap/inventory.hpp"
#include "evswap/regulation.hpp"

namespace evswap::sim {

enum class DemandModel { gaussian, compound_poisson };
enum class RateMode { stationary, hourly };

struct SimConfig {
  double horizon = 10240.0;  // h, including warmup
  double warmup = 240.0;     // h
  std::uint64_t seed = 1;
  DemandModel model = DemandModel::gaussian;
  RateMode rates = RateMode::stationary;
  double area = 0.0;         // km^2; 0 derives one charging-station district
  double sample_dt = 0.01;   // h, grid step of the decentralized simulation
  std::size_t batches = 40;  // batch means for standard errors

  void validate() const {
    detail::require(horizon > warmup && warmup >= 0.0, "horizon must exceed warmup >= 0");
    detail::require(area >= 0.0, "area must be nonnegative");
    detail::require(sample_dt > 0.0, "sample_dt must be positive");
    detail::require(batches >= 2, "need at least 2 batches");
  }
};

struct Stat {
  double value = 0.0;
  double std_error = 0.0;
};

/// Piecewise-constant per-station rates over the day.
struct StationRates {
  std::vector<double> mu;      // per hour
  std::vector<double> sigma2;  // per hour
  double period_hours = 24.0;

  static StationRates from(const DemandProfile& prof, double rho_s, RateMode mode) {
    StationRates r;
    if (mode == RateMode::stationary) {
      r.mu = {prof.mu_bar_overall() / rho_s};
      r.sigma2 = {prof.sigma2_bar_overall() / rho_s};
      r.period_hours = kHoursPerDay;
    } else {
      for (std::size_t z = 0; z < prof.periods(); ++z) {
        r.mu.push_back(prof.period_mean(z) / rho_s);
        r.sigma2.push_back(prof.sigma2_bar(z) / rho_s);
      }
      r.period_hours = prof.period_hours();
    }
    return r;
  }

  std::size_t index(double t) const {
    const auto k = static_cast<std::size_t>(std::floor(t / period_hours));
    return k % mu.size();
  }
  double segment_end(double t) const {
    if (mu.size() == 1) return std::numeric_limits<double>::infinity();
    return (std::floor(t / period_hours) + 1.0) * period_hours;
  }
};

/// Inverse Gaussian variate (Michael, Schucany and Haas).
template <class Rng>
double inverse_gaussian(double mean, double shape, Rng& rng) {
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u01;
  const double y = std::pow(n01(rng), 2);
  const double x = mean + mean * mean * y / (2.0 * shape) -
                   mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  return u01(rng) <= mean / (mean + x) ? x : mean * mean / x;
}

/// Brownian demand. Queries must move forward in time.
class BrownianDemand {
public:
  BrownianDemand(StationRates rates, std::uint64_t seed) : r_(std::move(rates)), rng_(seed) {}

  double now() const { return t_; }

  /// Demand from now to t1.
  double advance(double t1) {
    double x = 0.0;
    while (t_ < t1) {
      const double end = std::min(t1, r_.segment_end(t_));
      const std::size_t k = r_.index(t_);
      const double h = end - t_;
      x += r_.mu[k] * h + std::sqrt(r_.sigma2[k] * h) * n01_(rng_);
      t_ = end;
    }
    return x;
  }

  /// Moves forward until accrued demand first reaches `gap` (> 0) or t_max.
  /// Returns the accrued demand and whether the level was reached.
  std::pair<double, bool> until(double gap, double t_max) {
    double acc = 0.0;
    while (t_ < t_max) {
      const double end = std::min(t_max, r_.segment_end(t_));
      const std::size_t k = r_.index(t_);
      const double h = end - t_, m = r_.mu[k], v = r_.sigma2[k];
      const double g = gap - acc;
      if (v <= 0.0) {
        if (m > 0.0 && g / m <= h) {
          t_ += g / m;
          return {gap, true};
        }
        acc += m * h;
        t_ = end;
        continue;
      }
      const double tau = m > 0.0 ? inverse_gaussian(g / m, g * g / v, rng_) : g * g / (v * std::pow(n01_(rng_), 2));
      if (tau <= h) {
        t_ += tau;
        return {gap, true};
      }
      // No crossing inside the segment: endpoint conditioned on the maximum
      // staying below the level.
      for (;;) {
        const double x = m * h + std::sqrt(v * h) * n01_(rng_);
        if (x >= g) continue;
        if (u01_(rng_) < 1.0 - std::exp(-2.0 * g * (g - x) / (v * h))) {
          acc += x;
          break;
        }
      }
      t_ = end;
    }
    return {acc, false};
  }

private:
  StationRates r_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> n01_;
  std::uniform_real_distribution<double> u01_;
  double t_ = 0.0;
};

/// Compound Poisson demand with geometric batch sizes matching the mean and
/// variance rates; unit batches when the variance rate does not exceed the
/// mean rate.
class PoissonDemand {
public:
  PoissonDemand(StationRates rates, std::uint64_t seed) : r_(std::move(rates)), rng_(seed) {
    for (std::size_t k = 0; k < r_.mu.size(); ++k) {
      const double m = r_.mu[k];
      const double ratio = m > 0.0 ? r_.sigma2[k] / m : 1.0;
      const double p = ratio > 1.0 ? 2.0 / (1.0 + ratio) : 1.0;
      batch_p_.push_back(p);
      rate_.push_back(m * p);
    }
    schedule();
  }

  double now() const { return t_; }

  double advance(double t1) {
    double x = 0.0;
    while (next_ <= t1) {
      t_ = next_;
      x += batch();
      schedule();
    }
    t_ = t1;
    return x;
  }

  std::pair<double, bool> until(double gap, double t_max) {
    double acc = 0.0;
    while (next_ <= t_max) {
      t_ = next_;
      acc += batch();
      schedule();
      if (acc >= gap) return {acc, true};
    }
    t_ = t_max;
    return {acc, false};
  }

private:
  // Next arrival after t_, restarting the clock at rate changes.
  void schedule() {
    double t = t_;
    for (;;) {
      const std::size_t k = r_.index(t);
      const double end = r_.segment_end(t);
      if (rate_[k] > 0.0) {
        const double cand = t + std::exponential_distribution<double>(rate_[k])(rng_);
        if (cand <= end) {
          next_ = cand;
          return;
        }
      }
      if (!std::isfinite(end)) {
        next_ = std::numeric_limits<double>::infinity();
        return;
      }
      t = end;
    }
  }

  double batch() {
    const double p = batch_p_[r_.index(t_)];
    if (p >= 1.0) return 1.0;
    return 1.0 + static_cast<double>(std::geometric_distribution<int>(p)(rng_));
  }

  StationRates r_;
  std::mt19937_64 rng_;
  std::vector<double> batch_p_, rate_;
  double t_ = 0.0;
  double next_ = 0.0;
};

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t station, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(station), static_cast<std::uint32_t>(tag)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

/// Time-weighted batch means over [t0, t1).
class TimeBatches {
public:
  TimeBatches(double t0, double t1, std::size_t n) : t0_(t0), w_((t1 - t0) / static_cast<double>(n)), sum_(n, 0.0) {}

  /// Adds f over [a, b), clipped to the observation window.
  void add(double a, double b, double f) {
    a = std::max(a, t0_);
    b = std::min(b, t0_ + w_ * static_cast<double>(sum_.size()));
    while (a < b) {
      const auto k = std::min(sum_.size() - 1, static_cast<std::size_t>((a - t0_) / w_));
      const double end = std::min(b, t0_ + w_ * static_cast<double>(k + 1));
      sum_[k] += f * (end - a);
      if (end <= a) break;
      a = end;
    }
  }

  std::vector<double> means() const {
    std::vector<double> m(sum_.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = sum_[k] / w_;
    return m;
  }

  Stat stat() const { return mean_and_se(means()); }

  static Stat mean_and_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double m = 0.0;
    for (double x : v) m += x;
    m /= n;
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return {m, std::sqrt(s / (n - 1.0) / n)};
  }

private:
  double t0_, w_;
  std::vector<double> sum_;
};

struct SimStats {
  Stat swap_stockout;           // share of replenishment cycles ending below zero stock
  Stat charge_stockout;         // time share with aggregate deficit above primary stock
  Stat decentral_stockout;      // time share with no charged battery on site
  Stat deficit_mean;            // per swapping station
  Stat deficit_variance;        // per swapping station
  Stat station_stock_mean;      // decentralized: charged batteries on site, per station
  std::vector<double> available_capacity;  // per period, kW km^-2
  std::size_t cycles = 0;       // post-warmup replenishment cycles, all stations
  std::size_t stations = 0;
  double area = 0.0;
  double observed_hours = 0.0;
  double conservation_error = 0.0;  // max |fleet - initial fleet| over events
};

/// Swapping stations served by one charging-station district, and its area.
inline std::pair<std::size_t, double> district(double rho_c, double rho_s, double area) {
  if (area > 0.0) {
    const auto n = static_cast<std::size_t>(std::llround(rho_s * area));
    if (n < 1) throw invalid("simulation area holds no swapping station");
    return {n, area};
  }
  const auto n = static_cast<std::size_t>(std::max(1LL, std::llround(rho_s / rho_c)));
  return {n, static_cast<double>(n) / rho_s};
}

/// rho_c snapped so that rho_s / rho_c is a whole number of stations.
inline double snap_rho_c(double rho_c, double rho_s) {
  const double n = std::max(1.0, std::round(rho_s / rho_c));
  return rho_s / n;
}

namespace detail_sim {

struct StationRun {
  // Charging-station side: (time, change of deficit, change of batteries charging).
  struct Event {
    double t;
    double d_deficit;
    double d_charging;
  };
  std::vector<Event> events;
  std::vector<std::pair<double, double>> arrivals;  // (time, stock just before arrival)
  std::vector<std::pair<double, double>> transit;   // outbound truck intervals
  std::vector<std::pair<double, double>> stock_path;  // (time, stock) knots, linear in between
  double conservation_error = 0.0;
};

template <class Demand>
StationRun run_station(Demand demand, double level, double Q, double tt, double tc, double horizon) {
  StationRun run;
  double S = level, dep = 0.0, deficit = 0.0, inflight = 0.0;
  double out = 0.0;
  std::deque<std::pair<double, double>> pending;  // restorations (time, amount)
  const double fleet0 = S;
  const auto check = [&](double t) {
    while (!pending.empty() && pending.front().first <= t) {
      inflight -= pending.front().second;
      deficit -= pending.front().second;
      pending.pop_front();
    }
    const double fleet = S + dep + out + inflight - deficit;
    run.conservation_error = std::max(run.conservation_error, std::abs(fleet - fleet0));
  };
  run.stock_path.push_back({0.0, S});
  for (;;) {
    if (S > level) {
      const auto [x, hit] = demand.until(S - level, horizon);
      S -= x;
      dep += x;
      run.stock_path.push_back({demand.now(), S});
      if (!hit) break;
    }
    const double o = demand.now();
    const double a = o + tt;
    if (a > horizon) break;
    check(o);
    deficit += Q;
    out = Q;
    run.events.push_back({o, Q, 0.0});
    check(o);
    const double x = demand.advance(a);
    S -= x;
    dep += x;
    run.stock_path.push_back({a, S});
    run.arrivals.push_back({a, S});
    run.transit.push_back({o, a});
    check(a);
    S += Q;
    out = 0.0;
    const double pickup = dep;
    dep = 0.0;
    inflight += pickup;
    pending.push_back({a + tt + tc, pickup});
    run.events.push_back({a + tt, 0.0, pickup});
    run.events.push_back({a + tt + tc, -pickup, -pickup});
    run.stock_path.push_back({a, S});
    check(a);
  }
  return run;
}

template <class Demand>
std::vector<StationRun> run_stations(std::size_t n, const StationRates& rates, const SimConfig& cfg, double level,
                                     double Q, double tt, double tc) {
  std::vector<StationRun> runs;
  for (std::size_t i = 0; i < n; ++i)
    runs.push_back(run_station(Demand(rates, stream_seed(cfg.seed, i, 1)), level, Q, tt, tc, cfg.horizon));
  return runs;
}

}  // namespace detail_sim

inline SimStats simulate_centralized(const Decision& d, const StockPlan& s, const SystemParams& p,
                                     const DemandProfile& prof, const SimConfig& cfg) {
  cfg.validate();
  d.validate(p);
  const auto [n, area] = district(d.rho_c, p.rho_s, cfg.area);
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double level = s.r / p.rho_s + 1.0;
  const auto rates = StationRates::from(prof, p.rho_s, cfg.rates);
  const auto runs = cfg.model == DemandModel::gaussian
                        ? detail_sim::run_stations<BrownianDemand>(n, rates, cfg, level, d.Q, tt, p.T_C)
                        : detail_sim::run_stations<PoissonDemand>(n, rates, cfg, level, d.Q, tt, p.T_C);

  SimStats st;
  st.stations = n;
  st.area = area;
  st.observed_hours = cfg.horizon - cfg.warmup;
  const double t0 = cfg.warmup, t1 = cfg.horizon;

  // Swap-station cycles.
  std::vector<double> hits(cfg.batches, 0.0), count(cfg.batches, 0.0);
  const double w = (t1 - t0) / static_cast<double>(cfg.batches);
  for (const auto& r : runs) {
    st.conservation_error = std::max(st.conservation_error, r.conservation_error);
    for (const auto& [a, stock] : r.arrivals) {
      if (a < t0 || a >= t1) continue;
      const auto k = std::min(cfg.batches - 1, static_cast<std::size_t>((a - t0) / w));
      count[k] += 1.0;
      hits[k] += stock < 0.0 ? 1.0 : 0.0;
      ++st.cycles;
    }
  }
  {
    std::vector<double> frac(cfg.batches, 0.0);
    double h = 0.0, c = 0.0;
    for (std::size_t k = 0; k < cfg.batches; ++k) {
      frac[k] = count[k] > 0.0 ? hits[k] / count[k] : 0.0;
      h += hits[k];
      c += count[k];
    }
    st.swap_stockout = TimeBatches::mean_and_se(frac);
    st.swap_stockout.value = c > 0.0 ? h / c : 0.0;
  }

  // Per-station deficit moments.
  TimeBatches m1(t0, t1, cfg.batches), m2(t0, t1, cfg.batches);
  for (const auto& r : runs) {
    double D = 0.0, prev = 0.0;
    auto ev = r.events;
    std::stable_sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
    for (const auto& e : ev) {
      if (e.t > t1) break;
      m1.add(prev, e.t, D / static_cast<double>(n));
      m2.add(prev, e.t, D * D / static_cast<double>(n));
      D += e.d_deficit;
      prev = e.t;
    }
    m1.add(prev, t1, D / static_cast<double>(n));
    m2.add(prev, t1, D * D / static_cast<double>(n));
  }
  {
    const auto a = m1.means(), b = m2.means();
    std::vector<double> v(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) v[k] = b[k] - a[k] * a[k];
    st.deficit_mean = m1.stat();
    const Stat raw = TimeBatches::mean_and_se(v);
    st.deficit_variance = {m2.stat().value - st.deficit_mean.value * st.deficit_mean.value, raw.std_error};
  }

  // Charging station: aggregate deficit against primary stock, and
  // available capacity per period.
  std::vector<detail_sim::StationRun::Event> all;
  for (const auto& r : runs) all.insert(all.end(), r.events.begin(), r.events.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
  const double stock = s.R * area;
  TimeBatches out(t0, t1, cfg.batches);
  const std::size_t Z = prof.periods();
  const double ph = prof.period_hours();
  std::vector<double> cap_int(Z, 0.0), exposure(Z, 0.0);
  const auto add_cap = [&](double a, double b, double value) {
    a = std::max(a, t0);
    b = std::min(b, t1);
    while (a < b) {
      const double end = std::min(b, (std::floor(a / ph) + 1.0) * ph);
      const auto z = static_cast<std::size_t>(std::floor(a / ph)) % Z;
      cap_int[z] += value * (end - a);
      a = end;
    }
  };
  {
    double D = 0.0, charging = 0.0, prev = 0.0;
    for (const auto& e : all) {
      if (e.t > t1) break;
      out.add(prev, e.t, D > stock ? 1.0 : 0.0);
      add_cap(prev, e.t, p.lambda_C * (stock - D + charging) / area);
      D += e.d_deficit;
      charging += e.d_charging;
      prev = e.t;
    }
    out.add(prev, t1, D > stock ? 1.0 : 0.0);
    add_cap(prev, t1, p.lambda_C * (stock - D + charging) / area);
  }
  st.charge_stockout = out.stat();

  // Swapping-station contribution: charged stock between knots is taken at
  // its conditional mean, the straight line.
  for (const auto& r : runs) {
    const auto& k = r.stock_path;
    for (std::size_t j = 1; j < k.size(); ++j) {
      const double a = k[j - 1].first, b = k[j].first;
      if (b <= a) continue;
      const double mid = 0.5 * (std::max(0.0, k[j - 1].second) + std::max(0.0, k[j].second));
      add_cap(a, b, p.lambda_S * mid / area);
    }
  }
  for (double a = t0; a < t1;) {
    const double end = std::min(t1, (std::floor(a / ph) + 1.0) * ph);
    exposure[static_cast<std::size_t>(std::floor(a / ph)) % Z] += end - a;
    a = end;
  }
  st.available_capacity.resize(Z);
  for (std::size_t z = 0; z < Z; ++z) st.available_capacity[z] = exposure[z] > 0.0 ? cap_int[z] / exposure[z] : 0.0;
  return st;
}

inline SimStats simulate_decentralized(double r_B, const SystemParams& p, const DemandProfile& prof,
                                       const SimConfig& cfg, std::size_t stations = 1) {
  cfg.validate();
  detail::require(r_B >= 0.0, "r_B must be nonnegative");
  detail::require(stations >= 1, "need at least one station");
  const double tc = p.onsite_charge_time();
  const auto K = static_cast<std::size_t>(std::max(1.0, std::ceil(tc / cfg.sample_dt)));
  const double dt = tc / static_cast<double>(K);
  const double S = r_B / p.rho_s + 1.0;
  const auto rates = StationRates::from(prof, p.rho_s, cfg.rates);

  SimStats st;
  st.stations = stations;
  st.area = static_cast<double>(stations) / p.rho_s;
  st.observed_hours = cfg.horizon - cfg.warmup;
  TimeBatches out(cfg.warmup, cfg.horizon, cfg.batches), onhand(cfg.warmup, cfg.horizon, cfg.batches);
  const auto run = [&](auto demand) {
    std::vector<double> ring(K, 0.0);
    double window = 0.0;
    std::size_t pos = 0;
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.horizon / dt));
    for (std::size_t j = 1; j <= steps; ++j) {
      const double t = static_cast<double>(j) * dt;
      const double x = demand.advance(t);
      window += x - ring[pos];
      ring[pos] = x;
      pos = (pos + 1) % K;
      if (j < K) continue;
      const double charged = S - window;
      out.add(t - dt, t, charged < 0.0 ? 1.0 / static_cast<double>(stations) : 0.0);
      onhand.add(t - dt, t, std::max(0.0, charged) / static_cast<double>(stations));
    }
  };
  for (std::size_t i = 0; i < stations; ++i) {
    if (cfg.model == DemandModel::gaussian)
      run(BrownianDemand(rates, stream_seed(cfg.seed, i, 2)));
    else
      run(PoissonDemand(rates, stream_seed(cfg.seed, i, 2)));
  }
  st.decentral_stockout = out.stat();
  st.station_stock_mean = onhand.stat();
  st.cycles = static_cast<std::size_t>(st.observed_hours / tc) * stations;
  st.available_capacity.assign(prof.periods(), p.lambda_S * r_B);
  return st;
}

/// Simulated in-transit battery moments per period against both closed
/// forms. Unit-area moments aggregate independent stations: mean rho_s m_i,
/// variance rho_s v_i.
struct InTransitPeriod {
  Stat mean;                 // unit area
  Stat variance;             // unit area
  Stat station_share;        // share of time a truck is outbound
  double model_mean = 0.0;
  double model_variance = 0.0;
  double consistent_variance = 0.0;
  double station_two_point_variance = 0.0;  // analytic per-station {0, Q} variance
  bool model_closer = true;
};

struct InTransitReport {
  std::vector<InTransitPeriod> periods;
  std::size_t model_closer_count = 0;
};

inline InTransitReport measure_in_transit(const Decision& d, const SystemParams& p, const DemandProfile& prof,
                                          const SimConfig& cfg, std::size_t stations = 4) {
  cfg.validate();
  d.validate(p);
  detail::require(stations >= 1, "need at least one station");
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const auto rates = StationRates::from(prof, p.rho_s, cfg.rates);
  const double level = inventory::reorder_point(d.rho_c, p, prof) / p.rho_s + 1.0;
  const auto runs = cfg.model == DemandModel::gaussian
                        ? detail_sim::run_stations<BrownianDemand>(stations, rates, cfg, level, d.Q, tt, p.T_C)
                        : detail_sim::run_stations<PoissonDemand>(stations, rates, cfg, level, d.Q, tt, p.T_C);
  const std::size_t Z = prof.periods();
  const double ph = prof.period_hours();
  const auto first_day = static_cast<std::size_t>(std::ceil(cfg.warmup / kHoursPerDay));
  const auto last_day = static_cast<std::size_t>(std::floor(cfg.horizon / kHoursPerDay));
  detail::require(last_day > first_day + 1, "in-transit measurement needs at least two post-warmup days");
  const std::size_t days = last_day - first_day;
  std::vector<std::vector<double>> share(days, std::vector<double>(Z, 0.0));
  const double t0 = static_cast<double>(first_day) * kHoursPerDay, t1 = static_cast<double>(last_day) * kHoursPerDay;
  for (const auto& r : runs)
    for (auto [a, b] : r.transit) {
      a = std::max(a, t0);
      b = std::min(b, t1);
      while (a < b) {
        const double end = std::min(b, (std::floor(a / ph) + 1.0) * ph);
        const auto slot = static_cast<std::size_t>(std::floor((a - t0) / ph));
        share[slot / Z][slot % Z] += (end - a) / ph / static_cast<double>(stations);
        a = end;
      }
    }
  InTransitReport rep;
  for (std::size_t z = 0; z < Z; ++z) {
    std::vector<double> f(days);
    for (std::size_t k = 0; k < days; ++k) f[k] = share[k][z];
    InTransitPeriod pr;
    pr.station_share = TimeBatches::mean_and_se(f);
    const double fz = pr.station_share.value, Q = d.Q;
    const double m_i = Q * fz, v_i = Q * Q * fz * (1.0 - fz);
    pr.mean = {p.rho_s * m_i, p.rho_s * Q * pr.station_share.std_error};
    pr.variance = {p.rho_s * v_i, p.rho_s * Q * Q * std::abs(1.0 - 2.0 * fz) * pr.station_share.std_error};
    const double mu_z = cfg.rates == RateMode::stationary ? prof.mu_bar_overall() : prof.period_mean(z);
    const double el = tt * mu_z;
    pr.model_mean = el;
    pr.model_variance = el * (Q - el);
    pr.consistent_variance = el * (p.rho_s * Q - el);
    const double e_i = el / p.rho_s;
    pr.station_two_point_variance = e_i * (Q - e_i);
    pr.model_closer =
        std::abs(pr.variance.value - pr.model_variance) <= std::abs(pr.variance.value - pr.consistent_variance);
    rep.model_closer_count += pr.model_closer ? 1 : 0;
    rep.periods.push_back(pr);
  }
  return rep;
}

/// Closed-form per-station deficit moments the centralized simulation
/// estimates: mean (T^T + T^C) mu + Q and the phi branch selected by Q.
inline regulation::Moments expected_deficit(const Decision& d, const SystemParams& p, const DemandProfile& prof) {
  const double tt = geometry::one_way_travel_time(d.rho_c, p.q_truck);
  const double mu = prof.mu_bar_overall() / p.rho_s, s2 = prof.sigma2_bar_overall() / p.rho_s;
  const auto f = inventory::phi_pieces_per_station(inventory::replenishment_window(d.rho_c, p), mu, s2);
  return {(tt + p.T_C) * mu + d.Q, f(d.Q)};
}

}  // namespace evswap::sim
