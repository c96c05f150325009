#pragma once

// Divergence and Euclidean rate series along orbits, tail fits, and the
// rate verdicts:
//   d(z, f^n z) >= log n / (4 + eps) + c                (non-elliptic, Omega != C)
//   1 - |f^n z| <= c n^{-1/(2+eps)}
//   limsup log|f^n z - tau| / log n <= -1/4  (-1/2 for non-tangential orbits)
//   d(z, f^n z)/n -> -log f'(tau) / 2
//   |f^n z - tau| >= c0 (eps f'(tau))^n

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdisc/fit.hpp"
#include "hdisc/maps.hpp"
#include "hdisc/slope.hpp"

namespace hdisc {

namespace rate_tol {
inline constexpr double exponent = 0.02;     // Euclidean exponent verdicts
inline constexpr double floor_slope = 1e-3;  // tail slope against the divergence floor
inline constexpr double arosio_bracci = 1e-3;
inline constexpr double burn_in = 10;
}  // namespace rate_tol

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RateRow {
  std::uint64_t n = 0;
  bool available = false;
  double d = NAN;               // d(z, f^n z)
  double one_minus_mod = NAN;   // 1 - |f^n z|
  double dist_to_tau = NAN;     // |f^n z - tau|
  double step = NAN;            // d(f^n z, f^{n+1} z)
  double log_one_minus_mod = NAN;
  double log_dist_to_tau = NAN;
};

inline std::vector<RateRow> rate_rows(const OrbitRecord& orbit, const Grid& grid) {
  std::vector<RateRow> rows;
  rows.reserve(grid.size());
  for (auto n : grid) {
    RateRow r;
    r.n = n;
    r.available = orbit.available(n);
    if (r.available) {
      r.d = orbit.distance(0, n);
      r.log_one_minus_mod = orbit.log_one_minus_mod(n);
      r.log_dist_to_tau = orbit.log_dist_to_tau(n);
      r.one_minus_mod = std::exp(r.log_one_minus_mod);
      r.dist_to_tau = std::exp(r.log_dist_to_tau);
      if (orbit.available(n + 1)) r.step = orbit.step(n);
    }
    rows.push_back(r);
  }
  return rows;
}

inline OrbitRecord orbit_for_grid(const ModelMap& f, DiskPoint z, const Grid& grid) {
  if (grid.empty()) throw std::invalid_argument("empty n-grid");
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("n-grid must be strictly increasing");
  const std::uint64_t need = std::min<std::uint64_t>(grid.back() + 1, f.max_iterations());
  if (grid.back() > f.max_iterations()) throw std::invalid_argument("n-grid exceeds the iteration limit for " + f.name());
  return iterate(f, z, need);
}

struct SeriesPoint {
  std::uint64_t n = 0;
  std::optional<double> value;  // absent when saturated
};

inline std::vector<SeriesPoint> divergence_series(const ModelMap& f, DiskPoint z, const Grid& grid) {
  const auto orbit = orbit_for_grid(f, z, grid);
  std::vector<SeriesPoint> out;
  for (auto n : grid) out.push_back({n, orbit.available(n) ? std::optional<double>(orbit.distance(0, n)) : std::nullopt});
  return out;
}

struct EuclidPoint {
  std::uint64_t n = 0;
  bool available = false;
  double one_minus_mod = NAN;
  double dist_to_tau = NAN;
};

inline std::vector<EuclidPoint> euclidean_series(const ModelMap& f, DiskPoint z, const Grid& grid) {
  const auto orbit = orbit_for_grid(f, z, grid);
  std::vector<EuclidPoint> out;
  for (auto n : grid) {
    EuclidPoint p{n, orbit.available(n)};
    if (p.available) {
      p.one_minus_mod = std::exp(orbit.log_one_minus_mod(n));
      p.dist_to_tau = std::exp(orbit.log_dist_to_tau(n));
    }
    out.push_back(p);
  }
  return out;
}

struct StepSeries {
  Grid n;
  std::vector<double> step;
  bool non_increasing = true;
  double limit_estimate = NAN;
  bool zero_step = false;
};

// Steps on the grid. Monotonicity is checked on every consecutive step up to
// the last grid point (at most 10^6 steps), not only on the grid.
inline StepSeries step_series(const ModelMap& f, DiskPoint z, const Grid& grid) {
  const auto orbit = orbit_for_grid(f, z, grid);
  StepSeries s;
  for (auto n : grid) {
    if (!orbit.available(n + 1)) continue;
    s.n.push_back(n);
    s.step.push_back(orbit.step(n));
  }
  if (s.step.empty()) throw BoundarySaturated("step_series: no computable steps");
  const std::uint64_t dense = std::min<std::uint64_t>(last_available(orbit), 1'000'000);
  double prev = orbit.step(0);
  for (std::uint64_t k = 1; k + 1 <= dense; ++k) {
    const double cur = orbit.step(k);
    if (cur > prev * (1.0 + 1e-9) + 1e-12) s.non_increasing = false;
    prev = cur;
  }
  s.limit_estimate = s.step.back();
  s.zero_step = s.limit_estimate < zero_step_threshold;
  return s;
}

struct ArosioBracci {
  double tail_average = NAN;  // mean of d(n)/n over the last decade
  double target = NAN;        // -log f'(tau) / 2
  bool pass = false;
};

inline ArosioBracci arosio_bracci_limit(const ModelMap& f, DiskPoint z, std::uint64_t n_max, std::optional<double> fprime = std::nullopt) {
  const Grid grid = default_grid(n_max);
  const auto orbit = orbit_for_grid(f, z, grid);
  ArosioBracci ab;
  auto fp = fprime ? fprime : f.fprime_tau();
  if (!fp) fp = classify_numeric(f, z, std::min<std::uint64_t>(n_max, 100'000)).fprime_estimate;
  ab.target = -std::log(*fp) / 2.0;
  double sum = 0.0;
  int count = 0;
  const auto idx = last_decade(grid);
  for (auto i : idx) {
    if (!orbit.available(grid[i])) continue;
    sum += orbit.distance(0, grid[i]) / static_cast<double>(grid[i]);
    ++count;
  }
  if (count == 0) return ab;
  ab.tail_average = sum / count;
  const double tol = ab.target == 0.0 ? rate_tol::arosio_bracci : rate_tol::arosio_bracci * std::abs(ab.target);
  ab.pass = std::abs(ab.tail_average - ab.target) <= tol;
  return ab;
}

struct LowerBoundCheck {
  double log_c0 = NAN;        // min over the grid of log(|f^n z - tau| / (eps f'(tau))^n)
  double tail_slope = NAN;    // slope of that log ratio in n over the last decade
  double first_ratio_log = NAN;
  bool pass = false;
};

inline LowerBoundCheck lower_bound_check(const ModelMap& f, DiskPoint z, double eps, std::uint64_t n_max) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("lower_bound_check: eps must lie in (0,1)");
  const auto fp = f.fprime_tau();
  if (!fp) throw std::invalid_argument("lower_bound_check: f'(tau) unknown for " + f.name());
  const Grid grid = default_grid(n_max);
  const auto orbit = orbit_for_grid(f, z, grid);
  const double lq = std::log(eps * *fp);
  LowerBoundCheck c;
  c.log_c0 = INFINITY;
  std::vector<double> xs, ys;
  for (auto n : grid) {
    if (!orbit.available(n)) continue;
    const double v = orbit.log_dist_to_tau(n) - static_cast<double>(n) * lq;
    if (n == 1) c.first_ratio_log = v;
    c.log_c0 = std::min(c.log_c0, v);
    if (static_cast<double>(n) >= static_cast<double>(grid.back()) / 10.0) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(v);
    }
  }
  c.tail_slope = least_squares(xs, ys).slope;
  c.pass = std::isfinite(c.log_c0) && std::isfinite(c.tail_slope) && c.tail_slope >= 0.0;
  return c;
}

struct RateReport {
  std::string map;
  DiskPoint z;
  double epsilon = 0.01;
  std::vector<RateRow> rows;
  std::size_t excluded = 0;
  LinearFit d_vs_logn;          // last decade
  LinearFit d_vs_n;             // last decade
  LinearFit log_dist_vs_logn;   // last decade, log|f^n z - tau|
  LinearFit log_gap_vs_logn;    // last decade, log(1 - |f^n z|)
  double floor_c = NAN;         // min over n >= 10 of d - log n / (4 + eps)
  Tangentiality tangentiality = Tangentiality::inconclusive;
  std::vector<Verdict> verdicts;

  [[nodiscard]] bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
  [[nodiscard]] const Verdict* verdict(const std::string& name) const {
    for (const auto& v : verdicts)
      if (v.name == name) return &v;
    return nullptr;
  }
};

inline RateReport rate_report(const ModelMap& f, DiskPoint z, const Grid& grid, double eps = 0.01) {
  if (!(eps > 0.0)) throw std::invalid_argument("rate_report: eps must be positive");
  const auto orbit = orbit_for_grid(f, z, grid);
  RateReport rep;
  rep.map = f.name();
  rep.z = z;
  rep.epsilon = eps;
  rep.rows = rate_rows(orbit, grid);

  std::vector<double> logn, nn, d, ld, lg;
  std::vector<std::size_t> tail;
  const double cut = static_cast<double>(grid.back()) / 10.0;
  rep.floor_c = INFINITY;
  bool monotone = true;
  double prev_d = -INFINITY;
  bool bracket_ok = true;
  const double d0 = dist_disk(DiskPoint(0.0, 0.0), z);
  for (const auto& r : rep.rows) {
    if (!r.available) {
      ++rep.excluded;
      continue;
    }
    const double x = std::log(static_cast<double>(r.n));
    if (static_cast<double>(r.n) >= cut) tail.push_back(logn.size());
    logn.push_back(x);
    nn.push_back(static_cast<double>(r.n));
    d.push_back(r.d);
    ld.push_back(r.log_dist_to_tau);
    lg.push_back(r.log_one_minus_mod);
    if (static_cast<double>(r.n) >= rate_tol::burn_in) {
      rep.floor_c = std::min(rep.floor_c, r.d - x / (4.0 + eps));
      if (r.d < prev_d - 1e-12 * std::max(1.0, prev_d)) monotone = false;
      prev_d = r.d;
    }
    // d(0, f^n z) lies within d(n) -+ d(0, z).
    const double hi = std::log(2.0) - 2.0 * std::max(0.0, r.d - d0);
    const double lo = -2.0 * (r.d + d0);
    if (r.log_one_minus_mod > hi + 1e-9 || r.log_one_minus_mod < lo - 1e-9) bracket_ok = false;
  }
  rep.d_vs_logn = fit_subset(logn, d, tail);
  rep.d_vs_n = fit_subset(nn, d, tail);
  rep.log_dist_vs_logn = fit_subset(logn, ld, tail);
  rep.log_gap_vs_logn = fit_subset(logn, lg, tail);

  rep.tangentiality = slope_report(f, z, grid).verdict;

  const double floor_slope = 1.0 / (4.0 + eps);
  rep.verdicts.push_back({"divergence-floor",
                          std::isfinite(rep.floor_c) && rep.d_vs_logn.valid() && rep.d_vs_logn.slope >= floor_slope - rate_tol::floor_slope,
                          "c = " + fmt_double(rep.floor_c) + ", tail slope of d vs log n = " + fmt_double(rep.d_vs_logn.slope) + " (floor " + fmt_double(floor_slope) + ")"});
  const double dstar = -1.0 / (2.0 + eps);
  rep.verdicts.push_back({"euclidean-gap-rate",
                          rep.log_gap_vs_logn.valid() && rep.log_gap_vs_logn.slope <= dstar + rate_tol::exponent,
                          "exponent of 1-|f^n z| = " + fmt_double(rep.log_gap_vs_logn.slope) + " (bound " + fmt_double(dstar) + ")"});
  const bool nt = rep.tangentiality == Tangentiality::non_tangential;
  const double ebound = nt ? -0.5 : -0.25;
  rep.verdicts.push_back({"euclidean-tau-rate",
                          rep.log_dist_vs_logn.valid() && rep.log_dist_vs_logn.slope <= ebound + rate_tol::exponent,
                          "exponent of |f^n z - tau| = " + fmt_double(rep.log_dist_vs_logn.slope) + " (bound " + fmt_double(ebound) + (nt ? ", non-tangential)" : ")")});
  rep.verdicts.push_back({"divergence-monotone", monotone, "d(n) non-decreasing for n >= 10"});
  rep.verdicts.push_back({"euclid-hyperbolic-consistency", bracket_ok, "1-|f^n z| inside the rate bracket of d(n) -+ d(0,z)"});
  return rep;
}

}  // namespace hdisc
