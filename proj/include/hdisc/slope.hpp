#pragma once

// Slopes arg(1 - conj(tau) z_n) of sequences converging to tau, their tail
// cluster intervals, and the tangential / non-tangential decision.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdisc/fit.hpp"
#include "hdisc/hypgeo.hpp"
#include "hdisc/maps.hpp"

namespace hdisc {

inline constexpr double slope_margin = 1e-3;
inline constexpr double singleton_width = 1e-3;

// Slopes of disc points; nullopt marks points equal to tau (undefined angle).
inline std::vector<std::optional<double>> slope_series(std::span<const cplx> points, BoundaryPoint tau) {
  std::vector<std::optional<double>> out;
  out.reserve(points.size());
  for (cplx z : points) {
    const cplx v = 1.0 - std::conj(tau.value()) * z;
    if (v == 0.0) out.push_back(std::nullopt);
    else out.push_back(std::arg(v));
  }
  return out;
}

// Chart points carry the slope without cancellation.
inline std::vector<double> slope_series(std::span<const ChartPoint> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.slope_angle());
  return out;
}

enum class ClusterStatus { singleton, interval, inconclusive };

inline const char* to_string(ClusterStatus s) {
  switch (s) {
    case ClusterStatus::singleton: return "singleton";
    case ClusterStatus::interval: return "interval";
    case ClusterStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ClusterEstimate {
  double lo = 0.0;
  double hi = 0.0;
  ClusterStatus status = ClusterStatus::inconclusive;
};

// Tail extrema over the last `tail_fraction` of the series, compared against
// the nested tail of half that length; the interval must agree to singleton_width.
inline ClusterEstimate cluster_estimate(std::span<const double> series, double tail_fraction = 0.25) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("cluster_estimate: tail fraction must lie in (0, 1]");
  if (series.empty()) throw std::invalid_argument("cluster_estimate: empty series");
  const auto n = series.size();
  const auto len = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n))));
  const auto inner_len = std::max<std::size_t>(1, len / 2);
  const auto outer = series.subspan(n - len);
  const auto inner = series.subspan(n - inner_len);
  ClusterEstimate c;
  c.lo = *std::min_element(outer.begin(), outer.end());
  c.hi = *std::max_element(outer.begin(), outer.end());
  const double ilo = *std::min_element(inner.begin(), inner.end());
  const double ihi = *std::max_element(inner.begin(), inner.end());
  const bool stable = std::abs(c.lo - ilo) < singleton_width && std::abs(c.hi - ihi) < singleton_width;
  if (!stable) c.status = ClusterStatus::inconclusive;
  else if (c.hi - c.lo < singleton_width) c.status = ClusterStatus::singleton;
  else c.status = ClusterStatus::interval;
  return c;
}

enum class Tangentiality { non_tangential, tangential, inconclusive };

inline const char* to_string(Tangentiality t) {
  switch (t) {
    case Tangentiality::non_tangential: return "non-tangential";
    case Tangentiality::tangential: return "tangential";
    case Tangentiality::inconclusive: return "inconclusive";
  }
  return "?";
}

inline Tangentiality tangentiality_verdict(const ClusterEstimate& c, double margin = slope_margin) {
  if (c.status == ClusterStatus::inconclusive) return Tangentiality::inconclusive;
  const double edge = std::numbers::pi / 2.0 - margin;
  if (c.lo > -edge && c.hi < edge) return Tangentiality::non_tangential;
  if (c.lo >= edge || c.hi <= -edge) return Tangentiality::tangential;
  return Tangentiality::inconclusive;
}

struct SlopeReport {
  std::string map;
  Grid n;
  std::vector<double> theta;
  double tail_fraction = 0.25;
  ClusterEstimate cluster;
  Tangentiality verdict = Tangentiality::inconclusive;
  std::size_t excluded = 0;  // saturated grid points
};

// Orbit slopes on a grid. Saturated points are skipped and counted.
inline SlopeReport slope_report(const ModelMap& f, DiskPoint z, const Grid& grid, double tail_fraction = 0.25) {
  if (grid.empty()) throw std::invalid_argument("slope_report: empty grid");
  SlopeReport r;
  r.map = f.name();
  r.tail_fraction = tail_fraction;
  const auto orbit = iterate(f, z, std::min<std::uint64_t>(grid.back(), f.max_iterations()));
  for (auto n : grid) {
    if (!orbit.available(n)) {
      ++r.excluded;
      continue;
    }
    r.n.push_back(n);
    r.theta.push_back(orbit.slope(n));
  }
  if (r.theta.empty()) throw BoundarySaturated("slope_report: every grid point is saturated");
  r.cluster = cluster_estimate(r.theta, tail_fraction);
  r.verdict = tangentiality_verdict(r.cluster);
  return r;
}

}  // namespace hdisc
