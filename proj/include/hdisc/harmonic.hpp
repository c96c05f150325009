#pragma once

// Harmonic measure in the disc: Poisson quadrature, the arcsin formula,
// walk-on-spheres estimates in slit discs, and the tail chain for trajectory
// tails gamma_n = phi_[n, inf)(z):
//   (1/pi) arcsin(|f^n z - tau| / 2) <= omega(0, gamma_n, D \ gamma_n) <= c / sqrt(n).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hdisc/hypgeo.hpp"
#include "hdisc/semiflow.hpp"

namespace hdisc {

enum class HmMethod { poisson_quadrature, arcsin_formula, wos_monte_carlo };

inline const char* to_string(HmMethod m) {
  switch (m) {
    case HmMethod::poisson_quadrature: return "poisson-quadrature";
    case HmMethod::arcsin_formula: return "arcsin-formula";
    case HmMethod::wos_monte_carlo: return "wos-monte-carlo";
  }
  return "?";
}

struct HmEstimate {
  double value = 0.0;  // in [0, 1]
  HmMethod method = HmMethod::poisson_quadrature;
  double se = 0.0;     // Monte Carlo only: sqrt(p (1 - p) / N)
  std::uint64_t walks = 0;
  std::uint64_t accepted = 0;
  std::uint64_t discards = 0;
  double mean_steps = 0.0;
  bool flagged = false;  // discards above 1% of walks
};

// ---------------------------------------------------------------------------
// Exact evaluations

// Poisson integral of the arc [theta1, theta2] at z, to absolute 1e-10.
inline HmEstimate hm_disk_arc(DiskPoint z, double theta1, double theta2) {
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) throw std::invalid_argument("hm_disk_arc: non-finite angles");
  if (theta2 < theta1 || theta2 > theta1 + 2.0 * std::numbers::pi * (1.0 + 1e-15))
    throw std::invalid_argument("hm_disk_arc: need theta1 <= theta2 <= theta1 + 2 pi");
  HmEstimate e;
  if (theta1 == theta2) return e;
  const cplx w = z.value();
  if (w == 0.0) {
    e.value = std::min(1.0, (theta2 - theta1) / (2.0 * std::numbers::pi));
    return e;
  }
  const double gap = (1.0 - std::abs(w)) * (1.0 + std::abs(w));
  const auto kernel = [w, gap](double t) { return gap / std::norm(std::polar(1.0, t) - w) / (2.0 * std::numbers::pi); };
  // Cut at the kernel peak and at peak +- gap 2^j, so every piece sees a smooth kernel.
  std::vector<double> cuts{theta1, theta2};
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = -1; k <= 2; ++k) {
    const double peak = std::arg(w) + k * two_pi;
    const auto add = [&](double c) {
      if (c > theta1 && c < theta2) cuts.push_back(c);
    };
    add(peak);
    for (double off = gap; off < std::numbers::pi; off *= 2.0) {
      add(peak - off);
      add(peak + off);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(kernel, cuts[i - 1], cuts[i], 8, 1e-14);
  e.value = std::clamp(total, 0.0, 1.0);
  return e;
}

// Harmonic measure at 0 of an arc whose chord has length d <= 2.
inline HmEstimate hm_arcsin(double chord) {
  if (!(chord >= 0.0 && chord <= 2.0)) throw std::invalid_argument("hm_arcsin: chord length must lie in [0, 2]");
  HmEstimate e;
  e.method = HmMethod::arcsin_formula;
  e.value = std::asin(chord / 2.0) / std::numbers::pi;
  return e;
}

// Upper half-plane, boundary interval [a, b] seen from w: (arg(w - b) - arg(w - a)) / pi.
inline double hm_half_plane_interval(cplx w, double a, double b) {
  if (!(w.imag() > 0.0)) throw std::domain_error("hm_half_plane_interval: point not in the upper half-plane");
  if (!(a <= b)) throw std::invalid_argument("hm_half_plane_interval: need a <= b");
  return (std::arg(w - b) - std::arg(w - a)) / std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Slit discs

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

namespace detail {
inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  // Touching or collinear overlap.
  const auto on = [](cplx a, cplx b, cplx p) { return point_segment_distance(p, a, b) == 0.0; };
  return on(q1, q2, p1) || on(q1, q2, p2) || on(p1, p2, q1) || on(p1, p2, q2);
}
}  // namespace detail

// D minus a polyline. Vertices lie inside the disc; the last may lie on the
// circle so that a trajectory tail can end at its landing point.
class SlitDiskDomain {
 public:
  SlitDiskDomain() = default;
  explicit SlitDiskDomain(std::vector<cplx> vertices) : v_(std::move(vertices)) {
    if (v_.size() == 1) throw std::invalid_argument("SlitDiskDomain: a slit needs at least two vertices");
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (!is_finite(v_[i])) throw std::invalid_argument("SlitDiskDomain: non-finite vertex");
      const double r = std::abs(v_[i]);
      const bool last = i + 1 == v_.size();
      if (last ? r > 1.0 : !(r < 1.0)) throw std::domain_error("SlitDiskDomain: polyline must lie inside the disc");
    }
    for (std::size_t i = 1; i < v_.size(); ++i)
      if (v_[i] == v_[i - 1]) throw std::invalid_argument("SlitDiskDomain: repeated vertex");
    for (std::size_t i = 0; i + 1 < v_.size(); ++i) {
      for (std::size_t j = i + 1; j + 1 < v_.size(); ++j) {
        if (j == i + 1) {
          // Adjacent segments share a vertex; reject folding back.
          const cplx u = v_[i + 1] - v_[i], w = v_[j + 1] - v_[j];
          if (detail::cross(u, w) == 0.0 && (u * std::conj(w)).real() < 0.0)
            throw std::invalid_argument("SlitDiskDomain: polyline folds back on itself");
          continue;
        }
        if (detail::segments_intersect(v_[i], v_[i + 1], v_[j], v_[j + 1]))
          throw std::invalid_argument("SlitDiskDomain: polyline self-intersects");
      }
    }
  }

  [[nodiscard]] const std::vector<cplx>& vertices() const noexcept { return v_; }
  [[nodiscard]] bool empty() const noexcept { return v_.empty(); }
  [[nodiscard]] double slit_distance(cplx p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < v_.size(); ++i) d = std::min(d, point_segment_distance(p, v_[i], v_[i + 1]));
    return d;
  }
  [[nodiscard]] bool contains(cplx p) const { return std::abs(p) < 1.0 && slit_distance(p) > 0.0; }

 private:
  std::vector<cplx> v_;
};

// ---------------------------------------------------------------------------
// Walk on spheres

// SplitMix64 outputs indexed by (seed, walk, draw): each walk owns the
// counter stream mix(key + k gamma), so estimates do not depend on scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}
  std::uint64_t next() { return mix(state_ += 0x9E3779B97F4A7C15ULL); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

struct WosOptions {
  double epsilon = 1e-4;
  std::uint64_t cap = 100'000;
  std::uint64_t seed = 1;
  std::uint64_t walks = 100'000;
  unsigned threads = 0;  // 0: hardware concurrency
};

enum class HmTargetKind { slit, circle, arc };

struct HmTarget {
  HmTargetKind kind = HmTargetKind::slit;
  double theta1 = 0.0;  // arc only
  double theta2 = 0.0;
  static HmTarget slit() { return {HmTargetKind::slit, 0.0, 0.0}; }
  static HmTarget circle() { return {HmTargetKind::circle, 0.0, 0.0}; }
  static HmTarget arc(double t1, double t2) { return {HmTargetKind::arc, t1, t2}; }
};

inline bool angle_in_arc(double a, double t1, double t2) {
  double x = a;
  while (x < t1) x += 2.0 * std::numbers::pi;
  while (x >= t1 + 2.0 * std::numbers::pi) x -= 2.0 * std::numbers::pi;
  return x <= t2;
}

enum class WalkOutcome { circle, slit, discarded };

struct WalkResult {
  WalkOutcome outcome = WalkOutcome::discarded;
  cplx exit;
  std::uint64_t steps = 0;
};

inline WalkResult wos_walk(const SlitDiskDomain& D, cplx start, const WosOptions& o, std::uint64_t index) {
  CounterRng rng(o.seed, index);
  cplx x = start;
  WalkResult r;
  for (r.steps = 0; r.steps < o.cap; ++r.steps) {
    const double dc = 1.0 - std::abs(x);
    const double ds = D.slit_distance(x);
    const double rad = std::min(dc, ds);
    if (rad < o.epsilon) {
      r.outcome = dc <= ds ? WalkOutcome::circle : WalkOutcome::slit;
      r.exit = x;
      return r;
    }
    x += std::polar(rad, 2.0 * std::numbers::pi * rng.uniform());
  }
  r.outcome = WalkOutcome::discarded;
  return r;
}

inline bool wos_hit(const WalkResult& w, const HmTarget& t) {
  switch (t.kind) {
    case HmTargetKind::slit: return w.outcome == WalkOutcome::slit;
    case HmTargetKind::circle: return w.outcome == WalkOutcome::circle;
    case HmTargetKind::arc: return w.outcome == WalkOutcome::circle && angle_in_arc(std::arg(w.exit), t.theta1, t.theta2);
  }
  return false;
}

// Fraction of walks absorbed at the target. Threads take contiguous blocks of
// walk indices and only integer counts are combined.
inline HmEstimate hm_wos(const SlitDiskDomain& D, DiskPoint z, const HmTarget& target, const WosOptions& o = {}) {
  if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw std::invalid_argument("hm_wos: epsilon must lie in (0, 1)");
  if (o.walks == 0) throw std::invalid_argument("hm_wos: need at least one walk");
  if (o.cap == 0) throw std::invalid_argument("hm_wos: walk cap must be positive");
  if (!D.contains(z.value())) throw std::domain_error("hm_wos: start point lies on the slit");
  if (target.kind == HmTargetKind::arc && !(target.theta1 <= target.theta2)) throw std::invalid_argument("hm_wos: arc needs theta1 <= theta2");
  unsigned threads = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, o.walks));
  struct Counts {
    std::uint64_t hits = 0, discards = 0, steps = 0;
  };
  std::vector<Counts> counts(threads);
  auto work = [&](unsigned k) {
    const std::uint64_t lo = o.walks * k / threads, hi = o.walks * (k + 1) / threads;
    Counts c;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const auto w = wos_walk(D, z.value(), o, i);
      c.steps += w.steps;
      if (w.outcome == WalkOutcome::discarded) ++c.discards;
      else if (wos_hit(w, target)) ++c.hits;
    }
    counts[k] = c;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k);
    for (auto& t : pool) t.join();
  }
  Counts sum;
  for (const auto& c : counts) {
    sum.hits += c.hits;
    sum.discards += c.discards;
    sum.steps += c.steps;
  }
  HmEstimate e;
  e.method = HmMethod::wos_monte_carlo;
  e.walks = o.walks;
  e.discards = sum.discards;
  e.accepted = o.walks - sum.discards;
  e.mean_steps = static_cast<double>(sum.steps) / static_cast<double>(o.walks);
  e.flagged = static_cast<double>(e.discards) > 0.01 * static_cast<double>(o.walks);
  if (e.accepted > 0) {
    e.value = static_cast<double>(sum.hits) / static_cast<double>(e.accepted);
    e.se = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(e.accepted));
  }
  return e;
}

// ---------------------------------------------------------------------------
// Trajectory tails

// Polyline through phi_t(z), t in [t0, inf), ending at tau. Segments are
// bisected until each chord is within `tol` of the curve midpoint; collinear
// runs are merged.
inline std::vector<cplx> trajectory_tail_polyline(const Trajectory& T, double t0, double tol = 1e-5) {
  const cplx tau = T.tau().value();
  std::vector<double> ts;
  for (double t = t0; ; t = t == 0.0 ? 1.0 : 2.0 * t) {
    ts.push_back(t);
    const auto p = T.point(t);
    if (p.dist_to_tau() < tol || t > 1e300) break;
  }
  const auto at = [&](double t) { return tau - T.point(t).offset_from_tau(); };
  std::vector<cplx> pts{at(ts.front())};
  std::vector<std::pair<double, double>> stack;
  for (std::size_t i = ts.size() - 1; i > 0; --i) stack.emplace_back(ts[i - 1], ts[i]);
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    const double m = 0.5 * (a + b);
    const cplx pa = at(a), pb = at(b), pm = at(m);
    if (point_segment_distance(pm, pa, pb) > tol && b - a > 1e-9 * std::max(1.0, a)) {
      stack.emplace_back(m, b);
      stack.emplace_back(a, m);
      continue;
    }
    pts.push_back(pb);
  }
  pts.push_back(tau);
  std::vector<cplx> merged;
  for (cplx p : pts) {
    if (!merged.empty() && merged.back() == p) continue;
    if (merged.size() >= 2) {
      const cplx a = merged[merged.size() - 2], b = merged.back();
      if (detail::cross(b - a, p - b) == 0.0 && ((b - a) * std::conj(p - b)).real() > 0.0) merged.back() = p;
      else merged.push_back(p);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

struct TailHmRow {
  double n = 0.0;
  double omega_hat = 0.0;
  double se = 0.0;
  std::uint64_t discards = 0;
  bool flagged = false;
  double dist_to_tau = 0.0;  // |phi_n(z) - tau|
  double arcsin_floor = 0.0; // (1/pi) arcsin(|phi_n(z) - tau| / 2)
  double scaled = 0.0;       // omega_hat sqrt(n)
  bool floor_ok = false;     // arcsin_floor - 3 se <= omega_hat
};

struct TailHmSeries {
  std::vector<TailHmRow> rows;
  double max_scaled = 0.0;
  bool floor_chain_ok = true;
  bool bounded = false;  // max omega_hat sqrt(n) <= bound
  double bound = 5.0;
};

// omega(0, gamma_n, D \ gamma_n) for gamma_n the trajectory tail from phi_n(z).
inline TailHmSeries tail_hm_series(const ModelMap& f, DiskPoint z, const std::vector<double>& n_grid, const WosOptions& o = {}, double bound = 5.0) {
  if (n_grid.empty()) throw std::invalid_argument("tail_hm_series: empty n-grid");
  const Trajectory T(f, z);
  TailHmSeries s;
  s.bound = bound;
  for (double n : n_grid) {
    if (!(n > 0.0)) throw std::invalid_argument("tail_hm_series: grid values must be positive");
    const SlitDiskDomain D(trajectory_tail_polyline(T, n, 0.1 * o.epsilon));
    if (!D.contains(0.0)) throw std::domain_error("tail_hm_series: the tail passes through 0");
    const auto e = hm_wos(D, DiskPoint(0.0, 0.0), HmTarget::slit(), o);
    TailHmRow r;
    r.n = n;
    r.omega_hat = e.value;
    r.se = e.se;
    r.discards = e.discards;
    r.flagged = e.flagged;
    r.dist_to_tau = T.point(n).dist_to_tau();
    r.arcsin_floor = std::asin(std::min(1.0, r.dist_to_tau / 2.0)) / std::numbers::pi;
    r.scaled = r.omega_hat * std::sqrt(n);
    r.floor_ok = r.arcsin_floor - 3.0 * r.se <= r.omega_hat;
    s.floor_chain_ok = s.floor_chain_ok && r.floor_ok && !r.flagged;
    s.max_scaled = std::max(s.max_scaled, r.scaled);
    s.rows.push_back(r);
  }
  s.bounded = s.max_scaled <= bound;
  return s;
}

}  // namespace hdisc
