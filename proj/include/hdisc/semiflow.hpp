#pragma once

// Continuous semigroups phi_t = h^{-1}(h + t) for charted univalent models whose
// Koenigs domain is starlike at infinity, so the fundamental domain is the
// whole disc and the entry time n0 is 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hdisc/domains.hpp"
#include "hdisc/fit.hpp"
#include "hdisc/maps.hpp"
#include "hdisc/qgeo.hpp"
#include "hdisc/slope.hpp"

namespace hdisc {

class UnsupportedMap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace semiflow_tol {
inline constexpr double exact = 1e-12;       // embed, invariance, semigroup law
inline constexpr double composition = 1e-10; // phi_n against n direct evaluations of f
inline constexpr std::uint64_t composition_depth = 256;
inline constexpr double lipschitz_slack = 1e-12;
inline constexpr double euclid_factor = 16.0;  // 8 diam(D) with diam = 2
inline constexpr double slope_agreement = 1e-3;
inline constexpr double landing_exponent = -0.48;
}  // namespace semiflow_tol

class Trajectory {
 public:
  Trajectory(const ModelMap& f, DiskPoint z) : z_(z), name_(f.name()), tau_(f.tau()) {
    if (!f.semiflow_ready())
      throw UnsupportedMap("semiflow: " + f.name() + " is not a charted univalent map with Koenigs domain starlike at infinity");
    chart_ = f.shared_chart();
    h0_ = chart_->forward(z);
  }

  [[nodiscard]] const std::string& map_name() const noexcept { return name_; }
  [[nodiscard]] DiskPoint start() const noexcept { return z_; }
  [[nodiscard]] BoundaryPoint tau() const noexcept { return tau_; }
  [[nodiscard]] std::uint64_t entry_time() const noexcept { return 0; }
  [[nodiscard]] const KoenigsChart& chart() const noexcept { return *chart_; }

  [[nodiscard]] cplx koenigs(double t) const {
    check(t);
    return h0_ + t;
  }
  [[nodiscard]] ChartPoint point(double t) const {
    check(t);
    if (t == 0.0) return ChartPoint::from_disk(z_, tau_);
    return chart_->inverse(koenigs(t));
  }
  [[nodiscard]] std::optional<DiskPoint> disk(double t) const {
    check(t);
    if (t == 0.0) return z_;
    return point(t).disk();
  }
  [[nodiscard]] double distance(double t1, double t2) const {
    if (t1 == t2) return 0.0;
    return chart_->distance(koenigs(t1), koenigs(t2));
  }
  // Distance from h(z) to the boundary of the Koenigs domain.
  [[nodiscard]] double delta() const { return boundary_distance(chart_->omega, h0_); }

 private:
  static void check(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("Trajectory: t must be finite and non-negative");
  }

  DiskPoint z_;
  std::string name_;
  BoundaryPoint tau_;
  std::shared_ptr<const KoenigsChart> chart_;
  cplx h0_{};
};

// phi_t(z); throws BoundarySaturated when the point rounds onto the circle.
inline DiskPoint trajectory_eval(const Trajectory& T, double t) {
  auto z = T.disk(t);
  if (!z) throw BoundarySaturated("trajectory_eval: phi_t(z) is boundary-saturated at t = " + std::to_string(t));
  return *z;
}

struct SemiflowCheck {
  std::string name;
  bool pass = false;
  double max_error = 0.0;   // or max ratio for the Lipschitz checks
  double bound = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // saturated samples
  std::string detail;
};

// |phi_n - f^n| for n <= n_max, against the charted orbit (all n) and against
// n direct evaluations of f while the disc points stay representable.
inline SemiflowCheck embed_check(const ModelMap& f, const Trajectory& T, std::uint64_t n_max) {
  SemiflowCheck c{"embed", true, 0.0, semiflow_tol::exact, 0, 0, {}};
  const auto orbit = iterate(f, T.start(), n_max);
  Grid g;
  if (n_max <= 10'000) {
    for (std::uint64_t n = 0; n <= n_max; ++n) g.push_back(n);
  } else {
    g = default_grid(n_max);
    g.insert(g.begin(), 0);
    normalize_grid(g);
  }
  for (auto n : g) {
    const double e = std::abs(T.point(static_cast<double>(n)).difference_to(orbit.point(n)));
    c.max_error = std::max(c.max_error, e);
    ++c.checked;
  }
  double comp_err = 0.0;
  DiskPoint cur = T.start();
  const std::uint64_t depth = std::min(n_max, semiflow_tol::composition_depth);
  for (std::uint64_t n = 1; n <= depth; ++n) {
    auto next = f.try_eval(cur);
    if (!next) {
      c.skipped += depth - n + 1;
      break;
    }
    cur = *next;
    const auto phi = T.point(static_cast<double>(n));
    comp_err = std::max(comp_err, std::abs(phi.difference_to(ChartPoint::from_disk(cur, T.tau()))));
  }
  c.pass = c.max_error < semiflow_tol::exact && comp_err < semiflow_tol::composition;
  c.detail = "orbit " + fmt_double(c.max_error) + ", composition " + fmt_double(comp_err);
  return c;
}

// |f(phi_t) - phi_{t+1}| on the grid; saturated phi_t are skipped.
inline SemiflowCheck invariance_check(const ModelMap& f, const Trajectory& T, const std::vector<double>& t_grid) {
  SemiflowCheck c{"invariance", true, 0.0, semiflow_tol::exact, 0, 0, {}};
  for (double t : t_grid) {
    const auto z = T.disk(t);
    if (!z) {
      ++c.skipped;
      continue;
    }
    const auto fz = f.try_eval(*z);
    if (!fz) {
      ++c.skipped;
      continue;
    }
    c.max_error = std::max(c.max_error, std::abs(T.point(t + 1.0).difference_to(ChartPoint::from_disk(*fz, T.tau()))));
    ++c.checked;
  }
  c.pass = c.checked > 0 && c.max_error < semiflow_tol::exact;
  return c;
}

// |phi_s(phi_t(z)) - phi_{s+t}(z)| on the product grid.
inline SemiflowCheck semigroup_check(const ModelMap& f, const Trajectory& T, const std::vector<double>& s_grid, const std::vector<double>& t_grid) {
  SemiflowCheck c{"semigroup-law", true, 0.0, semiflow_tol::exact, 0, 0, {}};
  for (double t : t_grid) {
    const auto zt = T.disk(t);
    if (!zt) {
      c.skipped += s_grid.size();
      continue;
    }
    const Trajectory inner(f, *zt);
    for (double s : s_grid) {
      c.max_error = std::max(c.max_error, std::abs(inner.point(s).difference_to(T.point(s + t))));
      ++c.checked;
    }
  }
  c.pass = c.checked > 0 && c.max_error < semiflow_tol::exact;
  return c;
}

// d(phi_t1, phi_t2) <= |t1 - t2| / delta_Omega(h(z)).
inline SemiflowCheck lipschitz_hyperbolic_check(const Trajectory& T, const std::vector<std::pair<double, double>>& pairs) {
  SemiflowCheck c{"lipschitz-hyperbolic", true, 0.0, 1.0 / T.delta(), 0, 0, {}};
  for (auto [a, b] : pairs) {
    const double d = T.distance(a, b);
    const double dt = std::abs(a - b);
    if (d > c.bound * dt + semiflow_tol::lipschitz_slack) c.pass = false;
    if (dt > 0.0) c.max_error = std::max(c.max_error, d / dt);
    ++c.checked;
  }
  c.detail = "max ratio " + fmt_double(c.max_error) + ", constant " + fmt_double(c.bound);
  return c;
}

// |phi_t1 - phi_t2| <= 16 |t1 - t2| / delta_Omega(h(z)).
inline SemiflowCheck lipschitz_euclidean_check(const Trajectory& T, const std::vector<std::pair<double, double>>& pairs) {
  SemiflowCheck c{"lipschitz-euclidean", true, 0.0, semiflow_tol::euclid_factor / T.delta(), 0, 0, {}};
  for (auto [a, b] : pairs) {
    const double e = std::abs(T.point(a).difference_to(T.point(b)));
    const double dt = std::abs(a - b);
    if (e > c.bound * dt + semiflow_tol::lipschitz_slack) c.pass = false;
    if (dt > 0.0) c.max_error = std::max(c.max_error, e / dt);
    ++c.checked;
  }
  c.detail = "max ratio " + fmt_double(c.max_error) + ", constant " + fmt_double(c.bound);
  return c;
}

// Tail slope cluster of the trajectory against that of the orbit.
inline SemiflowCheck slope_agreement_check(const ModelMap& f, const Trajectory& T, double t_max) {
  SemiflowCheck c{"slope-agreement", false, 0.0, semiflow_tol::slope_agreement, 0, 0, {}};
  std::vector<double> traj;
  for (double t : log_grid_real(1.0, t_max, 40)) traj.push_back(T.point(t).slope_angle());
  const auto ct = cluster_estimate(traj);
  const auto n_max = static_cast<std::uint64_t>(t_max);
  const auto orbit = slope_report(f, T.start(), log_grid(1, n_max, 40));
  c.checked = traj.size() + orbit.theta.size();
  c.max_error = std::max(std::abs(ct.lo - orbit.cluster.lo), std::abs(ct.hi - orbit.cluster.hi));
  c.pass = ct.status != ClusterStatus::inconclusive && orbit.cluster.status != ClusterStatus::inconclusive && c.max_error <= c.bound;
  c.detail = "trajectory [" + fmt_double(ct.lo) + ", " + fmt_double(ct.hi) + "], orbit [" + fmt_double(orbit.cluster.lo) + ", " +
             fmt_double(orbit.cluster.hi) + "]";
  return c;
}

// |phi_t - tau| sqrt(t) on [1, t_max]: fitted c = max, and the tail exponent.
struct LandingFit {
  double c = NAN;
  LinearFit tail;
  bool pass = false;
};

inline LandingFit landing_fit(const Trajectory& T, double t_max) {
  LandingFit L;
  L.c = 0.0;
  std::vector<double> lt, ld;
  std::vector<std::size_t> tail;
  for (double t : log_grid_real(1.0, t_max, 20)) {
    const double l = T.point(t).log_dist_to_tau();
    L.c = std::max(L.c, std::exp(l + 0.5 * std::log(t)));
    if (t >= t_max / 10.0) tail.push_back(lt.size());
    lt.push_back(std::log(t));
    ld.push_back(l);
  }
  L.tail = fit_subset(lt, ld, tail);
  L.pass = std::isfinite(L.c) && L.tail.valid() && L.tail.slope <= semiflow_tol::landing_exponent;
  return L;
}

// Trajectory tail on [t_lo, t_hi] sampled geometrically, checked as a curve in
// the Koenigs domain, which is isometric to the disc through h.
inline QgCertificate trajectory_qg_check(const Trajectory& T, double t_lo, double t_hi, int per_decade = 20) {
  std::vector<CurveSample> samples;
  for (double t : log_grid_real(t_lo, t_hi, per_decade)) samples.push_back({t, T.koenigs(t)});
  return curve_qg_check(samples, T.chart().omega);
}

struct SemiflowOptions {
  std::uint64_t embed_n = 10'000;
  double invariance_t_max = 100.0;
  double invariance_dt = 0.25;
  double lipschitz_t_max = 5.0;
  double slope_t_max = 1e6;
  double landing_t_max = 1e6;
};

struct SemiflowReport {
  std::string map;
  DiskPoint z;
  std::uint64_t n0 = 0;
  std::vector<SemiflowCheck> checks;
  LandingFit landing;

  [[nodiscard]] bool passed() const {
    return landing.pass && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t i = 0; i <= n; ++i) g.push_back(lo + step * static_cast<double>(i));
  return g;
}

inline SemiflowReport semiflow_report(const ModelMap& f, DiskPoint z, const SemiflowOptions& o = {}) {
  const Trajectory T(f, z);
  SemiflowReport r;
  r.map = f.name();
  r.z = z;
  r.n0 = T.entry_time();
  r.checks.push_back(embed_check(f, T, o.embed_n));
  r.checks.push_back(invariance_check(f, T, uniform_grid(0.0, o.invariance_t_max, o.invariance_dt)));
  const auto st = uniform_grid(0.0, 4.0, 0.5);
  r.checks.push_back(semigroup_check(f, T, st, st));
  std::vector<std::pair<double, double>> pairs;
  const auto lg = uniform_grid(0.0, o.lipschitz_t_max, 0.125);
  for (std::size_t i = 0; i < lg.size(); ++i)
    for (std::size_t j = i; j < lg.size(); ++j) pairs.emplace_back(lg[i], lg[j]);
  r.checks.push_back(lipschitz_hyperbolic_check(T, pairs));
  r.checks.push_back(lipschitz_euclidean_check(T, pairs));
  r.checks.push_back(slope_agreement_check(f, T, o.slope_t_max));
  r.landing = landing_fit(T, o.landing_t_max);
  return r;
}

}  // namespace hdisc
