#pragma once

// Hyperbolic geometry of the unit disc and its half-plane charts.
//
// The disc carries the metric |dz|/(1-|z|^2) (curvature -4), so
//   d(z,w) = artanh |z-w|/|1-conj(w)z|.
// Points close to the boundary are better represented in the right half-plane
// chart w = (1 + conj(tau) z)/(1 - conj(tau) z) attached to a boundary point
// tau; ChartPoint carries that representation, optionally in log scale, and
// derives every disc quantity (1-|z|, |z-tau|, slope, distances) from it
// without forming 1-|z| by subtraction.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdisc {

using cplx = std::complex<double>;

namespace tol {
inline constexpr double closed_form = 1e-12;
inline constexpr double quadrature = 1e-9;
}  // namespace tol

inline bool is_finite(cplx z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// acosh(1 + q) for q >= 0 without cancellation at small q or overflow at large q.
inline double acosh1p(double q) {
  if (q < 1e150) return std::log1p(q + std::sqrt(q * (q + 2.0)));
  return std::log(q) + std::log(1.0 + 1.0 / q + std::sqrt(1.0 + 2.0 / q));
}

// acosh(1 + exp(log_q)).
inline double acosh1p_from_log(double log_q) {
  if (log_q < 340.0) return acosh1p(std::exp(log_q));
  const double inv = std::exp(-log_q);
  return log_q + std::log(1.0 + inv + std::sqrt(1.0 + 2.0 * inv));
}

// ---------------------------------------------------------------------------
// Points

class DiskPoint {
 public:
  DiskPoint() = default;
  explicit DiskPoint(cplx z) : z_(z) {
    if (!is_finite(z)) throw std::invalid_argument("DiskPoint: non-finite coordinates");
    if (std::abs(z) >= 1.0) throw std::domain_error("DiskPoint: |z| >= 1");
  }
  DiskPoint(double re, double im) : DiskPoint(cplx(re, im)) {}

  static std::optional<DiskPoint> try_make(cplx z) noexcept {
    if (!is_finite(z) || std::abs(z) >= 1.0) return std::nullopt;
    DiskPoint p;
    p.z_ = z;
    return p;
  }

  [[nodiscard]] cplx value() const noexcept { return z_; }
  [[nodiscard]] double re() const noexcept { return z_.real(); }
  [[nodiscard]] double im() const noexcept { return z_.imag(); }
  [[nodiscard]] double modulus() const noexcept { return std::abs(z_); }
  // 1-|z|^2 as a product; |z| itself is exact for the stored double.
  [[nodiscard]] double one_minus_mod_sq() const noexcept {
    const double r = modulus();
    return (1.0 - r) * (1.0 + r);
  }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  cplx z_{};
};

// Unimodular number stored by its angle in [0, 2pi). Angle 0 maps to exactly 1.
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("BoundaryPoint: non-finite angle");
    angle_ = std::fmod(angle, 2.0 * std::numbers::pi);
    if (angle_ < 0.0) angle_ += 2.0 * std::numbers::pi;
    if (angle_ >= 2.0 * std::numbers::pi) angle_ = 0.0;
  }
  [[nodiscard]] double angle() const noexcept { return angle_; }
  [[nodiscard]] cplx value() const noexcept {
    if (angle_ == 0.0) return {1.0, 0.0};
    return std::polar(1.0, angle_);
  }
  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  double angle_ = 0.0;
};

enum class HalfPlaneChart { right, upper };

inline const char* to_string(HalfPlaneChart c) { return c == HalfPlaneChart::right ? "right" : "upper"; }

class HalfPlanePoint {
 public:
  HalfPlanePoint(cplx w, HalfPlaneChart chart) : w_(w), chart_(chart) {
    if (!is_finite(w)) throw std::invalid_argument("HalfPlanePoint: non-finite coordinates");
    const double h = chart == HalfPlaneChart::right ? w.real() : w.imag();
    if (!(h > 0.0)) throw std::domain_error("HalfPlanePoint: point not inside the half-plane");
  }
  [[nodiscard]] cplx value() const noexcept { return w_; }
  [[nodiscard]] HalfPlaneChart chart() const noexcept { return chart_; }
  // Same point expressed in the right half-plane (upper = i * right).
  [[nodiscard]] cplx as_right() const noexcept {
    return chart_ == HalfPlaneChart::right ? w_ : cplx(w_.imag(), -w_.real());
  }

 private:
  cplx w_;
  HalfPlaneChart chart_;
};

// Cayley charts: right C(z) = (1+z)/(1-z), upper C(z) = i(1+z)/(1-z). Both send 1 to infinity.
inline cplx cayley_to_half_plane(DiskPoint z, HalfPlaneChart chart) {
  const cplx w = (1.0 + z.value()) / (1.0 - z.value());
  return chart == HalfPlaneChart::right ? w : cplx(-w.imag(), w.real());
}

inline DiskPoint cayley_to_disk(const HalfPlanePoint& p) {
  const cplx w = p.as_right();
  return DiskPoint((w - 1.0) / (w + 1.0));
}

// ---------------------------------------------------------------------------
// Right half-plane points with an optional log-scale representation

// w = exp(log_mod) * dir with |dir| = 1 and Re dir > 0. A Cartesian value is
// kept whenever it is representable; distances prefer it.
class RhpPoint {
 public:
  static RhpPoint from_cartesian(cplx w) {
    if (!is_finite(w) || !(w.real() > 0.0)) throw std::domain_error("RhpPoint: point not in the right half-plane");
    RhpPoint p;
    const double m = std::abs(w);
    p.log_mod_ = std::log(m);
    p.dir_ = w / m;
    p.cart_ = w;
    return p;
  }

  // `cart` may carry an exactly known Cartesian value (e.g. 2^n); otherwise one
  // is formed when |w| is moderate.
  static RhpPoint from_log_polar(double log_mod, cplx dir, std::optional<cplx> cart = std::nullopt) {
    if (!std::isfinite(log_mod) || !is_finite(dir)) throw std::invalid_argument("RhpPoint: non-finite log-polar data");
    const double m = std::abs(dir);
    dir /= m;
    if (!(dir.real() > 0.0)) throw std::domain_error("RhpPoint: direction outside the right half-plane");
    RhpPoint p;
    p.log_mod_ = log_mod;
    p.dir_ = dir;
    if (cart && is_finite(*cart) && cart->real() > 0.0) {
      p.cart_ = cart;
    } else if (log_mod < 300.0 && log_mod > -300.0) {
      p.cart_ = std::exp(log_mod) * dir;
    }
    return p;
  }

  [[nodiscard]] bool has_cartesian() const noexcept { return cart_.has_value(); }
  [[nodiscard]] cplx cartesian() const {
    if (!cart_) throw std::overflow_error("RhpPoint: Cartesian value not representable");
    return *cart_;
  }
  [[nodiscard]] double log_modulus() const noexcept { return log_mod_; }
  [[nodiscard]] cplx direction() const noexcept { return dir_; }
  [[nodiscard]] double log_re() const noexcept {
    return cart_ ? std::log(cart_->real()) : log_mod_ + std::log(dir_.real());
  }
  // log |w + 1|
  [[nodiscard]] double log_abs_plus_one() const noexcept {
    if (cart_) return std::log(std::abs(*cart_ + 1.0));
    if (log_mod_ <= 0.0) return std::log(std::abs(std::exp(log_mod_) * dir_ + 1.0));
    const double e = std::exp(-log_mod_);
    return log_mod_ + 0.5 * std::log1p(2.0 * e * dir_.real() + e * e);
  }
  // arg(w + 1)
  [[nodiscard]] double arg_plus_one() const noexcept {
    if (cart_) return std::arg(*cart_ + 1.0);
    const double e = std::exp(-log_mod_);
    return std::atan2(dir_.imag(), dir_.real() + e);
  }
  // 2/(w + 1), the chart's offset from the boundary point.
  [[nodiscard]] cplx two_over_plus_one() const noexcept {
    if (cart_) return 2.0 / (*cart_ + 1.0);
    if (log_mod_ <= 0.0) return 2.0 / (std::exp(log_mod_) * dir_ + 1.0);
    const double e = std::exp(-log_mod_);
    return 2.0 * e / (dir_ + e);
  }

 private:
  RhpPoint() = default;
  double log_mod_ = 0.0;
  cplx dir_{1.0, 0.0};
  std::optional<cplx> cart_;
};

// Hyperbolic distance in the right half-plane, metric |dw|/(2 Re w):
//   cosh(2d) = 1 + |w1-w2|^2 / (2 Re w1 Re w2).
inline double rhp_distance(cplx w1, cplx w2) {
  if (!(w1.real() > 0.0) || !(w2.real() > 0.0)) throw std::domain_error("rhp_distance: point outside the right half-plane");
  if (w1 == w2) return 0.0;
  const double q = std::norm(w1 - w2) / (2.0 * w1.real() * w2.real());
  if (std::isfinite(q)) return 0.5 * acosh1p(q);
  const double log_q = 2.0 * std::log(std::abs(w1 - w2)) - std::log(2.0) - std::log(w1.real()) - std::log(w2.real());
  return 0.5 * acosh1p_from_log(log_q);
}

inline double rhp_distance(const RhpPoint& a, const RhpPoint& b) {
  if (a.has_cartesian() && b.has_cartesian()) return rhp_distance(a.cartesian(), b.cartesian());
  // Log-polar form: with u = (log|a| - log|b|)/2,
  //   cosh(2d) - 1 = (2 sinh^2 u + |dir_a - dir_b|^2 / 2) / (cos a cos b).
  const double u = std::abs(0.5 * (a.log_modulus() - b.log_modulus()));
  const double ang = 0.5 * std::norm(a.direction() - b.direction());
  const double cc = a.direction().real() * b.direction().real();
  if (u < 20.0) {
    const double sh = std::sinh(u);
    return 0.5 * acosh1p((2.0 * sh * sh + ang) / cc);
  }
  const double e = std::exp(-2.0 * u);
  const double log_num = 2.0 * u - std::log(2.0) + std::log((1.0 - e) * (1.0 - e) + 2.0 * ang * e);
  return 0.5 * acosh1p_from_log(log_num - std::log(cc));
}

// Disc point z = tau (w-1)/(w+1) carried in the right half-plane chart at tau.
class ChartPoint {
 public:
  ChartPoint(BoundaryPoint tau, RhpPoint w) : tau_(tau), w_(w) {}

  static ChartPoint from_disk(DiskPoint z, BoundaryPoint tau = {}) {
    const cplx v = std::conj(tau.value()) * z.value();
    return {tau, RhpPoint::from_cartesian((1.0 + v) / (1.0 - v))};
  }

  [[nodiscard]] BoundaryPoint tau() const noexcept { return tau_; }
  [[nodiscard]] const RhpPoint& chart() const noexcept { return w_; }

  // Disc coordinate; nullopt when it rounds onto the unit circle.
  [[nodiscard]] std::optional<DiskPoint> disk() const noexcept {
    const cplx z = tau_.value() * (1.0 - w_.two_over_plus_one());
    return DiskPoint::try_make(z);
  }
  [[nodiscard]] bool saturated() const noexcept { return !disk().has_value(); }

  // tau - z
  [[nodiscard]] cplx offset_from_tau() const noexcept { return tau_.value() * w_.two_over_plus_one(); }
  [[nodiscard]] double log_dist_to_tau() const noexcept { return std::log(2.0) - w_.log_abs_plus_one(); }
  [[nodiscard]] double dist_to_tau() const noexcept { return std::exp(log_dist_to_tau()); }
  // log(1 - |z|^2) = log(4 Re w) - 2 log|w+1|
  [[nodiscard]] double log_one_minus_mod_sq() const noexcept {
    return std::log(4.0) + w_.log_re() - 2.0 * w_.log_abs_plus_one();
  }
  [[nodiscard]] double log_one_minus_mod() const noexcept {
    const double omm2 = std::exp(log_one_minus_mod_sq());
    const double mod = std::sqrt(std::max(0.0, 1.0 - omm2));
    return log_one_minus_mod_sq() - std::log1p(mod);
  }
  [[nodiscard]] double one_minus_mod() const noexcept { return std::exp(log_one_minus_mod()); }
  // arg(1 - conj(tau) z) = -arg(w + 1), in (-pi/2, pi/2).
  [[nodiscard]] double slope_angle() const noexcept { return -w_.arg_plus_one(); }
  // log of the Julia quotient |tau - z|^2 / (1 - |z|^2) = 1/Re w.
  [[nodiscard]] double log_julia_quotient() const noexcept { return -w_.log_re(); }
  // Angle of z itself.
  [[nodiscard]] double arg() const noexcept {
    const cplx v = 1.0 - w_.two_over_plus_one();
    return tau_.angle() + std::arg(v);
  }

  [[nodiscard]] double distance_to(const ChartPoint& other) const {
    if (!(other.tau_ == tau_)) {
      auto a = disk();
      auto b = other.disk();
      if (!a || !b) throw std::domain_error("ChartPoint: saturated points in different charts");
      return distance_disk_impl(a->value(), b->value());
    }
    return rhp_distance(w_, other.w_);
  }
  // d(0, z) = d_H(1, w)
  [[nodiscard]] double distance_from_origin() const {
    return rhp_distance(RhpPoint::from_cartesian({1.0, 0.0}), w_);
  }
  // z_other - z, formed from chart offsets to avoid subtracting points near tau.
  [[nodiscard]] cplx difference_to(const ChartPoint& other) const {
    if (!(other.tau_ == tau_)) {
      auto a = disk();
      auto b = other.disk();
      if (!a || !b) throw std::domain_error("ChartPoint: saturated points in different charts");
      return b->value() - a->value();
    }
    return tau_.value() * (w_.two_over_plus_one() - other.w_.two_over_plus_one());
  }

 private:
  static double distance_disk_impl(cplx z, cplx w) {
    const double delta = std::abs(z - w);
    if (delta == 0.0) return 0.0;
    const double rho = std::abs(1.0 - std::conj(w) * z);
    const double rz = std::abs(z), rw = std::abs(w);
    const double gap = (1.0 - rz) * (1.0 + rz) * (1.0 - rw) * (1.0 + rw) / (rho + delta);
    return 0.5 * std::log1p(2.0 * delta / gap);
  }

  BoundaryPoint tau_;
  RhpPoint w_;
};

// ---------------------------------------------------------------------------
// Metric and distances

inline double metric_disk(DiskPoint z) {
  const double r = z.modulus();
  return 1.0 / ((1.0 - r) * (1.0 + r));
}

// d(z,w) = 1/2 log1p(2 delta/(rho - delta)) with rho - delta taken from
// rho^2 - delta^2 = (1-|z|^2)(1-|w|^2), which avoids the cancellation.
inline double dist_disk(DiskPoint z, DiskPoint w) {
  const double delta = std::abs(z.value() - w.value());
  if (delta == 0.0) return 0.0;
  const double rho = std::abs(1.0 - std::conj(w.value()) * z.value());
  if (!(rho > delta)) throw std::domain_error("dist_disk: rho <= delta");
  const double gap = z.one_minus_mod_sq() * w.one_minus_mod_sq() / (rho + delta);
  return 0.5 * std::log1p(2.0 * delta / gap);
}

inline double dist_halfplane(const HalfPlanePoint& a, const HalfPlanePoint& b) {
  return rhp_distance(a.as_right(), b.as_right());
}

inline double dist_halfplane(cplx w1, cplx w2, HalfPlaneChart chart) {
  return dist_halfplane(HalfPlanePoint(w1, chart), HalfPlanePoint(w2, chart));
}

// Disc automorphism z -> e^{i theta} (z - a)/(1 - conj(a) z).
class DiscAutomorphism {
 public:
  DiscAutomorphism(double rotation, DiskPoint a) : rot_(std::polar(1.0, rotation)), a_(a.value()) {}
  [[nodiscard]] DiskPoint operator()(DiskPoint z) const {
    return DiskPoint(rot_ * (z.value() - a_) / (1.0 - std::conj(a_) * z.value()));
  }
  [[nodiscard]] DiskPoint inverse(DiskPoint z) const {
    const cplx u = z.value() / rot_;
    return DiskPoint((u + a_) / (1.0 + std::conj(a_) * u));
  }

 private:
  cplx rot_;
  cplx a_;
};

enum class MetricTag { disc, right_half_plane, upper_half_plane };

inline double metric_density(MetricTag tag, cplx p) {
  switch (tag) {
    case MetricTag::disc: {
      const double r = std::abs(p);
      if (!(r < 1.0)) throw std::domain_error("curve_length: sample outside the disc");
      return 1.0 / ((1.0 - r) * (1.0 + r));
    }
    case MetricTag::right_half_plane:
      if (!(p.real() > 0.0)) throw std::domain_error("curve_length: sample outside the half-plane");
      return 1.0 / (2.0 * p.real());
    case MetricTag::upper_half_plane:
      if (!(p.imag() > 0.0)) throw std::domain_error("curve_length: sample outside the half-plane");
      return 1.0 / (2.0 * p.imag());
  }
  throw std::logic_error("metric_density: unknown tag");
}

template <class F>
concept DensityFunction = requires(const F& f, cplx p) {
  { f(p) } -> std::convertible_to<double>;
};

// Trapezoid rule for the hyperbolic length of the polyline through `samples`.
template <DensityFunction Density>
double curve_length(const Density& density, std::span<const cplx> samples) {
  if (samples.size() < 2) throw std::invalid_argument("curve_length: need at least two samples");
  double total = 0.0;
  double prev = density(samples[0]);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double cur = density(samples[i]);
    total += 0.5 * (prev + cur) * std::abs(samples[i] - samples[i - 1]);
    prev = cur;
  }
  return total;
}

inline double curve_length(MetricTag tag, std::span<const cplx> samples) {
  return curve_length([tag](cplx p) { return metric_density(tag, p); }, samples);
}

// ---------------------------------------------------------------------------
// Stolz angles, sectors, horodiscs

class StolzAngle {
 public:
  StolzAngle(BoundaryPoint vertex, double aperture) : vertex_(vertex), aperture_(aperture) {
    if (!(aperture > 1.0)) throw std::invalid_argument("StolzAngle: aperture must exceed 1");
  }
  [[nodiscard]] BoundaryPoint vertex() const noexcept { return vertex_; }
  [[nodiscard]] double aperture() const noexcept { return aperture_; }

 private:
  BoundaryPoint vertex_;
  double aperture_;
};

inline bool stolz_contains(const StolzAngle& s, DiskPoint z) {
  return std::abs(s.vertex().value() - z.value()) / (1.0 - z.modulus()) < s.aperture();
}

// Sector S(gamma, R) around the geodesic [gamma0, +inf) of the right half-plane.
class HalfPlaneSector {
 public:
  HalfPlaneSector(double base, double amplitude) : base_(base), amplitude_(amplitude) {
    if (!(base > 0.0) || !(amplitude > 0.0)) throw std::invalid_argument("HalfPlaneSector: base and amplitude must be positive");
    complement_ = solve_half_aperture_complement(amplitude);
    beta_ = std::numbers::pi / 2.0 - complement_;
  }
  [[nodiscard]] double base() const noexcept { return base_; }
  [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] double half_aperture() const noexcept { return beta_; }
  // pi/2 - beta, kept separately because beta approaches pi/2 for large R.
  [[nodiscard]] double half_aperture_complement() const noexcept { return complement_; }

  // c in (0, pi/2) with d_H(1, e^{i(pi/2 - c)}) = R, by bisection on c.
  static double solve_half_aperture_complement(double amplitude) {
    double lo = 0.0, hi = std::numbers::pi / 2.0;
    for (int it = 0; it < 2000 && hi - lo > 1e-300; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (rhp_distance(cplx(1.0, 0.0), cplx(std::sin(mid), std::cos(mid))) > amplitude) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  static double solve_half_aperture(double amplitude) {
    return std::numbers::pi / 2.0 - solve_half_aperture_complement(amplitude);
  }

 private:
  double base_;
  double amplitude_;
  double beta_ = 0.0;
  double complement_ = 0.0;
};

inline bool sector_halfplane_contains(const HalfPlaneSector& s, cplx w) {
  if (!(w.real() > 0.0)) return false;
  if (rhp_distance(w, cplx(s.base(), 0.0)) < s.amplitude()) return true;
  return std::abs(w) > s.base() && std::abs(std::arg(w)) < s.half_aperture();
}

// E(tau, R) = { z : |tau - z|^2/(1 - |z|^2) < R }, a disc of radius R/(1+R)
// centred at tau/(1+R).
class Horodisc {
 public:
  Horodisc(BoundaryPoint contact, double level) : contact_(contact), level_(level) {
    if (!(level > 0.0)) throw std::invalid_argument("Horodisc: level must be positive");
  }
  [[nodiscard]] BoundaryPoint contact() const noexcept { return contact_; }
  [[nodiscard]] double level() const noexcept { return level_; }
  [[nodiscard]] double radius() const noexcept { return level_ / (1.0 + level_); }
  [[nodiscard]] cplx center() const noexcept { return contact_.value() / (1.0 + level_); }
  [[nodiscard]] bool contains(cplx z) const noexcept { return std::abs(z - center()) < radius(); }

 private:
  BoundaryPoint contact_;
  double level_;
};

inline double julia_quotient(BoundaryPoint tau, DiskPoint z) {
  return std::norm(tau.value() - z.value()) / z.one_minus_mod_sq();
}

// Julia's inequality J(f z) <= f'(tau) J(z); the slack is relative to the
// right-hand side's magnitude (floor 1).
inline bool julia_check(BoundaryPoint tau, double fprime_tau, DiskPoint z, DiskPoint fz, double slack = tol::closed_form) {
  if (!(fprime_tau > 0.0 && fprime_tau <= 1.0)) throw std::invalid_argument("julia_check: angular derivative must lie in (0,1]");
  const double rhs = fprime_tau * julia_quotient(tau, z);
  return julia_quotient(tau, fz) <= rhs + slack * std::max(1.0, rhs);
}

inline bool julia_check(double fprime_tau, const ChartPoint& z, const ChartPoint& fz, double slack = tol::closed_form) {
  return fz.log_julia_quotient() <= std::log(fprime_tau) + z.log_julia_quotient() + slack;
}

// ---------------------------------------------------------------------------
// Two-sided distance bracket from boundary distances

template <class D>
concept BoundaryDistanceDomain = requires(const D& d, cplx p) {
  { d.contains(p) } -> std::convertible_to<bool>;
  { d.boundary_distance(p) } -> std::convertible_to<double>;
  { d.segment_inside(p, p) } -> std::convertible_to<bool>;
};

struct DistanceBracket {
  double lower = 0.0;
  std::optional<double> upper;
};

// lower = 1/4 log(1 + |z1-z2|/min delta), upper = integral of |dz|/delta along
// the straight segment (trapezoid, doubled until the relative change is below
// tol::quadrature), reported only when the segment stays in the domain.
template <BoundaryDistanceDomain D>
DistanceBracket distance_lemma_bounds(const D& domain, cplx z1, cplx z2) {
  if (!domain.contains(z1) || !domain.contains(z2)) throw std::domain_error("distance_lemma_bounds: point outside the domain");
  DistanceBracket out;
  const double len = std::abs(z1 - z2);
  if (len == 0.0) {
    out.upper = 0.0;
    return out;
  }
  const double dmin = std::min(domain.boundary_distance(z1), domain.boundary_distance(z2));
  out.lower = 0.25 * std::log1p(len / dmin);
  if (!domain.segment_inside(z1, z2)) return out;

  auto trapezoid = [&](std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n);
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += w / domain.boundary_distance(z1 + t * (z2 - z1));
    }
    return acc * len / static_cast<double>(n);
  };
  std::size_t n = 64;
  double prev = trapezoid(n);
  for (int it = 0; it < 16; ++it) {
    n *= 2;
    const double cur = trapezoid(n);
    const bool done = std::abs(cur - prev) <= tol::quadrature * cur;
    prev = cur;
    if (done) break;
  }
  out.upper = prev;
  return out;
}

struct RateBracket {
  double lo;
  double hi;
};

// For d = d(0,z): e^{-2d} <= 1 - |z| <= 2 e^{-2d}.
inline RateBracket euclid_rate_bracket(double d) {
  if (!(d >= 0.0)) throw std::invalid_argument("euclid_rate_bracket: distance must be non-negative");
  const double e = std::exp(-2.0 * d);
  return {e, 2.0 * e};
}

}  // namespace hdisc
