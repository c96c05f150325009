#pragma once

// Simply connected model domains with closed-form Riemann maps onto the disc.
// Every descriptor supplies membership, the Euclidean boundary distance, the
// hyperbolic metric density and the exact hyperbolic distance (by conformal
// transport, evaluated in whichever chart keeps it stable).

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "hdisc/hypgeo.hpp"

namespace hdisc {

struct UnitDisc {
  static constexpr const char* name = "disc";
  [[nodiscard]] bool contains(cplx w) const noexcept { return std::abs(w) < 1.0; }
  [[nodiscard]] double boundary_distance(cplx w) const noexcept { return 1.0 - std::abs(w); }
  [[nodiscard]] bool segment_inside(cplx a, cplx b) const noexcept { return contains(a) && contains(b); }
  [[nodiscard]] cplx from_disk(DiskPoint z) const noexcept { return z.value(); }
  [[nodiscard]] DiskPoint to_disk(cplx w) const { return DiskPoint(w); }
  [[nodiscard]] double density(cplx w) const { return metric_disk(DiskPoint(w)); }
  [[nodiscard]] double distance(cplx a, cplx b) const { return dist_disk(DiskPoint(a), DiskPoint(b)); }
};

struct RightHalfPlane {
  static constexpr const char* name = "rhp";
  [[nodiscard]] bool contains(cplx w) const noexcept { return w.real() > 0.0 && is_finite(w); }
  [[nodiscard]] double boundary_distance(cplx w) const noexcept { return w.real(); }
  [[nodiscard]] bool segment_inside(cplx a, cplx b) const noexcept { return contains(a) && contains(b); }
  [[nodiscard]] cplx from_disk(DiskPoint z) const { return cayley_to_half_plane(z, HalfPlaneChart::right); }
  [[nodiscard]] DiskPoint to_disk(cplx w) const { return cayley_to_disk(HalfPlanePoint(w, HalfPlaneChart::right)); }
  [[nodiscard]] double density(cplx w) const { return 1.0 / (2.0 * w.real()); }
  [[nodiscard]] double distance(cplx a, cplx b) const { return rhp_distance(a, b); }
};

struct UpperHalfPlane {
  static constexpr const char* name = "uhp";
  [[nodiscard]] bool contains(cplx w) const noexcept { return w.imag() > 0.0 && is_finite(w); }
  [[nodiscard]] double boundary_distance(cplx w) const noexcept { return w.imag(); }
  [[nodiscard]] bool segment_inside(cplx a, cplx b) const noexcept { return contains(a) && contains(b); }
  [[nodiscard]] cplx from_disk(DiskPoint z) const { return cayley_to_half_plane(z, HalfPlaneChart::upper); }
  [[nodiscard]] DiskPoint to_disk(cplx w) const { return cayley_to_disk(HalfPlanePoint(w, HalfPlaneChart::upper)); }
  [[nodiscard]] double density(cplx w) const { return 1.0 / (2.0 * w.imag()); }
  [[nodiscard]] double distance(cplx a, cplx b) const { return dist_halfplane(a, b, HalfPlaneChart::upper); }
};

// Horizontal strip |Im w| < a. exp(pi w / 2a) maps it onto the right half-plane,
// which makes its points log-polar right half-plane points.
struct Strip {
  double half_width = std::numbers::pi / 2.0;

  static constexpr const char* name = "strip";
  [[nodiscard]] double scale() const noexcept { return std::numbers::pi / (2.0 * half_width); }
  [[nodiscard]] bool contains(cplx w) const noexcept { return std::abs(w.imag()) < half_width && is_finite(w); }
  [[nodiscard]] double boundary_distance(cplx w) const noexcept { return half_width - std::abs(w.imag()); }
  [[nodiscard]] bool segment_inside(cplx a, cplx b) const noexcept { return contains(a) && contains(b); }
  [[nodiscard]] RhpPoint to_right_half_plane(cplx w) const {
    const double k = scale();
    return RhpPoint::from_log_polar(k * w.real(), std::polar(1.0, k * w.imag()));
  }
  [[nodiscard]] cplx from_disk(DiskPoint z) const {
    return std::log(cayley_to_half_plane(z, HalfPlaneChart::right)) / scale();
  }
  [[nodiscard]] DiskPoint to_disk(cplx w) const {
    if (!contains(w)) throw std::domain_error("Strip: point outside the strip");
    auto z = ChartPoint(BoundaryPoint{}, to_right_half_plane(w)).disk();
    if (!z) throw std::overflow_error("Strip: disc preimage not representable");
    return *z;
  }
  [[nodiscard]] double density(cplx w) const {
    return scale() / (2.0 * std::cos(scale() * w.imag()));
  }
  [[nodiscard]] double distance(cplx a, cplx b) const {
    return rhp_distance(to_right_half_plane(a), to_right_half_plane(b));
  }
};

// K = C \ (-inf, -1], the image of the disc under g(z) = ((1+z)/(1-z))^2 - 1.
struct SlitPlaneK {
  static constexpr const char* name = "k-slit";
  [[nodiscard]] bool contains(cplx w) const noexcept {
    return is_finite(w) && !(w.imag() == 0.0 && w.real() <= -1.0);
  }
  [[nodiscard]] double boundary_distance(cplx w) const noexcept {
    if (w.real() <= -1.0) return std::abs(w.imag());
    return std::abs(w + 1.0);
  }
  [[nodiscard]] bool segment_inside(cplx a, cplx b) const noexcept {
    if (!contains(a) || !contains(b)) return false;
    const double ya = a.imag(), yb = b.imag();
    if ((ya > 0.0 && yb > 0.0) || (ya < 0.0 && yb < 0.0)) return true;
    if (ya == 0.0 && yb == 0.0) return true;  // both on (-1, inf)
    const double t = ya / (ya - yb);
    const double x = a.real() + t * (b.real() - a.real());
    return x > -1.0;
  }
  // s = sqrt(w + 1), the right half-plane chart of K.
  [[nodiscard]] cplx half_plane_root(cplx w) const {
    if (!contains(w)) throw std::domain_error("SlitPlaneK: point on the slit");
    return std::sqrt(w + 1.0);
  }
  [[nodiscard]] cplx from_disk(DiskPoint z) const {
    const cplx c = (1.0 + z.value()) / (1.0 - z.value());
    return c * c - 1.0;
  }
  [[nodiscard]] DiskPoint to_disk(cplx w) const {
    const cplx s = half_plane_root(w);
    return DiskPoint((s - 1.0) / (s + 1.0));
  }
  // lambda_K(w) = 1/(4 |s| Re s)
  [[nodiscard]] double density(cplx w) const {
    const cplx s = half_plane_root(w);
    return 1.0 / (4.0 * std::abs(s) * s.real());
  }
  [[nodiscard]] double distance(cplx a, cplx b) const {
    if (!contains(a) || !contains(b)) throw std::domain_error("SlitPlaneK: point on the slit");
    if (a.imag() == 0.0 && b.imag() == 0.0) {
      // The axis (-1, inf) is a geodesic: d = 1/4 |log((1+b)/(1+a))|.
      return 0.25 * std::abs(std::log1p(b.real()) - std::log1p(a.real()));
    }
    return rhp_distance(half_plane_root(a), half_plane_root(b));
  }
};

// Horodisc E(1, R) as a domain: the disc D(c, r), c = 1/(1+R), r = R/(1+R).
struct HorodiscDomain {
  double level = 1.0;

  static constexpr const char* name = "horodisc";
  [[nodiscard]] double radius() const noexcept { return level / (1.0 + level); }
  [[nodiscard]] double center() const noexcept { return 1.0 / (1.0 + level); }
  [[nodiscard]] bool contains(cplx w) const noexcept { return std::abs(w - center()) < radius(); }
  [[nodiscard]] double boundary_distance(cplx w) const noexcept { return radius() - std::abs(w - center()); }
  [[nodiscard]] bool segment_inside(cplx a, cplx b) const noexcept { return contains(a) && contains(b); }
  [[nodiscard]] cplx from_disk(DiskPoint z) const noexcept { return center() + radius() * z.value(); }
  [[nodiscard]] DiskPoint to_disk(cplx w) const { return DiskPoint((w - center()) / radius()); }
  // lambda_{D(c,r)}(w) = r / (r^2 - |w - c|^2)
  [[nodiscard]] double density(cplx w) const {
    const double r = radius();
    const double s = std::abs(w - center());
    return r / ((r - s) * (r + s));
  }
  [[nodiscard]] double distance(cplx a, cplx b) const { return dist_disk(to_disk(a), to_disk(b)); }
};

using SimplyConnectedDescriptor = std::variant<UnitDisc, RightHalfPlane, UpperHalfPlane, Strip, SlitPlaneK, HorodiscDomain>;

inline std::string domain_name(const SimplyConnectedDescriptor& d) {
  return std::visit([](const auto& x) -> std::string {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, Strip>) return "strip:" + std::to_string(x.half_width);
    else if constexpr (std::is_same_v<T, HorodiscDomain>) return "horodisc:" + std::to_string(x.level);
    else return T::name;
  }, d);
}

// Tags: disc, rhp, uhp, k-slit, strip:a, horodisc:R.
inline SimplyConnectedDescriptor parse_domain(std::string_view tag) {
  auto param = [&](std::string_view prefix) -> double {
    const std::string rest(tag.substr(prefix.size()));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown domain tag: " + std::string(tag));
    }
    if (used != rest.size() || !(v > 0.0)) throw std::invalid_argument("bad domain parameter in: " + std::string(tag));
    return v;
  };
  if (tag == "disc") return UnitDisc{};
  if (tag == "rhp") return RightHalfPlane{};
  if (tag == "uhp") return UpperHalfPlane{};
  if (tag == "k-slit") return SlitPlaneK{};
  if (tag.starts_with("strip:")) return Strip{param("strip:")};
  if (tag.starts_with("horodisc:")) return HorodiscDomain{param("horodisc:")};
  throw std::invalid_argument("unknown domain tag: " + std::string(tag));
}

inline bool domain_contains(const SimplyConnectedDescriptor& d, cplx w) {
  return std::visit([w](const auto& x) { return x.contains(w); }, d);
}

inline double boundary_distance(const SimplyConnectedDescriptor& d, cplx w) {
  return std::visit([w](const auto& x) {
    if (!x.contains(w)) throw std::domain_error("boundary_distance: point outside the domain");
    return x.boundary_distance(w);
  }, d);
}

inline double dist_domain(const SimplyConnectedDescriptor& d, cplx a, cplx b) {
  return std::visit([a, b](const auto& x) {
    if (!x.contains(a) || !x.contains(b)) throw std::domain_error("dist_domain: point outside the domain");
    if (a == b) return 0.0;
    return x.distance(a, b);
  }, d);
}

inline double domain_density(const SimplyConnectedDescriptor& d, cplx w) {
  return std::visit([w](const auto& x) {
    if (!x.contains(w)) throw std::domain_error("domain_density: point outside the domain");
    return x.density(w);
  }, d);
}

inline cplx domain_from_disk(const SimplyConnectedDescriptor& d, DiskPoint z) {
  return std::visit([z](const auto& x) { return x.from_disk(z); }, d);
}

inline DiskPoint domain_to_disk(const SimplyConnectedDescriptor& d, cplx w) {
  return std::visit([w](const auto& x) { return x.to_disk(w); }, d);
}

// Descriptor wrapper usable with distance_lemma_bounds.
struct DomainRef {
  const SimplyConnectedDescriptor& d;
  [[nodiscard]] bool contains(cplx w) const { return domain_contains(d, w); }
  [[nodiscard]] double boundary_distance(cplx w) const {
    return std::visit([w](const auto& x) { return x.boundary_distance(w); }, d);
  }
  [[nodiscard]] bool segment_inside(cplx a, cplx b) const {
    return std::visit([a, b](const auto& x) { return x.segment_inside(a, b); }, d);
  }
};

inline cplx slit_riemann(DiskPoint z) { return SlitPlaneK{}.from_disk(z); }
inline DiskPoint slit_riemann_inv(cplx w) { return SlitPlaneK{}.to_disk(w); }

// lambda_{E(1,R)}(z) / lambda_D(z) - 1. With u = 1 - z,
//   (1 + R)(r^2 - |z - c|^2) = 2R Re u - (1 + R)|u|^2,   1 - |z|^2 = 2 Re u - |u|^2,
// so the excess is |u|^2 / (2R Re u - (1 + R)|u|^2), free of cancellation near 1.
inline double horodisc_tangency_excess(double level, DiskPoint z) {
  if (!(level > 0.0)) throw std::invalid_argument("horodisc_tangency_ratio: level must be positive");
  const cplx u = 1.0 - z.value();
  const double q = std::norm(u);
  const double den = 2.0 * level * u.real() - (1.0 + level) * q;
  if (!(den > 0.0)) throw std::domain_error("horodisc_tangency_ratio: point outside the horodisc");
  return q / den;
}

inline double horodisc_tangency_ratio(double level, DiskPoint z) { return 1.0 + horodisc_tangency_excess(level, z); }

// Omega_N = C \ {-1, -2, ...}. Only membership and the inclusion bound
// d_{Omega_N} <= d_K (K is a subdomain) are available.
struct OmegaN {
  [[nodiscard]] bool contains(cplx w) const noexcept {
    if (!is_finite(w)) return false;
    if (w.imag() != 0.0 || w.real() > -1.0) return true;
    return std::floor(w.real()) != w.real();
  }
  [[nodiscard]] double distance_upper_bound(cplx a, cplx b) const { return SlitPlaneK{}.distance(a, b); }
};

}  // namespace hdisc
