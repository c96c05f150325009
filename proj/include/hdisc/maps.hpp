#pragma once

// Model zoo of non-elliptic self-maps of the disc.
//
// Charted maps carry an exact Koenigs function h with h(f(z)) = h(z) + 1, so
// f^n(z) = h^{-1}(h(z) + n) and orbits are stored by the single number h(z).
// All charted maps below have Denjoy-Wolff point tau = 1 and their inverse
// charts land in the right half-plane chart at 1, which keeps points that
// are far too close to 1 for a double disc coordinate exact.
//
//   hyp:L      w -> L w in the right chart;  h = log C(z) / log L, Omega a strip
//   parab-aut  w -> w + 1 in the upper chart; h = i(1+z)/(1-z), Omega = H
//   koebe      g^{-1}(g + 1), g(z) = ((1+z)/(1-z))^2 - 1;   h = g, Omega = K
//   quad       (1 + z^2)/2, no chart (black box)
//
// Black-box maps are iterated by composition and flagged once the orbit is
// indistinguishable from the circle.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hdisc/config.hpp"
#include "hdisc/domains.hpp"
#include "hdisc/hypgeo.hpp"

namespace hdisc {

enum class MapType { hyperbolic, positive_parabolic, zero_parabolic };

inline const char* to_string(MapType t) {
  switch (t) {
    case MapType::hyperbolic: return "hyperbolic";
    case MapType::positive_parabolic: return "positive-parabolic";
    case MapType::zero_parabolic: return "zero-parabolic";
  }
  return "?";
}

inline MapType parse_map_type(std::string_view s) {
  if (s == "hyperbolic") return MapType::hyperbolic;
  if (s == "positive-parabolic") return MapType::positive_parabolic;
  if (s == "zero-parabolic") return MapType::zero_parabolic;
  throw std::invalid_argument("unknown map type: " + std::string(s));
}

class BoundarySaturated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t max_charted_iterations = 10'000'000;
inline constexpr std::uint64_t max_blackbox_iterations = 1'000'000;
// 1 - |z| below this without chart data counts as saturated.
inline constexpr double saturation_gap = 1e-15;

struct KoenigsChart {
  std::function<cplx(DiskPoint)> forward;    // h
  std::function<ChartPoint(cplx)> inverse;   // h^{-1}, in the right chart at tau
  SimplyConnectedDescriptor omega;
  BoundaryPoint tau;
  MapType type = MapType::zero_parabolic;
  bool semiflow_ready = false;  // univalent with Omega starlike at infinity

  // Hyperbolic distance between f^j and f^k computed in Omega.
  [[nodiscard]] double distance(cplx a, cplx b) const { return dist_domain(omega, a, b); }
};

struct HyperbolicAut {
  double lambda = 2.0;
};
struct ParabolicAut {};
struct KoebeShift {};
struct QuadraticParabolic {};

// User-supplied evaluation rule. Built-in kinds: mobius (a z + b)/(c z + d)
// and polynomial sum c_k z^k.
struct CustomMap {
  std::string label = "custom";
  std::function<cplx(cplx)> rule;
  BoundaryPoint tau;
  std::optional<double> fprime_tau;
  std::optional<MapType> type;
  bool univalent = false;
};

using MapVariant = std::variant<HyperbolicAut, ParabolicAut, KoebeShift, QuadraticParabolic, CustomMap>;

class ModelMap {
 public:
  static ModelMap hyperbolic(double lambda) {
    if (!(lambda > 1.0) || !std::isfinite(lambda)) throw std::invalid_argument("HyperbolicAut: lambda must exceed 1");
    ModelMap m(HyperbolicAut{lambda});
    const double ll = std::log(lambda);
    auto c = std::make_shared<KoenigsChart>();
    c->forward = [ll](DiskPoint z) { return std::log(cayley_to_half_plane(z, HalfPlaneChart::right)) / ll; };
    c->inverse = [ll, lambda](cplx h) {
      const cplx dir = std::polar(1.0, ll * h.imag());
      std::optional<cplx> cart;
      const double mag = std::pow(lambda, h.real());
      if (std::isfinite(mag) && mag > 0.0) cart = mag * dir;
      return ChartPoint(BoundaryPoint{}, RhpPoint::from_log_polar(ll * h.real(), dir, cart));
    };
    c->omega = Strip{std::numbers::pi / (2.0 * ll)};
    c->type = MapType::hyperbolic;
    c->semiflow_ready = true;
    m.chart_ = std::move(c);
    return m;
  }

  static ModelMap parabolic() {
    ModelMap m(ParabolicAut{});
    auto c = std::make_shared<KoenigsChart>();
    c->forward = [](DiskPoint z) { return cayley_to_half_plane(z, HalfPlaneChart::upper); };
    c->inverse = [](cplx h) { return ChartPoint(BoundaryPoint{}, RhpPoint::from_cartesian(cplx(h.imag(), -h.real()))); };
    c->omega = UpperHalfPlane{};
    c->type = MapType::positive_parabolic;
    c->semiflow_ready = true;
    m.chart_ = std::move(c);
    return m;
  }

  static ModelMap koebe() {
    ModelMap m(KoebeShift{});
    auto c = std::make_shared<KoenigsChart>();
    c->forward = [](DiskPoint z) { return SlitPlaneK{}.from_disk(z); };
    c->inverse = [](cplx h) { return ChartPoint(BoundaryPoint{}, RhpPoint::from_cartesian(SlitPlaneK{}.half_plane_root(h))); };
    c->omega = SlitPlaneK{};
    c->type = MapType::zero_parabolic;
    c->semiflow_ready = true;
    m.chart_ = std::move(c);
    return m;
  }

  static ModelMap quadratic() { return ModelMap(QuadraticParabolic{}); }

  static ModelMap custom(CustomMap def, std::shared_ptr<const KoenigsChart> chart = nullptr) {
    if (!def.rule) throw std::invalid_argument("CustomMap: missing evaluation rule");
    if (def.fprime_tau && !(*def.fprime_tau > 0.0 && *def.fprime_tau <= 1.0))
      throw std::invalid_argument("CustomMap: angular derivative must lie in (0,1]");
    ModelMap m(std::move(def));
    m.chart_ = std::move(chart);
    m.validate_self_map();
    return m;
  }

  [[nodiscard]] const MapVariant& variant() const noexcept { return v_; }
  [[nodiscard]] const KoenigsChart* chart() const noexcept { return chart_.get(); }
  [[nodiscard]] std::shared_ptr<const KoenigsChart> shared_chart() const noexcept { return chart_; }
  [[nodiscard]] bool charted() const noexcept { return chart_ != nullptr; }
  [[nodiscard]] bool semiflow_ready() const noexcept { return chart_ && chart_->semiflow_ready; }

  [[nodiscard]] std::string name() const {
    return std::visit([](const auto& x) -> std::string {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, HyperbolicAut>) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "hyp:%.17g", x.lambda);
        return buf;
      } else if constexpr (std::is_same_v<T, ParabolicAut>) return "parab-aut";
      else if constexpr (std::is_same_v<T, KoebeShift>) return "koebe";
      else if constexpr (std::is_same_v<T, QuadraticParabolic>) return "quad";
      else return x.label;
    }, v_);
  }

  [[nodiscard]] BoundaryPoint tau() const {
    if (auto* c = std::get_if<CustomMap>(&v_)) return c->tau;
    return BoundaryPoint{};
  }

  [[nodiscard]] std::optional<double> fprime_tau() const {
    return std::visit([](const auto& x) -> std::optional<double> {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, HyperbolicAut>) return 1.0 / x.lambda;
      else if constexpr (std::is_same_v<T, CustomMap>) return x.fprime_tau;
      else return 1.0;
    }, v_);
  }

  [[nodiscard]] std::optional<MapType> declared_type() const {
    return std::visit([](const auto& x) -> std::optional<MapType> {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, HyperbolicAut>) return MapType::hyperbolic;
      else if constexpr (std::is_same_v<T, ParabolicAut>) return MapType::positive_parabolic;
      else if constexpr (std::is_same_v<T, CustomMap>) return x.type;
      else return MapType::zero_parabolic;
    }, v_);
  }

  [[nodiscard]] bool univalent() const {
    return std::visit([](const auto& x) {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, QuadraticParabolic>) return false;
      else if constexpr (std::is_same_v<T, CustomMap>) return x.univalent;
      else return true;
    }, v_);
  }

  [[nodiscard]] std::uint64_t max_iterations() const noexcept {
    return charted() ? max_charted_iterations : max_blackbox_iterations;
  }

  // Raw evaluation; the result may leave the disc only through rounding.
  [[nodiscard]] cplx raw(cplx z) const {
    if (chart_) {
      auto p = chart_->inverse(chart_->forward(DiskPoint(z)) + 1.0);
      return chart_->tau.value() * (1.0 - p.chart().two_over_plus_one());
    }
    return std::visit([z](const auto& x) -> cplx {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, QuadraticParabolic>) return 0.5 * (1.0 + z * z);
      else if constexpr (std::is_same_v<T, CustomMap>) return x.rule(z);
      else throw std::logic_error("charted variant without chart");
    }, v_);
  }

  [[nodiscard]] std::optional<DiskPoint> try_eval(DiskPoint z) const {
    if (chart_) return chart_->inverse(chart_->forward(z) + 1.0).disk();
    return DiskPoint::try_make(raw(z.value()));
  }

  [[nodiscard]] DiskPoint eval(DiskPoint z) const {
    auto r = try_eval(z);
    if (!r) throw BoundarySaturated(name() + ": image indistinguishable from the unit circle");
    return *r;
  }

 private:
  explicit ModelMap(MapVariant v) : v_(std::move(v)) {}

  // Self-map of the disc on 10^4 sample points, and radial limit at tau equal to tau.
  void validate_self_map() const {
    const auto& c = std::get<CustomMap>(v_);
    for (int i = 0; i < 100; ++i) {
      const double r = i == 0 ? 0.0 : 1.0 - std::pow(10.0, -6.0 * i / 99.0);
      for (int j = 0; j < 100; ++j) {
        const cplx z = std::polar(r, 2.0 * std::numbers::pi * (j + 0.5 * (i % 2)) / 100.0);
        const cplx w = c.rule(z);
        if (!is_finite(w) || !(std::abs(w) < 1.0))
          throw std::invalid_argument(c.label + ": does not map the disc into itself (sample z = " + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")");
      }
    }
    const cplx near = (1.0 - 1e-8) * c.tau.value();
    if (std::abs(c.rule(near) - c.tau.value()) > 1e-3)
      throw std::invalid_argument(c.label + ": radial limit at tau is not tau");
  }

  MapVariant v_;
  std::shared_ptr<const KoenigsChart> chart_;
};

// ---------------------------------------------------------------------------
// Custom maps from a config file
//
//   kind = mobius          # or polynomial
//   coeffs = 1 1 0 2       # mobius: a b c d;  polynomial: c0 c1 ... (re or re,im)
//   tau = 0                # angle of the Denjoy-Wolff point
//   fprime_tau = 0.5       # optional
//   type = hyperbolic      # optional

inline ModelMap custom_map_from_config(const Config& cfg, const std::string& label) {
  CustomMap m;
  m.label = label;
  const auto kind = cfg.get("kind");
  if (!kind) throw ConfigError("custom map: missing 'kind'");
  const auto coeffs = cfg.get_complex_list("coeffs");
  if (!coeffs) throw ConfigError("custom map: missing 'coeffs'");
  if (*kind == "mobius") {
    if (coeffs->size() != 4) throw ConfigError("custom map: mobius needs 4 coefficients", cfg.line_of("coeffs"));
    const cplx a = (*coeffs)[0], b = (*coeffs)[1], c = (*coeffs)[2], d = (*coeffs)[3];
    if (a * d - b * c == 0.0) throw ConfigError("custom map: degenerate mobius map", cfg.line_of("coeffs"));
    m.rule = [a, b, c, d](cplx z) { return (a * z + b) / (c * z + d); };
    m.univalent = true;
  } else if (*kind == "polynomial") {
    const std::vector<cplx> cs = *coeffs;
    m.rule = [cs](cplx z) {
      cplx acc = 0.0;
      for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * z + *it;
      return acc;
    };
    m.univalent = cs.size() <= 2;
  } else {
    throw ConfigError("custom map: unknown kind '" + *kind + "'", cfg.line_of("kind"));
  }
  m.tau = BoundaryPoint(cfg.get_double_or("tau", 0.0));
  m.fprime_tau = cfg.get_double("fprime_tau");
  if (auto t = cfg.get("type")) {
    try {
      m.type = parse_map_type(*t);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), cfg.line_of("type"));
    }
  }
  cfg.reject_unknown();
  return ModelMap::custom(std::move(m));
}

// Registry: hyp:L, parab-aut, koebe, quad, custom:PATH.
inline ModelMap make_map(std::string_view name) {
  if (name == "parab-aut") return ModelMap::parabolic();
  if (name == "koebe") return ModelMap::koebe();
  if (name == "quad") return ModelMap::quadratic();
  if (name.starts_with("hyp:")) {
    const std::string rest(name.substr(4));
    std::size_t used = 0;
    double lambda = 0.0;
    try {
      lambda = std::stod(rest, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad map parameter: " + std::string(name));
    }
    if (used != rest.size()) throw std::invalid_argument("bad map parameter: " + std::string(name));
    return ModelMap::hyperbolic(lambda);
  }
  if (name.starts_with("custom:")) {
    const std::string path(name.substr(7));
    return custom_map_from_config(Config::load(path), std::string(name));
  }
  throw std::invalid_argument("unknown map: " + std::string(name) + " (known: hyp:L, parab-aut, koebe, quad, custom:PATH)");
}

// ---------------------------------------------------------------------------
// Orbits

class OrbitRecord {
 public:
  [[nodiscard]] std::uint64_t length() const noexcept { return n_; }
  [[nodiscard]] bool charted() const noexcept { return chart_ != nullptr; }
  [[nodiscard]] BoundaryPoint tau() const noexcept { return tau_; }
  [[nodiscard]] std::optional<MapType> declared_type() const noexcept { return type_; }
  [[nodiscard]] const std::string& map_name() const noexcept { return name_; }
  // First index whose disc point is unusable (black box only).
  [[nodiscard]] std::optional<std::uint64_t> saturated_from() const noexcept { return saturated_from_; }

  [[nodiscard]] bool available(std::uint64_t k) const noexcept {
    if (k > n_) return false;
    if (chart_) return true;
    return !saturated_from_ || k < *saturated_from_;
  }

  // Koenigs coordinate h(f^k z) = h(z) + k.
  [[nodiscard]] cplx koenigs(std::uint64_t k) const {
    if (!chart_) throw std::logic_error("OrbitRecord: black-box orbit has no Koenigs coordinates");
    check(k);
    return h0_ + static_cast<double>(k);
  }

  [[nodiscard]] ChartPoint point(std::uint64_t k) const {
    check(k);
    if (chart_) return chart_->inverse(koenigs(k));
    return ChartPoint::from_disk(DiskPoint(points_[k]), tau_);
  }

  [[nodiscard]] std::optional<DiskPoint> disk(std::uint64_t k) const {
    if (!available(k)) return std::nullopt;
    if (k == 0) return z0_;
    if (chart_) return point(k).disk();
    return DiskPoint(points_[k]);
  }

  [[nodiscard]] double distance(std::uint64_t j, std::uint64_t k) const {
    check(j);
    check(k);
    if (j == k) return 0.0;
    if (chart_) return chart_->distance(koenigs(j), koenigs(k));
    return dist_disk(DiskPoint(points_[j]), DiskPoint(points_[k]));
  }

  [[nodiscard]] double step(std::uint64_t k) const { return distance(k, k + 1); }

  [[nodiscard]] double log_one_minus_mod(std::uint64_t k) const {
    check(k);
    if (chart_) return point(k).log_one_minus_mod();
    return std::log(1.0 - std::abs(points_[k]));
  }
  [[nodiscard]] double log_dist_to_tau(std::uint64_t k) const {
    check(k);
    if (chart_) return point(k).log_dist_to_tau();
    return std::log(std::abs(tau_.value() - points_[k]));
  }
  // log(1 - |z|^2)
  [[nodiscard]] double log_one_minus_mod_sq(std::uint64_t k) const {
    check(k);
    if (chart_) return point(k).log_one_minus_mod_sq();
    const double r = std::abs(points_[k]);
    return std::log((1.0 - r) * (1.0 + r));
  }
  [[nodiscard]] double log_julia_quotient(std::uint64_t k) const {
    check(k);
    if (chart_) return point(k).log_julia_quotient();
    return 2.0 * log_dist_to_tau(k) - log_one_minus_mod_sq(k);
  }
  // arg(1 - conj(tau) f^k z)
  [[nodiscard]] double slope(std::uint64_t k) const {
    check(k);
    if (chart_) return point(k).slope_angle();
    return std::arg(1.0 - std::conj(tau_.value()) * points_[k]);
  }
  [[nodiscard]] double angle(std::uint64_t k) const {
    check(k);
    if (chart_) return point(k).arg();
    return std::arg(points_[k]);
  }

 private:
  friend OrbitRecord iterate(const ModelMap&, DiskPoint, std::uint64_t);

  void check(std::uint64_t k) const {
    if (k > n_) throw std::out_of_range("OrbitRecord: index beyond the computed orbit");
    if (!available(k)) throw BoundarySaturated("OrbitRecord: point " + std::to_string(k) + " is boundary-saturated");
  }

  std::uint64_t n_ = 0;
  std::string name_;
  BoundaryPoint tau_;
  std::optional<MapType> type_;
  const KoenigsChart* chart_ = nullptr;
  std::shared_ptr<const KoenigsChart> keep_alive_;
  DiskPoint z0_;
  cplx h0_{};
  std::vector<cplx> points_;
  std::optional<std::uint64_t> saturated_from_;
};

// Orbit z, f z, ..., f^n z. Charted orbits cost O(1); black-box orbits are composed.
inline OrbitRecord iterate(const ModelMap& f, DiskPoint z, std::uint64_t n) {
  if (n > f.max_iterations())
    throw std::invalid_argument("iterate: n = " + std::to_string(n) + " exceeds the limit " + std::to_string(f.max_iterations()) + " for " + f.name());
  OrbitRecord r;
  r.n_ = n;
  r.name_ = f.name();
  r.tau_ = f.tau();
  r.type_ = f.declared_type();
  r.z0_ = z;
  if (f.charted()) {
    r.keep_alive_ = f.shared_chart();
    r.chart_ = r.keep_alive_.get();
    r.h0_ = f.chart()->forward(z);
    return r;
  }
  r.points_.reserve(static_cast<std::size_t>(n) + 1);
  cplx cur = z.value();
  r.points_.push_back(cur);
  for (std::uint64_t k = 1; k <= n; ++k) {
    cur = f.raw(cur);
    if (!is_finite(cur) || !(std::abs(cur) < 1.0) || 1.0 - std::abs(cur) < saturation_gap) {
      r.saturated_from_ = k;
      break;
    }
    r.points_.push_back(cur);
  }
  return r;
}

// Largest index that can be evaluated.
inline std::uint64_t last_available(const OrbitRecord& r) {
  if (auto s = r.saturated_from()) return *s == 0 ? 0 : *s - 1;
  return r.length();
}

// ---------------------------------------------------------------------------
// Numeric classification

inline constexpr double zero_step_threshold = 1e-4;
inline constexpr double hyperbolic_fprime_threshold = 1.0 - 1e-3;
inline constexpr double tangential_margin = 1e-3;

struct ClassificationReport {
  std::uint64_t n_used = 0;
  double step_estimate = 0.0;
  bool zero_step = false;
  double fprime_estimate = 0.0;
  double slope_estimate = 0.0;
  bool tangential = false;
  MapType numeric_type = MapType::zero_parabolic;
  std::optional<MapType> declared_type;
  bool mismatch = false;
  std::string note;
};

// Heuristic diagnostics: step at the end of the orbit, Julia-quotient ratio
// J(f^{n+1})/J(f^n) as f'(tau), and the last slope angle. Never overrides a
// declared type; disagreement is reported as a mismatch.
inline ClassificationReport classify_numeric(const ModelMap& f, DiskPoint z0, std::uint64_t n_max = 100'000) {
  if (n_max < 2) throw std::invalid_argument("classify_numeric: n_max must be at least 2");
  const auto orbit = iterate(f, z0, n_max);
  ClassificationReport rep;
  rep.declared_type = f.declared_type();
  const std::uint64_t n = last_available(orbit);
  if (n < 2) {
    rep.note = "orbit saturated before two steps";
    rep.mismatch = true;
    return rep;
  }
  rep.n_used = n - 1;
  rep.step_estimate = orbit.step(n - 1);
  rep.zero_step = rep.step_estimate < zero_step_threshold;
  rep.fprime_estimate = std::exp(orbit.log_julia_quotient(n) - orbit.log_julia_quotient(n - 1));
  rep.slope_estimate = orbit.slope(n);
  rep.tangential = std::abs(rep.slope_estimate) > std::numbers::pi / 2.0 - tangential_margin;
  if (rep.fprime_estimate < hyperbolic_fprime_threshold) rep.numeric_type = MapType::hyperbolic;
  else if (rep.zero_step) rep.numeric_type = MapType::zero_parabolic;
  else rep.numeric_type = MapType::positive_parabolic;

  if (rep.declared_type && *rep.declared_type != rep.numeric_type) {
    rep.mismatch = true;
    rep.note = std::string("classification mismatch: declared ") + to_string(*rep.declared_type) + ", diagnostics suggest " + to_string(rep.numeric_type);
  } else if (rep.numeric_type == MapType::positive_parabolic && !rep.tangential) {
    rep.mismatch = true;
    rep.note = "classification mismatch: positive step with a non-tangential orbit";
  } else if (rep.numeric_type == MapType::hyperbolic && rep.tangential) {
    rep.mismatch = true;
    rep.note = "classification mismatch: hyperbolic diagnostics with a tangential orbit";
  }
  return rep;
}

struct DenjoyWolffEstimate {
  BoundaryPoint estimate;
  double error = 0.0;  // |arg f^n - arg f^{n/2}| plus 1 - |f^n|
  bool converged = false;
  std::uint64_t n_used = 0;
};

inline double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

inline DenjoyWolffEstimate denjoy_wolff_estimate(const ModelMap& f, DiskPoint z0, std::uint64_t n_max) {
  const auto orbit = iterate(f, z0, n_max);
  DenjoyWolffEstimate out;
  const std::uint64_t n = last_available(orbit);
  out.n_used = n;
  const double a = orbit.angle(n);
  out.estimate = BoundaryPoint(a);
  const double gap = std::exp(orbit.log_one_minus_mod(n));
  out.error = angle_gap(a, orbit.angle(n / 2)) + gap;
  out.converged = gap < 1e-2 && out.error < 1e-2;
  return out;
}

}  // namespace hdisc
