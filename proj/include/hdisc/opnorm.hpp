#pragma once

// Composition-operator norm bounds on Hardy and weighted Bergman spaces from
// the orbit of 0. Only the bound functions of |f^n(0)| are evaluated; no
// function-space norm is computed.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdisc/fit.hpp"
#include "hdisc/maps.hpp"
#include "hdisc/rates.hpp"

namespace hdisc {

namespace opnorm_tol {
inline constexpr double squeeze = 1e-3;      // |log-bound/n - (-log f'(tau))/p|
inline constexpr double floor_margin = 0.05;  // relative margin on the parabolic exponent floors
}  // namespace opnorm_tol

struct NormBounds {
  double lower = 1.0;
  double upper = 1.0;
};

inline void check_norm_args(double m, double p) {
  if (!(m >= 0.0 && m < 1.0)) throw std::invalid_argument("opnorm: |f(0)| must lie in [0, 1)");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("opnorm: p must be a finite real >= 1");
}

inline void check_alpha(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw std::invalid_argument("opnorm: alpha must be a finite real > -1");
}

// lower = (1/(1-m^2))^{1/p} <= ||C_f|| <= ((1+m)/(1-m))^{1/p} = upper on H^p.
inline NormBounds hardy_bounds(double m, double p) {
  check_norm_args(m, p);
  return {std::pow(1.0 / ((1.0 - m) * (1.0 + m)), 1.0 / p), std::pow((1.0 + m) / (1.0 - m), 1.0 / p)};
}

// Weighted Bergman A^p_alpha: the Hardy bounds with exponent (2+alpha)/p.
inline NormBounds bergman_bounds(double m, double p, double alpha) {
  check_norm_args(m, p);
  check_alpha(alpha);
  const double e = (2.0 + alpha) / p;
  return {std::pow(1.0 / ((1.0 - m) * (1.0 + m)), e), std::pow((1.0 + m) / (1.0 - m), e)};
}

// Logarithms of the Hardy bounds from log(1-m), stable as m -> 1.
inline NormBounds hardy_log_bounds_from_gap(double log_one_minus_m, double p) {
  if (!(log_one_minus_m <= 0.0)) throw std::invalid_argument("opnorm: log(1 - m) must be <= 0");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("opnorm: p must be a finite real >= 1");
  const double g = std::exp(log_one_minus_m);
  const double log_one_plus_m = std::log1p(1.0 - g);
  return {-(log_one_minus_m + log_one_plus_m) / p, (log_one_plus_m - log_one_minus_m) / p};
}

struct NormBoundRow {
  std::uint64_t n = 0;
  double mod_f0 = NAN;
  double log_one_minus_mod = NAN;
  NormBounds hardy;          // may overflow to inf; the log columns stay finite
  NormBounds bergman;
  NormBounds log_hardy;
  NormBounds log_bergman;
};

struct ExponentFits {
  LinearFit lower_vs_n;      // slope of log-bound against n
  LinearFit upper_vs_n;
  LinearFit lower_vs_logn;   // slope of log-bound against log n
  LinearFit upper_vs_logn;
  double min_lower_ratio = NAN;  // liminf proxy: min of log-lower / log n over the last decade
};

// Invariants per row: 1 <= lower <= upper, in log form 0 <= log lower <= log upper.
struct NormBoundSeries {
  std::string map;
  double p = 2.0;
  double alpha = 0.0;
  std::vector<NormBoundRow> rows;
  std::size_t excluded = 0;  // saturated orbit points
  ExponentFits hardy_fit;
  ExponentFits bergman_fit;
  bool ordered = true;

  [[nodiscard]] std::string csv() const {
    std::string s = "n,mod_f0,hardy_lo,hardy_hi,bergman_lo,bergman_hi\n";
    for (const auto& r : rows)
      s += std::to_string(r.n) + "," + fmt_double(r.mod_f0) + "," + fmt_double(r.hardy.lower) + "," + fmt_double(r.hardy.upper) + "," +
           fmt_double(r.bergman.lower) + "," + fmt_double(r.bergman.upper) + "\n";
    return s;
  }
};

namespace detail {
inline ExponentFits fit_exponents(const std::vector<NormBoundRow>& rows, bool bergman) {
  ExponentFits f;
  std::vector<std::uint64_t> n;
  std::vector<double> x, lx, lo, hi;
  for (const auto& r : rows) {
    if (r.n < 1) continue;
    const NormBounds& b = bergman ? r.log_bergman : r.log_hardy;
    n.push_back(r.n);
    x.push_back(static_cast<double>(r.n));
    lx.push_back(std::log(static_cast<double>(r.n)));
    lo.push_back(b.lower);
    hi.push_back(b.upper);
  }
  const auto idx = last_decade(n);
  f.lower_vs_n = fit_subset(x, lo, idx);
  f.upper_vs_n = fit_subset(x, hi, idx);
  f.lower_vs_logn = fit_subset(lx, lo, idx);
  f.upper_vs_logn = fit_subset(lx, hi, idx);
  f.min_lower_ratio = INFINITY;
  for (auto i : idx)
    if (n[i] >= 2) f.min_lower_ratio = std::min(f.min_lower_ratio, lo[i] / lx[i]);
  if (!std::isfinite(f.min_lower_ratio)) f.min_lower_ratio = NAN;
  return f;
}
}  // namespace detail

// Bounds for ||C_{f^n}|| along the orbit of z (0 by default) on the n-grid.
inline NormBoundSeries norm_bound_series(const ModelMap& f, const Grid& grid, double p, double alpha, DiskPoint z = DiskPoint(0.0, 0.0)) {
  check_norm_args(0.0, p);
  check_alpha(alpha);
  NormBoundSeries s;
  s.map = f.name();
  s.p = p;
  s.alpha = alpha;
  const auto orbit = orbit_for_grid(f, z, grid);
  const double e = 2.0 + alpha;
  for (auto n : grid) {
    if (!orbit.available(n)) {
      ++s.excluded;
      continue;
    }
    NormBoundRow r;
    r.n = n;
    r.log_one_minus_mod = orbit.log_one_minus_mod(n);
    r.mod_f0 = -std::expm1(r.log_one_minus_mod);
    r.log_hardy = hardy_log_bounds_from_gap(r.log_one_minus_mod, p);
    r.log_bergman = {e * r.log_hardy.lower, e * r.log_hardy.upper};
    r.hardy = {std::exp(r.log_hardy.lower), std::exp(r.log_hardy.upper)};
    r.bergman = {std::exp(r.log_bergman.lower), std::exp(r.log_bergman.upper)};
    if (!(r.log_hardy.lower >= 0.0 && r.log_hardy.lower <= r.log_hardy.upper)) s.ordered = false;
    s.rows.push_back(r);
  }
  s.hardy_fit = detail::fit_exponents(s.rows, false);
  s.bergman_fit = detail::fit_exponents(s.rows, true);
  return s;
}

struct OpnormReport {
  std::string map;
  double p = 2.0;
  double alpha = 0.0;
  std::optional<MapType> type;
  double hardy_target = NAN;    // -log f'(tau)/p per step, or the 1/(2p) floor per log n
  double bergman_target = NAN;
  NormBoundSeries series;
  std::vector<Verdict> verdicts;

  [[nodiscard]] bool passed() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return !verdicts.empty();
  }
  [[nodiscard]] const Verdict* verdict(const std::string& name) const {
    for (const auto& v : verdicts)
      if (v.name == name) return &v;
    return nullptr;
  }
};

// Hyperbolic maps: log-bounds/n squeeze onto -log f'(tau)/p (Hardy) and (2+alpha) times
// that (Bergman). Parabolic maps: the log n exponents stay above 1/(2p) and (2+alpha)/(2p).
inline OpnormReport asymptotic_verdicts(const ModelMap& f, double p, double alpha, std::uint64_t n_max) {
  if (n_max < 20) throw std::invalid_argument("asymptotic_verdicts: n_max must be at least 20");
  auto type = f.declared_type();
  if (!type) type = classify_numeric(f, DiskPoint(0.0, 0.0), std::min<std::uint64_t>(n_max, 100'000)).numeric_type;
  OpnormReport rep;
  rep.map = f.name();
  rep.p = p;
  rep.alpha = alpha;
  rep.type = type;
  const Grid grid = *type == MapType::hyperbolic ? log_grid(1, n_max, 40) : default_grid(n_max);
  rep.series = norm_bound_series(f, grid, p, alpha);
  const auto& s = rep.series;
  rep.verdicts.push_back({"bounds-ordered", s.ordered && !s.rows.empty(), "1 <= lower <= upper at every n"});
  if (s.rows.size() < 2) {
    rep.verdicts.push_back({"orbit-available", false, "fewer than two usable orbit points"});
    return rep;
  }
  const auto& last = s.rows.back();
  const double n = static_cast<double>(last.n);
  if (*type == MapType::hyperbolic) {
    auto fp = f.fprime_tau();
    if (!fp) fp = classify_numeric(f, DiskPoint(0.0, 0.0), std::min<std::uint64_t>(n_max, 100'000)).fprime_estimate;
    rep.hardy_target = -std::log(*fp) / p;
    rep.bergman_target = (2.0 + alpha) * rep.hardy_target;
    const auto squeeze = [&](const std::string& name, const NormBounds& lb, const ExponentFits& fit, double target) {
      const double lo = lb.lower / n, hi = lb.upper / n;
      const double tol = opnorm_tol::squeeze * std::max(1.0, std::abs(target));
      const bool ok = std::abs(lo - target) <= tol && std::abs(hi - target) <= tol && std::abs(fit.lower_vs_n.slope - target) <= tol &&
                      std::abs(fit.upper_vs_n.slope - target) <= tol;
      rep.verdicts.push_back({name, ok,
                              "log-lower/n = " + fmt_double(lo) + ", log-upper/n = " + fmt_double(hi) + ", tail slopes " +
                                  fmt_double(fit.lower_vs_n.slope) + " / " + fmt_double(fit.upper_vs_n.slope) + ", target " + fmt_double(target)});
    };
    squeeze("hardy-squeeze", last.log_hardy, s.hardy_fit, rep.hardy_target);
    squeeze("bergman-squeeze", last.log_bergman, s.bergman_fit, rep.bergman_target);
    // Gap log upper - log lower = (2/p) log(1+m) -> (2/p) log 2 at the rate of 1 - m.
    bool gap_ok = true;
    for (const auto& r : s.rows) {
      const double gap = r.log_hardy.upper - r.log_hardy.lower;
      if (std::abs(gap - 2.0 * std::log(2.0) / p) > 2.0 / p * std::exp(r.log_one_minus_mod) * (1.0 + 1e-9) + 1e-12) gap_ok = false;
    }
    rep.verdicts.push_back({"squeeze-gap", gap_ok, "|log(upper/lower) - (2/p) log 2| <= (2/p)(1 - |f^n(0)|)"});
  } else {
    rep.hardy_target = 1.0 / (2.0 * p);
    rep.bergman_target = (2.0 + alpha) / (2.0 * p);
    const auto floor = [&](const std::string& name, const ExponentFits& fit, double target) {
      const double e = fit.lower_vs_logn.slope;
      const bool ok = fit.lower_vs_logn.valid() && e >= target * (1.0 - opnorm_tol::floor_margin);
      rep.verdicts.push_back({name, ok,
                              "fitted log-lower/log n = " + fmt_double(e) + ", min ratio over the last decade " + fmt_double(fit.min_lower_ratio) +
                                  ", floor " + fmt_double(target)});
    };
    floor("hardy-floor", s.hardy_fit, rep.hardy_target);
    floor("bergman-floor", s.bergman_fit, rep.bergman_target);
  }
  return rep;
}

}  // namespace hdisc
