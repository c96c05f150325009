#pragma once

// The acceptance suite: eleven named criteria, each reduced to one pass/fail
// result with a one-line detail of the measured quantities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hdisc/domains.hpp"
#include "hdisc/fit.hpp"
#include "hdisc/harmonic.hpp"
#include "hdisc/hypgeo.hpp"
#include "hdisc/maps.hpp"
#include "hdisc/opnorm.hpp"
#include "hdisc/qgeo.hpp"
#include "hdisc/rates.hpp"
#include "hdisc/semiflow.hpp"
#include "hdisc/slope.hpp"

namespace hdisc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

namespace acceptance {

namespace detail {
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x + 0.0);  // prints -0 as 0
  return buf;
}

inline DiskPoint random_disk(std::mt19937_64& rng, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return DiskPoint(std::polar(rmax * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));
}

// LS slope of y against log n over the grid points of [lo, hi].
inline double log_slope(const OrbitRecord& orbit, std::uint64_t lo, std::uint64_t hi, double (*value)(const OrbitRecord&, std::uint64_t)) {
  std::vector<double> x, y;
  for (auto n : log_grid(lo, hi, 20)) {
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(value(orbit, n));
  }
  return least_squares(x, y).slope;
}

inline double divergence(const OrbitRecord& o, std::uint64_t n) { return o.distance(0, n); }
}  // namespace detail

// d(0, f^n(0)) = log(n+1)/4 for the Koebe shift, and the fitted exponent is 1/4.
inline CriterionResult koebe_sharpness() {
  CriterionResult r{1, "koebe-sharpness", true, {}};
  const auto orbit = iterate(ModelMap::koebe(), DiskPoint(0.0, 0.0), 1'000'000);
  double worst = 0.0;
  for (std::uint64_t n : {1u, 10u, 1000u, 1'000'000u})
    worst = std::max(worst, std::abs(orbit.distance(0, n) - 0.25 * std::log1p(static_cast<double>(n))));
  const double s = detail::log_slope(orbit, 1000, 1'000'000, detail::divergence);
  r.pass = worst <= 1e-9 && s >= 0.245 && s <= 0.255;
  r.detail = "max |d - log(n+1)/4| = " + detail::num(worst) + " (<= 1e-9); d/log n over [1e3, 1e6] = " + detail::num(s) + " (in [0.245, 0.255])";
  return r;
}

// Koebe: (1 - |f^n(0)|) sqrt(n) -> 2 and |f^n(0) - 1| sqrt(n) -> 2.
inline CriterionResult koebe_root_rate() {
  CriterionResult r{2, "koebe-root-rate", true, {}};
  const auto orbit = iterate(ModelMap::koebe(), DiskPoint(0.0, 0.0), 1'000'000);
  const double n = 1e6;
  const double gap = std::exp(orbit.log_one_minus_mod(1'000'000)) * std::sqrt(n);
  const double dist = std::exp(orbit.log_dist_to_tau(1'000'000)) * std::sqrt(n);
  r.pass = std::abs(gap - 2.0) <= 0.02 && dist >= 1.9 && dist <= 2.1;
  r.detail = "(1-|f^n(0)|) sqrt(n) = " + detail::num(gap) + " (2 within 1%); |f^n(0)-1| sqrt(n) = " + detail::num(dist) + " (in [1.9, 2.1]) at n = 1e6";
  return r;
}

// HyperbolicAut(2): d/n = log 2 / 2, |f^n(0) - 1| 2^n -> 2, and the norm-bound squeeze.
inline CriterionResult hyperbolic_laws() {
  CriterionResult r{3, "hyperbolic-laws", true, {}};
  const auto f = ModelMap::hyperbolic(2.0);
  const auto orbit = iterate(f, DiskPoint(0.0, 0.0), 10'000);
  double worst_d = 0.0;
  for (std::uint64_t n : {1u, 10u, 100u, 1000u, 10'000u})
    worst_d = std::max(worst_d, std::abs(orbit.distance(0, n) / static_cast<double>(n) - 0.5 * std::log(2.0)));
  double worst_e = 0.0;
  for (std::uint64_t n : {40u, 100u, 1000u}) worst_e = std::max(worst_e, std::abs(std::exp(orbit.log_dist_to_tau(n) + static_cast<double>(n) * std::log(2.0)) - 2.0));
  bool squeeze = true;
  std::string sq;
  for (double p : {1.0, 2.0}) {
    const auto rep = asymptotic_verdicts(f, p, 0.0, 10'000);
    squeeze = squeeze && rep.passed();
    sq += " p=" + detail::num(p) + ": " + detail::num(rep.series.rows.back().log_hardy.lower / static_cast<double>(rep.series.rows.back().n)) + " vs " +
          detail::num(rep.hardy_target) + ";";
  }
  r.pass = worst_d <= 1e-12 && worst_e <= 1e-6 && squeeze;
  r.detail = "max |d/n - log2/2| = " + detail::num(worst_d) + "; max ||f^n(0)-1| 2^n - 2| = " + detail::num(worst_e) + "; log-lower/n at n=1e4:" + sq;
  return r;
}

// ParabolicAut: constant steps, n |f^n(0) - 1| -> 2, slope pi/2, d/log n -> 1.
inline CriterionResult parabolic_laws() {
  CriterionResult r{4, "positive-parabolic-laws", true, {}};
  const auto f = ModelMap::parabolic();
  const DiskPoint z(0.0, 0.0);
  const auto steps = step_series(f, z, default_grid(100'000));
  double spread = 0.0;
  for (double s : steps.step) spread = std::max(spread, std::abs(s - steps.step.front()));
  const auto orbit = iterate(f, z, 100'000);
  const double e = 1e5 * std::exp(orbit.log_dist_to_tau(100'000));
  const auto sl = slope_report(f, z, default_grid(1'000'000));
  const double half_pi = std::numbers::pi / 2.0;
  const bool singleton = sl.cluster.status == ClusterStatus::singleton && std::abs(sl.cluster.lo - half_pi) <= 1e-3 && std::abs(sl.cluster.hi - half_pi) <= 1e-3;
  const auto rep = rate_report(f, z, default_grid(1'000'000));
  const double k = rep.d_vs_logn.slope;
  r.pass = spread <= 1e-12 && std::abs(e - 2.0) <= 1e-4 && singleton && std::abs(k - 1.0) <= 0.02;
  r.detail = "step spread = " + detail::num(spread) + "; n|f^n(0)-1| at 1e5 = " + fmt_double(e) + "; slope cluster [" + detail::num(sl.cluster.lo) + ", " +
             detail::num(sl.cluster.hi) + "] " + to_string(sl.cluster.status) + "; d/log n = " + detail::num(k);
  return r;
}

// QuadraticParabolic against the independently iterated recurrence e' = e - e^2/2.
inline CriterionResult zero_parabolic_laws() {
  CriterionResult r{5, "zero-parabolic-laws", true, {}};
  const auto f = ModelMap::quadratic();
  const DiskPoint z(0.0, 0.0);
  const std::uint64_t N = 1'000'000;
  const auto orbit = iterate(f, z, N);
  double e = 1.0, worst = 0.0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    e -= 0.5 * e * e;
    if (n == 10 || n == 1000 || n == N) worst = std::max(worst, std::abs((1.0 - orbit.disk(n)->value().real()) / e - 1.0));
  }
  const double ne = static_cast<double>(N) * (1.0 - orbit.disk(N)->value().real());
  const auto rep = rate_report(f, z, default_grid(N));
  const double k = rep.d_vs_logn.slope;
  const auto* fl = rep.verdict("divergence-floor");
  const auto sl = slope_report(f, z, default_grid(N));
  const bool singleton = sl.cluster.status == ClusterStatus::singleton && std::abs(sl.cluster.lo) <= 1e-3 && std::abs(sl.cluster.hi) <= 1e-3;
  r.pass = worst <= 1e-6 && ne >= 1.9 && ne <= 2.1 && k >= 0.48 && k <= 0.52 && fl && fl->pass && std::isfinite(rep.floor_c) && singleton;
  r.detail = "relative gap to the recurrence = " + detail::num(worst) + "; n(1-f^n(0)) at 1e6 = " + detail::num(ne) + "; d/log n = " + detail::num(k) +
             "; floor c = " + detail::num(rep.floor_c) + "; slope cluster [" + detail::num(sl.cluster.lo) + ", " + detail::num(sl.cluster.hi) + "]";
  return r;
}

// Discrete quasi-geodesic criterion agrees with tangentiality.
inline CriterionResult quasi_geodesic_equivalence() {
  CriterionResult r{6, "quasi-geodesic-equivalence", true, {}};
  const DiskPoint z(0.0, 0.0);
  const auto koe = discrete_qg_fit(ModelMap::koebe(), z, 10'000);
  const auto hyp = discrete_qg_fit(ModelMap::hyperbolic(2.0), z, 10'000);
  const auto par = discrete_qg_fit(ModelMap::parabolic(), z, 10'000);
  const auto w = find_pair(par, 1.0, 10'000.0);
  const double ratio = w ? QgCertificate::ratio(*w) : NAN;
  const bool k_ok = koe.verdict == QgVerdict::certified && koe.A == 1.0 && koe.B == 0.0 && koe.min_slack >= -1e-9 && koe.audit_ok;
  const bool h_ok = hyp.verdict == QgVerdict::certified && hyp.A <= 1.1 + 1e-12 && hyp.audit_ok;
  const bool p_ok = par.verdict == QgVerdict::refuted && ratio > 20.0;
  r.pass = k_ok && h_ok && p_ok;
  r.detail = "koebe (A, B) = (" + detail::num(koe.A) + ", " + detail::num(koe.B) + "), min slack " + detail::num(koe.min_slack) + "; hyperbolic A = " +
             detail::num(hyp.A) + "; parabolic " + to_string(par.verdict) + ", witness ratio at (1, 1e4) = " + detail::num(ratio);
  return r;
}

// Schwarz-Pick, Julia, Mobius invariance and distance brackets on random samples.
inline CriterionResult property_suites(std::uint64_t seed) {
  CriterionResult r{7, "property-suites", true, {}};
  std::mt19937_64 rng(seed);
  const std::vector<ModelMap> zoo{ModelMap::hyperbolic(2.0), ModelMap::parabolic(), ModelMap::koebe(), ModelMap::quadratic()};
  double sp = INFINITY, jl = INFINITY;
  for (const auto& f : zoo) {
    const double fp = *f.fprime_tau();
    for (int i = 0; i < 10'000; ++i) {
      const auto a = detail::random_disk(rng, 0.95), b = detail::random_disk(rng, 0.95);
      const auto fa = f.eval(a), fb = f.eval(b);
      sp = std::min(sp, dist_disk(a, b) - dist_disk(fa, fb));
      const double rhs = fp * julia_quotient(f.tau(), a);
      jl = std::min(jl, (rhs - julia_quotient(f.tau(), fa)) / std::max(1.0, rhs));
    }
  }
  double mob = 0.0;
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 10'000; ++i) {
    const DiscAutomorphism m(ang(rng), detail::random_disk(rng, 0.8));
    const auto a = detail::random_disk(rng, 0.8), b = detail::random_disk(rng, 0.8);
    mob = std::max(mob, std::abs(dist_disk(m(a), m(b)) - dist_disk(a, b)));
  }
  const SimplyConnectedDescriptor k = SlitPlaneK{};
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  int contained = 0, with_upper = 0;
  for (int i = 0; i < 1000; ++i) {
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
    const auto br = distance_lemma_bounds(DomainRef{k}, a, b);
    const double exact = dist_domain(k, a, b);
    const bool in = br.lower <= exact + 1e-12 && (!br.upper || *br.upper * (1.0 + 1e-9) >= exact);
    if (br.upper) ++with_upper;
    if (in) ++contained;
  }
  r.pass = sp >= -1e-12 && jl >= -1e-12 && mob <= 1e-12 && contained == 1000;
  r.detail = "min Schwarz-Pick slack = " + detail::num(sp) + "; min Julia slack = " + detail::num(jl) + "; max Mobius defect = " + detail::num(mob) +
             "; distance brackets containing the exact distance: " + std::to_string(contained) + "/1000 (" + std::to_string(with_upper) + " two-sided)";
  return r;
}

// Horodisc instance of internal tangency: ratio - 1 <= 10 e at z = 1 - e, decreasing.
inline CriterionResult internal_tangency() {
  CriterionResult r{8, "internal-tangency", true, {}};
  double prev = INFINITY, worst = 0.0;
  bool monotone = true, bounded = true;
  for (int k = 2; k <= 10; ++k) {
    const double e = std::pow(10.0, -k);
    const double x = horodisc_tangency_ratio(1.0, DiskPoint(1.0 - e, 0.0)) - 1.0;
    bounded = bounded && x <= 10.0 * e;
    monotone = monotone && x < prev;
    worst = std::max(worst, x / e);
    prev = x;
  }
  r.pass = bounded && monotone;
  r.detail = "max (ratio - 1)/10^-k over k = 2..10 = " + detail::num(worst) + " (<= 10); " + (monotone ? "strictly decreasing" : "not monotone");
  return r;
}

// Harmonic measure: exact arcs, WOS against quadrature, Solynin floor, Koebe tail chain.
inline CriterionResult harmonic_measure(const AcceptanceOptions& opt) {
  CriterionResult r{9, "harmonic-measure", true, {}};
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double arc_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t1 = 2.0 * std::numbers::pi * u(rng), len = std::numbers::pi * u(rng);
    arc_err = std::max(arc_err, std::abs(hm_disk_arc(DiskPoint(0.0, 0.0), t1, t1 + len).value - hm_arcsin(2.0 * std::sin(len / 2.0)).value));
  }
  WosOptions o;
  o.walks = 100'000;
  o.threads = opt.threads;
  double worst_z = 0.0;
  for (int i = 0; i < 10; ++i) {
    const DiskPoint z(std::polar(0.6 * u(rng), 2.0 * std::numbers::pi * u(rng)));
    const double t1 = 2.0 * std::numbers::pi * u(rng) - std::numbers::pi, t2 = t1 + 0.3 + 2.0 * u(rng);
    o.seed = opt.seed + 100 + static_cast<std::uint64_t>(i);
    const auto q = hm_disk_arc(z, t1, t2);
    const auto w = hm_wos(SlitDiskDomain{}, z, HmTarget::arc(t1, t2), o);
    worst_z = std::max(worst_z, std::abs(w.value - q.value) / w.se);
  }
  bool solynin = true;
  for (double len : {0.9, 0.5, 0.3, 0.1, 0.05}) {
    o.seed = opt.seed + 200;
    const auto e = hm_wos(SlitDiskDomain({1.0 - len, 1.0}), DiskPoint(0.0, 0.0), HmTarget::slit(), o);
    solynin = solynin && e.value >= hm_arcsin(len).value - 3.0 * e.se;
  }
  o.seed = opt.seed + 300;
  const auto tail = tail_hm_series(ModelMap::koebe(), DiskPoint(0.0, 0.0), {10.0, 100.0, 1000.0}, o);
  r.pass = arc_err <= 1e-10 && worst_z <= 3.0 && solynin && tail.floor_chain_ok && tail.bounded;
  r.detail = "max arc error at 0 = " + detail::num(arc_err) + "; max |WOS - quadrature|/se = " + detail::num(worst_z) + "; Solynin floor " +
             (solynin ? "holds" : "fails") + " on 5 radial slits; Koebe tail: floor chain " + (tail.floor_chain_ok ? "holds" : "fails") +
             ", max omega sqrt(n) = " + detail::num(tail.max_scaled) + " (<= 5)";
  return r;
}

// Semiflow checks for the three charted models, and the Koebe landing rate.
inline CriterionResult semiflow_checks() {
  CriterionResult r{10, "semiflow", true, {}};
  std::string d;
  for (const auto& f : {ModelMap::hyperbolic(2.0), ModelMap::parabolic(), ModelMap::koebe()}) {
    const auto rep = semiflow_report(f, DiskPoint(0.0, 0.0));
    bool ok = true;
    for (const auto& c : rep.checks) ok = ok && c.pass;
    r.pass = r.pass && ok;
    d += f.name() + (ok ? " ok; " : " FAILED; ");
  }
  const auto L = landing_fit(Trajectory(ModelMap::koebe(), DiskPoint(0.0, 0.0)), 1e6);
  r.pass = r.pass && L.pass;
  r.detail = d + "koebe landing: sup |phi_t(0)-1| sqrt(t) on [1, 1e6] = " + detail::num(L.c) + ", tail exponent " + detail::num(L.tail.slope);
  return r;
}

// Koebe norm-bound exponents: 1/(2p) on H^2 and (2+alpha)/(2p) on A^2_0.
inline CriterionResult operator_corollaries() {
  CriterionResult r{11, "operator-corollaries", true, {}};
  const auto rep = asymptotic_verdicts(ModelMap::koebe(), 2.0, 0.0, 1'000'000);
  const double h = rep.series.hardy_fit.lower_vs_logn.slope;
  const double b = rep.series.bergman_fit.lower_vs_logn.slope;
  r.pass = h >= 0.2375 && h <= 0.2625 && b >= 0.475 && b <= 0.525;
  r.detail = "Hardy log-lower/log n = " + detail::num(h) + " (in [0.2375, 0.2625]); Bergman (2, 0) exponent = " + detail::num(b) + " (in [0.475, 0.525])";
  return r;
}

}  // namespace acceptance

// Each criterion runs in isolation; an exception counts as a failure of that criterion.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}) {
  using namespace acceptance;
  std::vector<CriterionResult> out;
  const auto guard = [&](int id, const char* name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({id, name, false, std::string("exception: ") + e.what()});
    }
  };
  guard(1, "koebe-sharpness", [] { return koebe_sharpness(); });
  guard(2, "koebe-root-rate", [] { return koebe_root_rate(); });
  guard(3, "hyperbolic-laws", [] { return hyperbolic_laws(); });
  guard(4, "positive-parabolic-laws", [] { return parabolic_laws(); });
  guard(5, "zero-parabolic-laws", [] { return zero_parabolic_laws(); });
  guard(6, "quasi-geodesic-equivalence", [] { return quasi_geodesic_equivalence(); });
  guard(7, "property-suites", [&] { return property_suites(opt.seed); });
  guard(8, "internal-tangency", [] { return internal_tangency(); });
  guard(9, "harmonic-measure", [&] { return harmonic_measure(opt); });
  guard(10, "semiflow", [] { return semiflow_checks(); });
  guard(11, "operator-corollaries", [] { return operator_corollaries(); });
  return out;
}

inline std::string format_criterion(const CriterionResult& c) {
  return std::string(c.pass ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.name + ": " + c.detail;
}

}  // namespace hdisc
