#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hdisc/rates.hpp"

using namespace hdisc;

namespace {

// Black-box copy of the lambda = 2 hyperbolic automorphism; saturates near n = 50.
ModelMap blackbox_hyperbolic() {
  CustomMap m;
  m.label = "bb-hyp";
  m.rule = [](cplx z) { return (1.0 + 3.0 * z) / (3.0 + z); };
  m.fprime_tau = 0.5;
  m.type = MapType::hyperbolic;
  m.univalent = true;
  return ModelMap::custom(m);
}

double quad_gap_oracle(std::uint64_t n) {
  // Real recurrence in the gap e = 1 - x: e' = e - e^2/2.
  double e = 1.0;
  for (std::uint64_t k = 0; k < n; ++k) e = e - 0.5 * e * e;
  return e;
}

}  // namespace

TEST(DivergenceSeries, ClosedForms) {
  const Grid g = default_grid(1'000'000);
  const DiskPoint o(0.0, 0.0);
  const auto par = divergence_series(ModelMap::parabolic(), o, g);
  const auto hyp = divergence_series(ModelMap::hyperbolic(2.0), o, g);
  const auto koe = divergence_series(ModelMap::koebe(), o, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double n = static_cast<double>(g[i]);
    ASSERT_TRUE(par[i].value && hyp[i].value && koe[i].value);
    EXPECT_NEAR(*par[i].value, std::asinh(n / 2.0), 1e-12 * std::max(1.0, *par[i].value));
    EXPECT_NEAR(*hyp[i].value, 0.5 * n * std::log(2.0), 1e-12 * std::max(1.0, *hyp[i].value));
    EXPECT_NEAR(*koe[i].value, 0.25 * std::log1p(n), 1e-13 * std::max(1.0, *koe[i].value));
  }
}

TEST(DivergenceSeries, QuadraticMatchesRecurrence) {
  const Grid g{1, 10, 100, 1000, 10000};
  const auto s = divergence_series(ModelMap::quadratic(), DiskPoint(0.0, 0.0), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double e = quad_gap_oracle(g[i]);
    EXPECT_NEAR(*s[i].value, 0.5 * std::log((2.0 - e) / e), 1e-9);
  }
}

TEST(EuclideanSeries, ClosedForms) {
  const Grid g = default_grid(100'000);
  const auto par = euclidean_series(ModelMap::parabolic(), DiskPoint(0.0, 0.0), g);
  const auto koe = euclidean_series(ModelMap::koebe(), DiskPoint(0.0, 0.0), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double n = static_cast<double>(g[i]);
    // z_n = n/(n + 2i)
    EXPECT_NEAR(par[i].dist_to_tau, 2.0 / std::sqrt(n * n + 4.0), 1e-12 * par[i].dist_to_tau);
    const double q = std::sqrt(n * n + 4.0);
    EXPECT_NEAR(par[i].one_minus_mod, 4.0 / (q * (q + n)), 1e-12 * par[i].one_minus_mod);
    // z_n = (s - 1)/(s + 1), s = sqrt(n + 1)
    const double s = std::sqrt(n + 1.0);
    EXPECT_NEAR(koe[i].dist_to_tau, 2.0 / (s + 1.0), 1e-13);
    EXPECT_NEAR(koe[i].one_minus_mod, 2.0 / (s + 1.0), 1e-13);
  }
}

TEST(StepSeries, ConstantAndVanishingSteps) {
  const Grid g = default_grid(100'000);
  const auto hyp = step_series(ModelMap::hyperbolic(2.0), DiskPoint(0.0, 0.0), g);
  // Koenigs coordinates h_0 + n carry an absolute rounding of n * 1e-16.
  EXPECT_NEAR(hyp.limit_estimate, 0.5 * std::log(2.0), 1e-10);
  EXPECT_TRUE(hyp.non_increasing);
  EXPECT_FALSE(hyp.zero_step);
  // Off the axis the step is d(w, 2w) = atanh(|w| / |2w + conj w|) in the right half-plane.
  const DiskPoint z(0.3, 0.1);
  const cplx w = (1.0 + z.value()) / (1.0 - z.value());
  const auto off = step_series(ModelMap::hyperbolic(2.0), z, g);
  for (double s : off.step) EXPECT_NEAR(s, std::atanh(std::abs(w) / std::abs(2.0 * w + std::conj(w))), 1e-10);
  const auto par = step_series(ModelMap::parabolic(), DiskPoint(0.0, 0.0), g);
  EXPECT_NEAR(par.limit_estimate, std::asinh(0.5), 1e-12);
  EXPECT_FALSE(par.zero_step);
  const auto koe = step_series(ModelMap::koebe(), DiskPoint(0.0, 0.0), g);
  const double n = static_cast<double>(g.back());
  EXPECT_NEAR(koe.limit_estimate, 0.25 * std::log((n + 2.0) / (n + 1.0)), 1e-13);
  EXPECT_TRUE(koe.zero_step);
  EXPECT_TRUE(koe.non_increasing);
  EXPECT_TRUE(step_series(ModelMap::quadratic(), DiskPoint(0.1, 0.5), g).zero_step);
}

TEST(ArosioBracci, LimitMatchesAngularDerivative) {
  for (double lambda : {1.3, 2.0, 10.0}) {
    const auto ab = arosio_bracci_limit(ModelMap::hyperbolic(lambda), DiskPoint(-0.4, 0.2), 10'000'000);
    EXPECT_NEAR(ab.target, 0.5 * std::log(lambda), 1e-15);
    EXPECT_TRUE(ab.pass) << lambda << " " << ab.tail_average;
  }
  const auto par = arosio_bracci_limit(ModelMap::parabolic(), DiskPoint(0.0, 0.0), 10'000'000);
  EXPECT_EQ(par.target, 0.0);
  EXPECT_TRUE(par.pass) << par.tail_average;
  const auto koe = arosio_bracci_limit(ModelMap::koebe(), DiskPoint(0.0, 0.0), 10'000'000);
  EXPECT_TRUE(koe.pass) << koe.tail_average;
}

TEST(ArosioBracci, WrongTargetFails) {
  const auto ab = arosio_bracci_limit(ModelMap::hyperbolic(2.0), DiskPoint(0.0, 0.0), 1'000'000, 0.4);
  EXPECT_FALSE(ab.pass);
}

TEST(LowerBound, GeometricFloorHolds) {
  for (double eps : {0.1, 0.5, 0.9}) {
    const auto c = lower_bound_check(ModelMap::hyperbolic(2.0), DiskPoint(0.0, 0.0), eps, 10'000'000);
    EXPECT_TRUE(c.pass) << eps;
    EXPECT_LE(c.log_c0, c.first_ratio_log);
    // |z_1 - 1| = 2/3 for z_1 = 1/3.
    EXPECT_NEAR(c.first_ratio_log, std::log((2.0 / 3.0) / (0.5 * eps)), 1e-14);
  }
  EXPECT_TRUE(lower_bound_check(ModelMap::parabolic(), DiskPoint(0.0, 0.0), 0.5, 1'000'000).pass);
  EXPECT_THROW((void)lower_bound_check(ModelMap::parabolic(), DiskPoint(0.0, 0.0), 1.0, 1000), std::invalid_argument);
}

TEST(RateReport, ModelsSatisfyAllRateVerdicts) {
  const Grid big = default_grid(10'000'000);
  const Grid box = default_grid(1'000'000);
  for (const auto& f : {ModelMap::hyperbolic(2.0), ModelMap::parabolic(), ModelMap::koebe(), ModelMap::quadratic()}) {
    const auto rep = rate_report(f, DiskPoint(0.1, 0.2), f.charted() ? big : box);
    for (const auto& v : rep.verdicts) EXPECT_TRUE(v.pass) << f.name() << ": " << v.name << " " << v.detail;
    EXPECT_EQ(rep.excluded, 0u);
  }
}

TEST(RateReport, KoebeIsSharp) {
  const auto rep = rate_report(ModelMap::koebe(), DiskPoint(0.0, 0.0), default_grid(10'000'000));
  EXPECT_NEAR(rep.d_vs_logn.slope, 0.25, 1e-6);
  EXPECT_NEAR(rep.log_gap_vs_logn.slope, -0.5, 1e-3);
  EXPECT_NEAR(rep.log_dist_vs_logn.slope, -0.5, 1e-3);
  EXPECT_EQ(rep.tangentiality, Tangentiality::non_tangential);
}

TEST(RateReport, QuadraticRates) {
  const auto rep = rate_report(ModelMap::quadratic(), DiskPoint(0.0, 0.0), default_grid(1'000'000));
  EXPECT_GE(rep.d_vs_logn.slope, 0.48);
  EXPECT_LE(rep.d_vs_logn.slope, 0.52);
  EXPECT_NEAR(rep.log_gap_vs_logn.slope, -1.0, 1e-2);
}

TEST(RateReport, SaturatedPointsAreExcluded) {
  const auto rep = rate_report(blackbox_hyperbolic(), DiskPoint(0.0, 0.0), default_grid(1000));
  EXPECT_GT(rep.excluded, 0u);
  for (const auto& r : rep.rows) {
    if (!r.available) continue;
    // Rounding of z_n costs a relative 1e-16 / (1 - |z_n|) in the gap.
    EXPECT_NEAR(r.d, 0.5 * static_cast<double>(r.n) * std::log(2.0), 1e-9 + 2e-16 / r.one_minus_mod);
  }
}

TEST(RateReport, GridErrors) {
  EXPECT_THROW((void)rate_report(ModelMap::koebe(), DiskPoint(0.0, 0.0), Grid{}), std::invalid_argument);
  EXPECT_THROW((void)rate_report(ModelMap::koebe(), DiskPoint(0.0, 0.0), Grid{5, 3}), std::invalid_argument);
  EXPECT_THROW((void)rate_report(ModelMap::quadratic(), DiskPoint(0.0, 0.0), Grid{1, 2'000'000}), std::invalid_argument);
}
