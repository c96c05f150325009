#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hdisc/domains.hpp"
#include "hdisc/hypgeo.hpp"
#include "hdisc/maps.hpp"

using namespace hdisc;

namespace {

// Textbook quotient-of-logs form, used only away from the boundary.
double dist_naive(cplx z, cplx w) {
  const double rho = std::abs(1.0 - std::conj(w) * z);
  const double delta = std::abs(z - w);
  return 0.5 * std::log((rho + delta) / (rho - delta));
}

DiskPoint random_disk(std::mt19937_64& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = rmax * std::sqrt(u(rng));
  return DiskPoint(std::polar(r, 2.0 * std::numbers::pi * u(rng)));
}

}  // namespace

TEST(DiskPoint, RejectsBoundaryAndNonFinite) {
  EXPECT_THROW(DiskPoint(1.0, 0.0), std::domain_error);
  EXPECT_THROW(DiskPoint(cplx(0.8, 0.6)), std::domain_error);
  EXPECT_THROW(DiskPoint(std::nan(""), 0.0), std::invalid_argument);
  EXPECT_THROW(DiskPoint(INFINITY, 0.0), std::invalid_argument);
  EXPECT_FALSE(DiskPoint::try_make(cplx(2.0, 0.0)).has_value());
  EXPECT_NO_THROW(DiskPoint(0.999999, 0.0));
}

TEST(BoundaryPoint, AngleNormalized) {
  EXPECT_DOUBLE_EQ(BoundaryPoint(-std::numbers::pi / 2).angle(), 1.5 * std::numbers::pi);
  EXPECT_EQ(BoundaryPoint(0.0).value(), cplx(1.0, 0.0));
  EXPECT_DOUBLE_EQ(BoundaryPoint(2.0 * std::numbers::pi).angle(), 0.0);
  EXPECT_NEAR(std::abs(BoundaryPoint(1.234).value()), 1.0, 1e-15);
  EXPECT_THROW(BoundaryPoint(NAN), std::invalid_argument);
}

TEST(MetricDisk, Examples) {
  EXPECT_DOUBLE_EQ(metric_disk(DiskPoint(0.0, 0.0)), 1.0);
  EXPECT_NEAR(metric_disk(DiskPoint(0.5, 0.0)), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(metric_disk(DiskPoint(0.999, 0.0)), 1.0 / (0.001 * 1.999), 1e-9);
  EXPECT_NEAR(metric_disk(DiskPoint(0.999, 0.0)), 500.2501250625, 1e-7);
}

TEST(DistDisk, Examples) {
  const DiskPoint z(0.3, -0.2);
  EXPECT_EQ(dist_disk(z, z), 0.0);
  EXPECT_NEAR(dist_disk(DiskPoint(0.0, 0.0), DiskPoint(0.5, 0.0)), 0.5 * std::log(3.0), 1e-15);
  EXPECT_NEAR(0.5 * std::log(3.0), 0.5493061443340549, 1e-15);
  // Automorphism sending 0.3i to 0.
  const DiscAutomorphism m(0.0, DiskPoint(0.0, 0.3));
  EXPECT_NEAR(std::abs(m(DiskPoint(0.0, 0.3)).value()), 0.0, 1e-16);
  EXPECT_NEAR(dist_disk(DiskPoint(0.0, 0.3), DiskPoint(0.0, -0.3)),
              dist_disk(DiskPoint(0.0, 0.0), m(DiskPoint(0.0, -0.3))), 1e-14);
}

TEST(DistDisk, MatchesNaiveFormAndIsSymmetric) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto z = random_disk(rng, 0.9), w = random_disk(rng, 0.9);
    EXPECT_NEAR(dist_disk(z, w), dist_naive(z.value(), w.value()), 1e-12);
    EXPECT_EQ(dist_disk(z, w), dist_disk(w, z));
  }
}

TEST(DistDisk, StableNearBoundary) {
  // d(0, 1 - e) = 1/2 log((2 - e)/e) exactly; the stable form keeps full accuracy.
  for (int k = 3; k <= 15; ++k) {
    const double e = std::pow(10.0, -k);
    const DiskPoint z(1.0 - e, 0.0);
    const double gap = 1.0 - z.re();
    EXPECT_NEAR(dist_disk(DiskPoint(0.0, 0.0), z), 0.5 * std::log((2.0 - gap) / gap), 1e-12);
  }
}

TEST(MobiusInvariance, RandomAutomorphisms) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 1000; ++i) {
    const DiscAutomorphism m(u(rng), random_disk(rng, 0.8));
    const auto z = random_disk(rng, 0.8), w = random_disk(rng, 0.8);
    EXPECT_NEAR(dist_disk(m(z), m(w)), dist_disk(z, w), 1e-12);
    EXPECT_NEAR(std::abs(m.inverse(m(z)).value() - z.value()), 0.0, 1e-14);
  }
}

TEST(DistHalfPlane, GeodesicAlongAxis) {
  for (int n = 0; n <= 60; ++n) {
    const double lambda = 3.0;
    const double expected = 0.5 * n * std::log(lambda);
    EXPECT_NEAR(dist_halfplane(1.0, std::pow(lambda, n), HalfPlaneChart::right), expected, 1e-12 * std::max(1.0, expected));
    if (n <= 15) {
      const auto a = cayley_to_disk(HalfPlanePoint(1.0, HalfPlaneChart::right));
      const auto b = cayley_to_disk(HalfPlanePoint(std::pow(lambda, n), HalfPlaneChart::right));
      EXPECT_NEAR(dist_disk(a, b), expected, 1e-9);
    }
  }
  // Far beyond double disc coordinates.
  EXPECT_NEAR(dist_halfplane(1.0, 1e300, HalfPlaneChart::right), 150.0 * std::log(10.0), 1e-10);
}

TEST(DistHalfPlane, UpperChart) {
  EXPECT_EQ(dist_halfplane(cplx(0, 1), cplx(0, 1), HalfPlaneChart::upper), 0.0);
  const cplx a(0.0, 1.0), b(1.0, 1.0);
  const auto za = cayley_to_disk(HalfPlanePoint(a, HalfPlaneChart::upper));
  const auto zb = cayley_to_disk(HalfPlanePoint(b, HalfPlaneChart::upper));
  EXPECT_NEAR(dist_halfplane(a, b, HalfPlaneChart::upper), dist_disk(za, zb), 1e-12);
  EXPECT_THROW(dist_halfplane(cplx(0, -1), cplx(0, 1), HalfPlaneChart::upper), std::domain_error);
  EXPECT_THROW(dist_halfplane(cplx(0, 1), cplx(1, 0), HalfPlaneChart::upper), std::domain_error);
}

TEST(DistHalfPlane, ChartConsistencyRandom) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto z = random_disk(rng, 0.9), w = random_disk(rng, 0.9);
    for (auto chart : {HalfPlaneChart::right, HalfPlaneChart::upper}) {
      const cplx a = cayley_to_half_plane(z, chart), b = cayley_to_half_plane(w, chart);
      EXPECT_NEAR(dist_halfplane(a, b, chart), dist_disk(z, w), 1e-12 * std::max(1.0, dist_disk(z, w)));
    }
  }
}

TEST(RhpPoint, LogPolarDistanceMatchesCartesian) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> L(-20.0, 20.0), A(-1.4, 1.4);
  for (int i = 0; i < 500; ++i) {
    const double la = L(rng), lb = L(rng), aa = A(rng), ab = A(rng);
    const cplx a = std::exp(la) * std::polar(1.0, aa), b = std::exp(lb) * std::polar(1.0, ab);
    // Scaling by e^400 is an isometry and forces the log-polar branch.
    const double ref = rhp_distance(a, b);
    const auto pa = RhpPoint::from_log_polar(la + 400.0, std::polar(1.0, aa));
    const auto pb = RhpPoint::from_log_polar(lb + 400.0, std::polar(1.0, ab));
    ASSERT_FALSE(pa.has_cartesian());
    EXPECT_NEAR(rhp_distance(pa, pb), ref, 1e-10 * std::max(1.0, ref));
  }
}

TEST(ChartPoint, DerivedQuantitiesMatchDisc) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 500; ++i) {
    const auto z = random_disk(rng, 0.9);
    const BoundaryPoint tau(u(rng));
    const auto c = ChartPoint::from_disk(z, tau);
    EXPECT_NEAR(c.dist_to_tau(), std::abs(tau.value() - z.value()), 1e-13);
    EXPECT_NEAR(std::exp(c.log_one_minus_mod_sq()), z.one_minus_mod_sq(), 1e-13);
    EXPECT_NEAR(c.one_minus_mod(), 1.0 - z.modulus(), 1e-13);
    EXPECT_NEAR(c.slope_angle(), std::arg(1.0 - std::conj(tau.value()) * z.value()), 1e-13);
    EXPECT_NEAR(std::exp(c.log_julia_quotient()), julia_quotient(tau, z), 1e-11 * julia_quotient(tau, z));
    EXPECT_NEAR(c.distance_from_origin(), dist_disk(DiskPoint(0.0, 0.0), z), 1e-12);
    EXPECT_NEAR(std::abs(c.disk()->value() - z.value()), 0.0, 1e-14);
  }
}

TEST(ChartPoint, BeyondDoublePrecision) {
  // w = 2^100: 1 - |z| = 2/(2^100 + 1), not representable as a disc point.
  const auto c = ChartPoint(BoundaryPoint{}, RhpPoint::from_log_polar(100.0 * std::log(2.0), 1.0));
  EXPECT_TRUE(c.saturated());
  EXPECT_NEAR(c.log_dist_to_tau(), std::log(2.0) - std::log(std::pow(2.0, 100) + 1.0), 1e-12);
  EXPECT_NEAR(c.distance_from_origin(), 50.0 * std::log(2.0), 1e-12);
}

TEST(CurveLength, Examples) {
  std::vector<cplx> radius;
  const int n = 10000;
  for (int i = 0; i <= n; ++i) radius.push_back(0.5 * i / n);
  EXPECT_NEAR(curve_length(MetricTag::disc, radius), 0.5 * std::log(3.0), 1e-6);
  const std::vector<cplx> repeated(5, cplx(0.2, 0.1));
  EXPECT_EQ(curve_length(MetricTag::disc, repeated), 0.0);
  std::vector<cplx> semicircle;
  for (int i = 0; i <= 2000; ++i) semicircle.push_back(std::polar(0.5, std::numbers::pi * i / 2000));
  EXPECT_GE(curve_length(MetricTag::disc, semicircle), dist_disk(DiskPoint(0.5, 0), DiskPoint(-0.5, 0)));
  EXPECT_THROW(curve_length(MetricTag::disc, std::vector<cplx>{0.1}), std::invalid_argument);
  EXPECT_THROW(curve_length(MetricTag::disc, std::vector<cplx>{0.1, 1.2}), std::domain_error);
}

TEST(CurveLength, MonotoneUnderRefinement) {
  // Convex density along a geodesic: the trapezoid rule overestimates and decreases with refinement.
  double prev = INFINITY;
  for (int n : {10, 20, 40, 80, 160}) {
    std::vector<cplx> s;
    for (int i = 0; i <= n; ++i) s.push_back(0.9 * i / n);
    const double len = curve_length(MetricTag::disc, s);
    EXPECT_LE(len, prev);
    EXPECT_GE(len, dist_disk(DiskPoint(0, 0), DiskPoint(0.9, 0)));
    prev = len;
  }
}

TEST(Stolz, Examples) {
  const StolzAngle s(BoundaryPoint{}, 2.0);
  EXPECT_TRUE(stolz_contains(s, DiskPoint(0, 0)));
  const DiskPoint z(std::polar(0.99, 0.5));
  EXPECT_GT(std::abs(1.0 - z.value()) / (1.0 - 0.99), 2.0);
  EXPECT_FALSE(stolz_contains(s, z));
  const StolzAngle thin(BoundaryPoint{}, 1.0001);
  for (double t = 0.0; t < 1.0; t += 0.0625) EXPECT_TRUE(stolz_contains(thin, DiskPoint(t, 0.0)));
  EXPECT_THROW(StolzAngle(BoundaryPoint{}, 1.0), std::invalid_argument);
}

TEST(Sector, HalfApertureSolvesDistanceEquation) {
  for (double R : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const HalfPlaneSector s(1.0, R);
    const double beta = s.half_aperture();
    EXPECT_GT(beta, 0.0);
    EXPECT_LT(beta, std::numbers::pi / 2);
    const double c = s.half_aperture_complement();
    EXPECT_NEAR(rhp_distance(cplx(1.0, 0.0), cplx(std::sin(c), std::cos(c))), R, 1e-12);
    // cosh 2R = 1/cos beta on the unit circle, so sin c = 1/cosh 2R.
    EXPECT_NEAR(c, std::asin(1.0 / std::cosh(2.0 * R)), 1e-12 * c);
    EXPECT_NEAR(beta, std::acos(1.0 / std::cosh(2.0 * R)), 1e-12);
  }
}

TEST(Sector, Membership) {
  const double g0 = 2.0, R = 0.4;
  const HalfPlaneSector s(g0, R);
  EXPECT_TRUE(sector_halfplane_contains(s, cplx(2.0 * g0, 0.0)));
  const cplx out = 1.5 * g0 * std::polar(1.0, s.half_aperture() + 0.2);
  ASSERT_GT(rhp_distance(out, cplx(g0, 0.0)), R);
  EXPECT_FALSE(sector_halfplane_contains(s, out));
  // Disc branch: a point at distance R/2 from gamma0 straight up.
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rhp_distance(cplx(g0, mid), cplx(g0, 0.0)) < R / 2) lo = mid;
    else hi = mid;
  }
  EXPECT_TRUE(sector_halfplane_contains(s, cplx(g0, lo)));
}

TEST(Sector, TailsNest) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lr(-3.0, 6.0), ang(-1.5, 1.5);
  const double R = 0.7;
  const HalfPlaneSector small(1.0, R), large(5.0, R);
  for (int i = 0; i < 10000; ++i) {
    const cplx w = std::exp(lr(rng)) * std::polar(1.0, ang(rng));
    if (sector_halfplane_contains(large, w)) {
      EXPECT_TRUE(sector_halfplane_contains(small, w));
    }
  }
}

TEST(Horodisc, LeftmostPointIdentity) {
  for (double R : {0.1, 1.0, 4.0}) {
    const Horodisc e(BoundaryPoint{}, R);
    const double x = e.center().real() - e.radius();
    EXPECT_NEAR(julia_quotient(BoundaryPoint{}, DiskPoint(x, 0.0)), R, 1e-12);
    EXPECT_NEAR(e.center().real() + e.radius(), 1.0, 1e-15);  // tangent at the contact point
  }
}

TEST(Julia, Examples) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto z = random_disk(rng);
    EXPECT_TRUE(julia_check(BoundaryPoint{}, 1.0, z, z));
  }
  const auto f = ModelMap::hyperbolic(2.0);
  EXPECT_TRUE(julia_check(BoundaryPoint{}, 0.5, DiskPoint(0, 0), f.eval(DiskPoint(0, 0))));
  const auto k = ModelMap::koebe();
  for (int i = 0; i < 10000; ++i) {
    const auto z = random_disk(rng, 0.99);
    ASSERT_TRUE(julia_check(BoundaryPoint{}, 1.0, z, k.eval(z)));
  }
  EXPECT_THROW(julia_check(BoundaryPoint{}, 1.5, DiskPoint(0, 0), DiskPoint(0, 0)), std::invalid_argument);
}

TEST(DistanceBracket, SlitPlaneExample) {
  const SimplyConnectedDescriptor k = SlitPlaneK{};
  const auto b = distance_lemma_bounds(DomainRef{k}, 0.0, 3.0);
  EXPECT_NEAR(b.lower, 0.25 * std::log(4.0), 1e-15);
  ASSERT_TRUE(b.upper.has_value());
  const double exact = dist_domain(k, 0.0, 3.0);
  EXPECT_LE(b.lower, exact);
  EXPECT_GE(*b.upper, exact);
  // The segment integral of 1/|w+1| over [0,3] is log 4.
  EXPECT_NEAR(*b.upper, std::log(4.0), 1e-8);
}

TEST(DistanceBracket, TrivialAndHalfPlane) {
  const SimplyConnectedDescriptor h = RightHalfPlane{};
  const auto same = distance_lemma_bounds(DomainRef{h}, cplx(1, 1), cplx(1, 1));
  EXPECT_EQ(same.lower, 0.0);
  EXPECT_EQ(*same.upper, 0.0);
  const auto b = distance_lemma_bounds(DomainRef{h}, cplx(1, 0), cplx(1, 1));
  const double exact = dist_halfplane(cplx(1, 0), cplx(1, 1), HalfPlaneChart::right);
  EXPECT_LE(b.lower, exact);
  EXPECT_GE(*b.upper, exact);
  EXPECT_THROW(distance_lemma_bounds(DomainRef{h}, cplx(-1, 0), cplx(1, 1)), std::domain_error);
}

TEST(DistanceBracket, UpperAbsentWhenSegmentCrossesSlit) {
  const SimplyConnectedDescriptor k = SlitPlaneK{};
  const auto b = distance_lemma_bounds(DomainRef{k}, cplx(-3, 1), cplx(-3, -1));
  EXPECT_FALSE(b.upper.has_value());
  EXPECT_LE(b.lower, dist_domain(k, cplx(-3, 1), cplx(-3, -1)));
}

TEST(DistanceBracket, BracketSoundnessRandomSlitPairs) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  const SimplyConnectedDescriptor k = SlitPlaneK{};
  int with_upper = 0;
  for (int i = 0; i < 1000; ++i) {
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
    const auto br = distance_lemma_bounds(DomainRef{k}, a, b);
    const double exact = dist_domain(k, a, b);
    EXPECT_LE(br.lower, exact + 1e-12);
    if (br.upper) {
      ++with_upper;
      EXPECT_GE(*br.upper * (1.0 + 1e-9), exact);
    }
  }
  EXPECT_GT(with_upper, 100);
}

TEST(EuclidRateBracket, Examples) {
  const auto b0 = euclid_rate_bracket(0.0);
  EXPECT_EQ(b0.lo, 1.0);
  EXPECT_EQ(b0.hi, 2.0);
  const auto b = euclid_rate_bracket(0.5 * std::log(3.0));
  EXPECT_NEAR(b.lo, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.hi, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(b.lo <= 0.5 && 0.5 <= b.hi);
  // Koebe orbit of 0 at n = 100: 1 - |z| = 2/(sqrt(101) + 1).
  const double d = 0.25 * std::log(101.0);
  const auto bk = euclid_rate_bracket(d);
  const double gap = 2.0 / (std::sqrt(101.0) + 1.0);
  EXPECT_TRUE(bk.lo <= gap && gap <= bk.hi);
  EXPECT_THROW(euclid_rate_bracket(-1.0), std::invalid_argument);
}

TEST(EuclidRateBracket, RandomPoints) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const auto z = random_disk(rng, 0.999);
    const auto b = euclid_rate_bracket(dist_disk(DiskPoint(0, 0), z));
    EXPECT_LE(b.lo, (1.0 - z.modulus()) * (1 + 1e-12));
    EXPECT_GE(b.hi, (1.0 - z.modulus()) * (1 - 1e-12));
  }
}
