#pragma once

// Quasi-geodesic certificates: length(a, b) <= A d(a, b) + B over a finite
// pair set, searched on A in {1, 1.1, ..., 10} and B in {0, 1, ..., 1000}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "hdisc/domains.hpp"
#include "hdisc/fit.hpp"
#include "hdisc/maps.hpp"

namespace hdisc {

namespace qg_box {
inline constexpr int a_min_tenths = 10;
inline constexpr int a_max_tenths = 100;
inline constexpr double b_max = 1000.0;
inline constexpr double slack = 1e-9;        // per tested pair
inline constexpr double audit_slack = 1e-6;  // per audited pair
inline constexpr std::size_t audit_pairs = 1000;
inline constexpr double max_excluded_fraction = 0.5;
}  // namespace qg_box

struct QgPair {
  double a = 0.0;  // parameter (n or t) of the first point
  double b = 0.0;
  double length = 0.0;  // sum of steps, or curve length
  double distance = 0.0;
};

enum class QgVerdict { certified, refuted, inconclusive };

inline const char* to_string(QgVerdict v) {
  switch (v) {
    case QgVerdict::certified: return "certified";
    case QgVerdict::refuted: return "refuted";
    case QgVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct QgCertificate {
  std::vector<QgPair> pairs;
  QgVerdict verdict = QgVerdict::inconclusive;
  double A = NAN;
  double B = NAN;
  double min_slack = NAN;        // min of A d + B - length over tested pairs
  std::optional<QgPair> witness;  // pair maximizing (length - B_max)/d when refuted
  double witness_ratio = NAN;
  bool triangle_ok = true;        // d <= length on every pair
  std::size_t excluded = 0;      // pairs touching saturated points
  std::size_t audited = 0;
  double audit_min_slack = NAN;
  bool audit_ok = true;
  std::string note;

  // (length - B_max)/d: the A any certificate with B <= B_max would need.
  [[nodiscard]] static double ratio(const QgPair& p) {
    return p.distance > 0.0 ? (p.length - qg_box::b_max) / p.distance : -INFINITY;
  }
};

inline std::string qg_box_text() { return "search box A in [1, 10] step 0.1, B in {0, ..., 1000}"; }

// Lexicographic search: least A, then least B.
inline void qg_search(QgCertificate& c) {
  for (const auto& p : c.pairs)
    if (p.distance > p.length + qg_box::slack * std::max(1.0, p.length)) c.triangle_ok = false;
  if (c.pairs.empty()) {
    c.verdict = QgVerdict::inconclusive;
    c.note = "no pairs";
    return;
  }
  for (int k = qg_box::a_min_tenths; k <= qg_box::a_max_tenths; ++k) {
    const double A = k / 10.0;
    double need = 0.0;
    for (const auto& p : c.pairs) need = std::max(need, p.length - A * p.distance);
    const double B = std::max(0.0, std::ceil(need - qg_box::slack));
    if (B <= qg_box::b_max) {
      c.verdict = QgVerdict::certified;
      c.A = A;
      c.B = B;
      c.min_slack = INFINITY;
      for (const auto& p : c.pairs) c.min_slack = std::min(c.min_slack, A * p.distance + B - p.length);
      c.note = "certified within the " + qg_box_text();
      return;
    }
  }
  c.verdict = QgVerdict::refuted;
  c.witness_ratio = -INFINITY;
  for (const auto& p : c.pairs) {
    const double r = QgCertificate::ratio(p);
    if (r > c.witness_ratio) {
      c.witness_ratio = r;
      c.witness = p;
    }
  }
  c.note = "no feasible (A, B) in the " + qg_box_text();
}

// n values 0, 1, then floor(1.25^k) up to m_max, with m_max itself; gaps the same.
inline std::vector<std::uint64_t> geometric_indices(std::uint64_t m_max) {
  std::vector<std::uint64_t> g{0, 1};
  for (double x = 1.0; x < static_cast<double>(m_max); x *= 1.25) g.push_back(static_cast<std::uint64_t>(x));
  g.push_back(m_max);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  while (!g.empty() && g.back() > m_max) g.pop_back();
  return g;
}

// Pairs (n, m), n < m <= m_max, geometric in n and in m - n, always including m = m_max.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> default_pair_policy(std::uint64_t m_max) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  const auto idx = geometric_indices(m_max);
  for (auto n : idx) {
    if (n >= m_max) continue;
    for (auto gap : idx) {
      if (gap == 0 || n + gap > m_max) continue;
      out.emplace_back(n, n + gap);
    }
    if (std::find(idx.begin(), idx.end(), m_max - n) == idx.end()) out.emplace_back(n, m_max);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Discrete criterion: sum_{k=n}^{m-1} d(f^k z, f^{k+1} z) <= A d(f^n z, f^m z) + B.
inline QgCertificate discrete_qg_fit(const OrbitRecord& orbit, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& policy,
                                     std::uint64_t audit_seed = 1) {
  if (orbit.length() < 1) throw std::invalid_argument("discrete_qg_fit: orbit needs at least two points");
  QgCertificate c;
  const std::uint64_t last = last_available(orbit);
  std::vector<double> prefix{0.0};
  prefix.reserve(static_cast<std::size_t>(last) + 1);
  for (std::uint64_t k = 0; k < last; ++k) prefix.push_back(prefix.back() + orbit.step(k));
  auto make = [&](std::uint64_t n, std::uint64_t m) {
    return QgPair{static_cast<double>(n), static_cast<double>(m), prefix[m] - prefix[n], orbit.distance(n, m)};
  };
  for (auto [n, m] : policy) {
    if (m > orbit.length() || n >= m) throw std::invalid_argument("discrete_qg_fit: pair outside the orbit");
    if (m > last) {
      ++c.excluded;
      continue;
    }
    c.pairs.push_back(make(n, m));
  }
  if (!policy.empty() && static_cast<double>(c.excluded) > qg_box::max_excluded_fraction * static_cast<double>(policy.size())) {
    c.verdict = QgVerdict::inconclusive;
    c.note = "more than half of the pairs touch boundary-saturated points";
    return c;
  }
  qg_search(c);
  if (c.verdict == QgVerdict::certified && last >= 1) {
    std::mt19937_64 rng(audit_seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, last);
    c.audit_min_slack = INFINITY;
    while (c.audited < qg_box::audit_pairs) {
      std::uint64_t n = pick(rng), m = pick(rng);
      if (n == m) continue;
      if (n > m) std::swap(n, m);
      const auto p = make(n, m);
      c.audit_min_slack = std::min(c.audit_min_slack, c.A * p.distance + c.B - p.length);
      ++c.audited;
    }
    c.audit_ok = c.audit_min_slack >= -qg_box::audit_slack;
  }
  return c;
}

inline QgCertificate discrete_qg_fit(const ModelMap& f, DiskPoint z, std::uint64_t m_max = 10'000, std::uint64_t audit_seed = 1) {
  if (m_max < 1) throw std::invalid_argument("discrete_qg_fit: orbit needs at least two points");
  return discrete_qg_fit(iterate(f, z, m_max), default_pair_policy(m_max), audit_seed);
}

// The pair (n, m) of a certificate, if tested.
inline std::optional<QgPair> find_pair(const QgCertificate& c, double a, double b) {
  for (const auto& p : c.pairs)
    if (p.a == a && p.b == b) return p;
  return std::nullopt;
}

struct CurveSample {
  double t = 0.0;
  cplx point;
};

// Continuous criterion on a sampled curve: polyline length between samples
// (each segment split into `refine` pieces, 20-point Gauss rule on the domain
// density) against the domain distance of the endpoints.
template <DensityFunction Density, class Distance>
QgCertificate curve_qg_check(const std::vector<CurveSample>& samples, const Density& density, const Distance& distance, int refine = 4) {
  if (samples.size() < 2) throw std::invalid_argument("curve_qg_check: need at least two samples");
  if (refine < 1) throw std::invalid_argument("curve_qg_check: refine must be positive");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].t > samples[i - 1].t)) throw std::invalid_argument("curve_qg_check: parameters must increase");
  std::vector<double> prefix{0.0};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const cplx a = samples[i - 1].point, b = samples[i].point;
    const auto along = [&](double s) { return static_cast<double>(density(a + (b - a) * s)); };
    double seg = 0.0;
    for (int k = 0; k < refine; ++k)
      seg += boost::math::quadrature::gauss<double, 20>::integrate(along, static_cast<double>(k) / refine, static_cast<double>(k + 1) / refine);
    prefix.push_back(prefix.back() + seg * std::abs(b - a));
  }
  QgCertificate c;
  const auto m = samples.size() - 1;
  std::vector<std::size_t> idx;
  if (samples.size() <= 200) {
    for (std::size_t i = 0; i <= m; ++i) idx.push_back(i);
  } else {
    for (auto v : geometric_indices(m)) idx.push_back(static_cast<std::size_t>(v));
  }
  for (auto i : idx)
    for (auto j : idx) {
      if (j <= i) continue;
      c.pairs.push_back({samples[i].t, samples[j].t, prefix[j] - prefix[i], distance(samples[i].point, samples[j].point)});
    }
  qg_search(c);
  return c;
}

inline QgCertificate curve_qg_check(const std::vector<CurveSample>& samples, const SimplyConnectedDescriptor& domain, int refine = 4) {
  for (const auto& s : samples)
    if (!domain_contains(domain, s.point)) throw std::domain_error("curve_qg_check: sample outside " + domain_name(domain));
  return curve_qg_check(
      samples, [&](cplx p) { return domain_density(domain, p); }, [&](cplx a, cplx b) { return dist_domain(domain, a, b); }, refine);
}

inline QgCertificate curve_qg_check(const std::vector<CurveSample>& samples, MetricTag tag, int refine = 4) {
  const SimplyConnectedDescriptor d = tag == MetricTag::disc ? SimplyConnectedDescriptor{UnitDisc{}}
                                      : tag == MetricTag::right_half_plane ? SimplyConnectedDescriptor{RightHalfPlane{}}
                                                                           : SimplyConnectedDescriptor{UpperHalfPlane{}};
  return curve_qg_check(
      samples, [tag](cplx p) { return metric_density(tag, p); }, [d](cplx a, cplx b) { return dist_domain(d, a, b); }, refine);
}

}  // namespace hdisc
