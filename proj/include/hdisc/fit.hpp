#pragma once

// Least-squares fits and sampling grids for asymptotic analysis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdisc {

// Round-trip decimal rendering used in reports.
inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct LinearFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double residual_norm = std::numeric_limits<double>::quiet_NaN();  // sqrt of the residual sum of squares
  std::size_t count = 0;

  [[nodiscard]] bool valid() const noexcept { return count >= 2 && std::isfinite(slope); }
};

// Ordinary least squares y = slope x + intercept, centred for conditioning.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("least_squares: size mismatch");
  LinearFit f;
  f.count = x.size();
  if (x.size() < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    rss += r * r;
  }
  f.residual_norm = std::sqrt(rss);
  return f;
}

using Grid = std::vector<std::uint64_t>;

inline void normalize_grid(Grid& g) {
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
}

// Dense prefix 1..32 plus floor(2^{k/2}) for k = 0..46, truncated at n_max.
inline Grid default_grid(std::uint64_t n_max = (std::uint64_t{1} << 23)) {
  Grid g;
  for (std::uint64_t n = 1; n <= 32 && n <= n_max; ++n) g.push_back(n);
  for (int k = 0; k <= 46; ++k) {
    const auto n = static_cast<std::uint64_t>(std::floor(std::pow(2.0, 0.5 * k)));
    if (n <= n_max) g.push_back(n);
  }
  if (n_max >= 1 && g.back() != n_max && n_max <= (std::uint64_t{1} << 23)) g.push_back(n_max);
  normalize_grid(g);
  return g;
}

// Geometric grid on [lo, hi] with `per_decade` points per factor of ten; both ends included.
inline Grid log_grid(std::uint64_t lo, std::uint64_t hi, int per_decade) {
  if (lo == 0 || hi < lo || per_decade < 1) throw std::invalid_argument("log_grid: need 1 <= lo <= hi and per_decade >= 1");
  Grid g;
  const double a = std::log10(static_cast<double>(lo));
  const double b = std::log10(static_cast<double>(hi));
  const auto steps = static_cast<int>(std::ceil((b - a) * per_decade));
  for (int i = 0; i <= steps; ++i) {
    const double e = a + (b - a) * i / std::max(1, steps);
    g.push_back(static_cast<std::uint64_t>(std::llround(std::pow(10.0, e))));
  }
  g.front() = lo;
  g.back() = hi;
  normalize_grid(g);
  return g;
}

// Real-valued geometric grid on [lo, hi].
inline std::vector<double> log_grid_real(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || hi < lo || per_decade < 1) throw std::invalid_argument("log_grid_real: need 0 < lo <= hi and per_decade >= 1");
  std::vector<double> g;
  const double a = std::log10(lo), b = std::log10(hi);
  const auto steps = static_cast<int>(std::ceil((b - a) * per_decade));
  for (int i = 0; i <= steps; ++i) g.push_back(std::pow(10.0, a + (b - a) * i / std::max(1, steps)));
  g.front() = lo;
  g.back() = hi;
  return g;
}

// Indices i with n[i] >= n_last / 10.
inline std::vector<std::size_t> last_decade(std::span<const std::uint64_t> n) {
  std::vector<std::size_t> idx;
  if (n.empty()) return idx;
  const double cut = static_cast<double>(n.back()) / 10.0;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (static_cast<double>(n[i]) >= cut) idx.push_back(i);
  return idx;
}

// Fit y against x restricted to the selected indices, skipping non-finite values.
inline LinearFit fit_subset(std::span<const double> x, std::span<const double> y, std::span<const std::size_t> idx) {
  std::vector<double> xs, ys;
  for (std::size_t i : idx) {
    if (std::isfinite(x[i]) && std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  }
  return least_squares(xs, ys);
}

}  // namespace hdisc
