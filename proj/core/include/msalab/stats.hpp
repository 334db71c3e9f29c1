#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace msalab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;  // standard error of the slope
  double t_stat = 0.0;    // slope / slope_se
  int n = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("linear_fit: need >= 3 paired samples");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.n = n;
  if (sxx <= 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  const double sigma2 = ss_res / std::max(1, n - 2);
  f.slope_se = std::sqrt(sigma2 / sxx);
  f.t_stat = f.slope_se > 0 ? f.slope / f.slope_se : 0.0;
  return f;
}

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double p_hat = 0.0;
};

// 95% Wilson score interval for a binomial frequency.
inline WilsonInterval wilson_interval(long count, long trials) {
  if (trials <= 0 || count < 0 || count > trials)
    throw std::invalid_argument("wilson_interval: bad tally");
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(count) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  WilsonInterval w;
  w.p_hat = p;
  w.lo = std::max(0.0, (center - half) / denom);
  w.hi = std::min(1.0, (center + half) / denom);
  // exact at the boundary tallies (half == center mathematically; floats leave
  // a residue there)
  if (count == 0) w.lo = 0.0;
  if (count == trials) w.hi = 1.0;
  return w;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// One-sample Kolmogorov-Smirnov statistic against the uniform CDF on [0, 1].
inline double ks_statistic_uniform(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("ks_statistic_uniform: empty sample");
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::max(d, std::abs((i + 1) / n - v[i]));
    d = std::max(d, std::abs(v[i] - i / n));
  }
  return d;
}

}  // namespace msalab
