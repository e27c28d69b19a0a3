#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "augarch/special.hpp"

namespace augarch {

/// Neumaier compensated summation.
inline double compensated_sum(std::span<const double> xs) {
  double s = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  return s + c;
}

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean_of: empty");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

/// Unbiased sample variance.
inline double variance_of(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("variance_of: need n >= 2");
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(n - 1);
}

inline double stddev_of(std::span<const double> xs) { return std::sqrt(variance_of(xs)); }

/// Empirical quantile (type 7, linear interpolation) of a sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_se = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("least_squares: bad input");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate x");
  LinearFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.r_squared = (syy > 0.0) ? 1.0 - sse / syy : 1.0;
  f.slope_se = (n > 2) ? std::sqrt(sse / (static_cast<double>(n - 2) * sxx)) : 0.0;
  return f;
}

/// One-sample Kolmogorov-Smirnov distance sup_x |F_hat(x) - F(x)| against a
/// reference CDF, evaluated at every jump point of the empirical CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& reference) {
  const std::size_t n = sample.size();
  if (n == 0) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = reference(sample[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - fx;
    const double lo = fx - static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, hi, lo});
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov distance.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

/// Approximate p-value for the one-sample KS statistic (asymptotic law).
inline double ks_p_value(double d, std::size_t n) {
  const double lambda = (std::sqrt(static_cast<double>(n)) + 0.12 +
                         0.11 / std::sqrt(static_cast<double>(n))) *
                        d;
  return kolmogorov_tail(lambda);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Exact Clopper-Pearson confidence interval for a binomial proportion.
inline Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                double confidence = 0.95) {
  if (trials == 0) throw std::invalid_argument("clopper_pearson: no trials");
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  Interval iv;
  iv.lo = (successes == 0) ? 0.0 : betai_inv(alpha / 2.0, k, n - k + 1.0);
  iv.hi = (successes == trials) ? 1.0 : betai_inv(1.0 - alpha / 2.0, k + 1.0, n - k);
  return iv;
}

/// Average ranks with tie handling.
inline std::vector<double> ranks_of(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
    i = j + 1;
  }
  return rank;
}

/// Spearman rank correlation.
inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman_rho: bad input");
  const std::vector<double> rx = ranks_of(x);
  const std::vector<double> ry = ranks_of(y);
  const double mx = mean_of(rx);
  const double my = mean_of(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Standard error of the mean of a weakly dependent series by batch means.
inline double batch_means_se(std::span<const double> xs, std::size_t batches = 32) {
  if (xs.size() < 2 * batches) throw std::invalid_argument("batch_means_se: series too short");
  const std::size_t len = xs.size() / batches;
  std::vector<double> bm(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += xs[b * len + i];
    bm[b] = s / static_cast<double>(len);
  }
  return stddev_of(bm) / std::sqrt(static_cast<double>(batches));
}

}  // namespace augarch
