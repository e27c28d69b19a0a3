#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace augarch {

/// erf/erfc by Cody's rational Chebyshev approximations (SPECFUN "calerf"),
/// accurate to within a few ulp over the whole range.
namespace detail {

inline double erf_small(double x) {
  // |x| <= 0.46875
  static constexpr double a[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                                  3.77485237685302021e02, 3.20937758913846947e03,
                                  1.85777706184603153e-1};
  static constexpr double b[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                                  1.28261652607737228e03, 2.84423683343917062e03};
  const double z = x * x;
  double xnum = a[4] * z;
  double xden = z;
  for (int i = 0; i < 3; ++i) {
    xnum = (xnum + a[i]) * z;
    xden = (xden + b[i]) * z;
  }
  return x * (xnum + a[3]) / (xden + b[3]);
}

inline double erfc_mid(double y) {
  // 0.46875 < y <= 4
  static constexpr double c[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                                  6.61191906371416295e01, 2.98635138197400131e02,
                                  8.81952221241769090e02, 1.71204761263407058e03,
                                  2.05107837782607147e03, 1.23033935479799725e03,
                                  2.15311535474403846e-8};
  static constexpr double d[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                                  5.37181101862009858e02, 1.62138957456669019e03,
                                  3.29079923573345963e03, 4.36261909014324716e03,
                                  3.43936767414372164e03, 1.23033935480374942e03};
  double xnum = c[8] * y;
  double xden = y;
  for (int i = 0; i < 7; ++i) {
    xnum = (xnum + c[i]) * y;
    xden = (xden + d[i]) * y;
  }
  const double result = (xnum + c[7]) / (xden + d[7]);
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

inline double erfc_large(double y) {
  // y > 4
  static constexpr double p[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                  1.25781726111229246e-1, 1.60837851487422766e-2,
                                  6.58749161529837803e-4, 1.63153871373020978e-2};
  static constexpr double q[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                                  5.27905102951428412e-1, 6.05183413124413191e-2,
                                  2.33520497626869185e-3};
  if (y >= 26.6) return 0.0;
  const double z = 1.0 / (y * y);
  double xnum = p[5] * z;
  double xden = z;
  for (int i = 0; i < 4; ++i) {
    xnum = (xnum + p[i]) * z;
    xden = (xden + q[i]) * z;
  }
  double result = z * (xnum + p[4]) / (xden + q[4]);
  result = (5.6418958354775628695e-1 - result) / y;
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

}  // namespace detail

inline double erf_approx(double x) {
  const double y = std::fabs(x);
  if (y <= 0.46875) return detail::erf_small(x);
  double ec = (y <= 4.0) ? detail::erfc_mid(y) : detail::erfc_large(y);
  return x > 0.0 ? 1.0 - ec : ec - 1.0;
}

inline double erfc_approx(double x) {
  const double y = std::fabs(x);
  double r;
  if (y <= 0.46875) {
    r = 1.0 - detail::erf_small(y);
  } else if (y <= 4.0) {
    r = detail::erfc_mid(y);
  } else {
    r = detail::erfc_large(y);
  }
  return x >= 0.0 ? r : 2.0 - r;
}

inline double normal_pdf(double x) {
  return 0.39894228040143267794 * std::exp(-0.5 * x * x);
}

/// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * erfc_approx(-x * 0.70710678118654752440);
}

/// CDF of sup of standard Brownian motion on [0,1]: max(0, 2 Phi(x) - 1).
inline double sup_w_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return 2.0 * normal_cdf(x) - 1.0;
}

namespace detail {

/// Continued fraction for the incomplete beta function (modified Lentz).
inline double betacf(double a, double b, double x) {
  constexpr int max_iter = 300;
  constexpr double eps = 3.0e-16;
  constexpr double fpmin = 1.0e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double betai(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("betai: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * detail::betacf(a, b, x) / a;
  return 1.0 - bt * detail::betacf(b, a, 1.0 - x) / b;
}

/// CDF of Student t with df degrees of freedom (not variance-normalized).
inline double student_t_cdf(double t, double df) {
  if (df <= 0.0) throw std::domain_error("student_t_cdf: df <= 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = df / (df + t * t);
  const double p = 0.5 * betai(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - p : p;
}

/// Inverse of p = betai(a, b, x) by bisection.
inline double betai_inv(double p, double a, double b) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (betai(a, b, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

/// Limiting Kolmogorov tail P(sup |B(t)| > lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::exp(-2.0 * static_cast<double>(j) * j * lambda * lambda);
    s += (j % 2 == 1) ? term : -term;
    if (term < 1e-12) break;
  }
  if (s < 0.0) s = 0.0;
  if (s > 1.0) s = 1.0;
  return s;
}

}  // namespace augarch
