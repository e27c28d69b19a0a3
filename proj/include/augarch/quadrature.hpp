#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace augarch {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

namespace detail {

/// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
/// Jacobi matrix (diag, offdiag), weights are mu0 times the squared first
/// components of the orthonormal eigenvectors. Implicit-shift QL, tracking
/// only the first row of the rotation product.
inline QuadRule golub_welsch(std::vector<double> diag, std::vector<double> offdiag, double mu0) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> e(n, 0.0);
  for (int i = 0; i < n - 1; ++i) e[i] = offdiag[i];
  std::vector<double> row(n, 0.0);
  row[0] = 1.0;

  auto pythag = [](double a, double b) { return std::hypot(a, b); };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw std::runtime_error("golub_welsch: QL failed to converge");
        double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
        double r = pythag(g, 1.0);
        g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          f = row[i + 1];
          row[i + 1] = s * row[i] + c * f;
          row[i] = c * row[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        diag[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  QuadRule rule;
  rule.x.resize(static_cast<std::size_t>(n));
  rule.w.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i) {
    rule.x[i] = diag[order[i]];
    rule.w[i] = mu0 * row[order[i]] * row[order[i]];
  }
  return rule;
}

}  // namespace detail

/// Gauss-Hermite rule for weight exp(-x^2).
inline QuadRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n < 1");
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  for (int j = 1; j < n; ++j) off[j - 1] = std::sqrt(0.5 * j);
  return detail::golub_welsch(std::move(diag), std::move(off), std::sqrt(3.14159265358979323846));
}

/// Gauss-Legendre rule on [a, b].
inline QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  for (int j = 1; j < n; ++j) off[j - 1] = j / std::sqrt(4.0 * j * j - 1.0);
  QuadRule r = detail::golub_welsch(std::move(diag), std::move(off), 2.0);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    r.x[i] = xm + xl * r.x[i];
    r.w[i] *= xl;
  }
  return r;
}

/// Gauss-Laguerre rule for weight exp(-x) on [0, inf).
inline QuadRule gauss_laguerre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n < 1");
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  for (int j = 0; j < n; ++j) diag[static_cast<std::size_t>(j)] = 2.0 * j + 1.0;
  for (int j = 1; j < n; ++j) off[j - 1] = static_cast<double>(j);
  return detail::golub_welsch(std::move(diag), std::move(off), 1.0);
}

/// E f(Z) for Z ~ N(0,1) via Gauss-Hermite.
template <typename F>
double expect_standard_normal(F&& f, int nodes = 256) {
  const QuadRule r = gauss_hermite(nodes);
  constexpr double inv_sqrt_pi = 0.5641895835477562869;
  constexpr double sqrt2 = 1.4142135623730950488;
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(sqrt2 * r.x[i]);
  return inv_sqrt_pi * s;
}

/// E f(U) for U ~ Uniform(a, b) via Gauss-Legendre.
template <typename F>
double expect_uniform(F&& f, double a, double b, int nodes = 128) {
  const QuadRule r = gauss_legendre(nodes, a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s / (b - a);
}

/// E f(E - 1) for E ~ Exp(1) via Gauss-Laguerre.
template <typename F>
double expect_centered_exponential(F&& f, int nodes = 128) {
  const QuadRule r = gauss_laguerre(nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i] - 1.0);
  return s;
}

}  // namespace augarch
