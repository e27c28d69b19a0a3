#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "augarch/model.hpp"
#include "augarch/quadrature.hpp"
#include "augarch/rng.hpp"
#include "augarch/special.hpp"
#include "augarch/stats.hpp"

namespace {

/// High-precision series oracle for the standard normal CDF:
/// Phi(x) = 1/2 + phi(x) * sum_{k>=0} x^{2k+1} / (1*3*...*(2k+1)).
long double phi_series(long double x) {
  const long double pdf = std::exp(-0.5L * x * x) * 0.398942280401432677939946059934L;
  long double term = x;
  long double sum = x;
  for (int k = 1; k < 500; ++k) {
    term *= x * x / (2.0L * k + 1.0L);
    sum += term;
    if (std::fabs(term) < 1e-25L * std::fabs(sum)) break;
  }
  return 0.5L + pdf * sum;
}

/// O(n^2) brute-force KS distance: checks both one-sided gaps at every jump.
double ks_brute_force(const std::vector<double>& sample, double (*cdf)(double)) {
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (double x : sample) {
    double below = 0.0;
    double at_or_below = 0.0;
    for (double v : sample) {
      if (v < x) below += 1.0;
      if (v <= x) at_or_below += 1.0;
    }
    const double fx = cdf(x);
    d = std::max({d, std::fabs(at_or_below / n - fx), std::fabs(fx - below / n)});
  }
  return d;
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TEST_CASE("normal cdf basics") {
  CHECK(augarch::normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
  CHECK(augarch::normal_cdf(1.959964) == Catch::Approx(0.975).margin(1e-6));
  CHECK(augarch::sup_w_cdf(0.0) == 0.0);
  CHECK(augarch::sup_w_cdf(-1.0) == 0.0);
  CHECK(augarch::sup_w_cdf(1.0) == Catch::Approx(2.0 * augarch::normal_cdf(1.0) - 1.0));
}

TEST_CASE("normal cdf symmetry on random points") {
  augarch::RandomStream rng(12345);
  for (int i = 0; i < 1000; ++i) {
    const double x = 8.0 * rng.uniform_sym();
    CHECK(std::fabs(augarch::normal_cdf(-x) - (1.0 - augarch::normal_cdf(x))) < 1e-12);
  }
}

TEST_CASE("normal cdf matches series oracle to 1e-7") {
  double worst = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    const double err = std::fabs(augarch::normal_cdf(x) - static_cast<double>(phi_series(x)));
    worst = std::max(worst, err);
  }
  CHECK(worst < 1e-7);
  CHECK(worst < 1e-13);  // Cody's approximation is much better than the contract
}

TEST_CASE("student t cdf against known quantiles") {
  CHECK(augarch::student_t_cdf(0.0, 5.0) == Catch::Approx(0.5).margin(1e-14));
  CHECK(augarch::student_t_cdf(2.570582, 5.0) == Catch::Approx(0.975).margin(2e-6));
  CHECK(augarch::student_t_cdf(-2.570582, 5.0) == Catch::Approx(0.025).margin(2e-6));
  CHECK(augarch::student_t_cdf(1.812461, 10.0) == Catch::Approx(0.95).margin(2e-6));
}

TEST_CASE("kolmogorov tail") {
  CHECK(augarch::kolmogorov_tail(0.0) == 1.0);
  CHECK(augarch::kolmogorov_tail(0.5) == Catch::Approx(0.9639452436).margin(1e-8));
  CHECK(augarch::kolmogorov_tail(1.6276) == Catch::Approx(0.01).margin(2e-4));
  CHECK(augarch::kolmogorov_tail(10.0) < 1e-80);
}

TEST_CASE("clopper-pearson") {
  const augarch::Interval iv = augarch::clopper_pearson(5, 10);
  CHECK(iv.lo == Catch::Approx(0.1871).margin(1e-3));
  CHECK(iv.hi == Catch::Approx(0.8129).margin(1e-3));
  CHECK(augarch::clopper_pearson(0, 100).lo == 0.0);
  CHECK(augarch::clopper_pearson(100, 100).hi == 1.0);
}

TEST_CASE("clopper-pearson coverage on synthetic bernoulli streams") {
  augarch::RandomStream rng(777);
  const double p = 0.3;
  const std::uint64_t n = 200;
  int covered = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (rng.uniform01() <= p) ++k;
    }
    const augarch::Interval iv = augarch::clopper_pearson(k, n);
    if (iv.lo <= p && p <= iv.hi) ++covered;
  }
  CHECK(covered >= 950);
}

TEST_CASE("ks statistic: singleton against uniform") {
  const double d = augarch::ks_statistic({0.5}, uniform_cdf);
  CHECK(d == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("ks statistic equals brute force on random samples") {
  augarch::RandomStream rng(2024);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> sample(200);
    for (double& v : sample) v = rng.uniform01();
    const double fast = augarch::ks_statistic(sample, uniform_cdf);
    const double brute = ks_brute_force(sample, &uniform_cdf);
    REQUIRE(fast == Catch::Approx(brute).margin(1e-15));
  }
}

TEST_CASE("two-sample ks on a small example") {
  CHECK(augarch::two_sample_ks({1.0, 2.0}, {1.5, 2.5}) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y = {0.0, -0.693147, -1.386294, -2.079442};
  const augarch::LinearFit f = augarch::least_squares(x, y);
  CHECK(f.slope == Catch::Approx(-0.693147).margin(1e-5));
  CHECK(f.r_squared == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("spearman on monotone data") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  const std::vector<double> up = {1.0, 5.0, 9.0};
  const std::vector<double> down = {4.0, 2.0, 1.0};
  CHECK(augarch::spearman_rho(x, up) == Catch::Approx(1.0));
  CHECK(augarch::spearman_rho(x, down) == Catch::Approx(-1.0));
}

TEST_CASE("gauss-hermite rule integrates normal moments") {
  const augarch::QuadRule r = augarch::gauss_hermite(256);
  double wsum = 0.0;
  for (double w : r.w) wsum += w;
  CHECK(wsum == Catch::Approx(std::sqrt(augarch::kPi)).epsilon(1e-13));
  CHECK(augarch::expect_standard_normal([](double x) { return x * x; }) ==
        Catch::Approx(1.0).epsilon(1e-12));
  CHECK(augarch::expect_standard_normal([](double x) { return x * x * x * x; }) ==
        Catch::Approx(3.0).epsilon(1e-12));
  // kinked integrand: only algebraic convergence, but still within 0.2%
  CHECK(augarch::expect_standard_normal([](double x) { return std::fabs(x); }) ==
        Catch::Approx(std::sqrt(2.0 / augarch::kPi)).epsilon(2e-3));
}

TEST_CASE("gauss-legendre rule integrates uniform moments") {
  auto sq = [](double x) { return x * x; };
  CHECK(augarch::expect_uniform(sq, -augarch::kSqrt3, augarch::kSqrt3) ==
        Catch::Approx(1.0).epsilon(1e-13));
  auto quart = [](double x) { return x * x * x * x; };
  CHECK(augarch::expect_uniform(quart, -augarch::kSqrt3, augarch::kSqrt3) ==
        Catch::Approx(1.8).epsilon(1e-13));
}

TEST_CASE("gauss-laguerre rule integrates centered-exponential moments") {
  auto id = [](double x) { return x; };
  CHECK(augarch::expect_centered_exponential(id) == Catch::Approx(0.0).margin(1e-10));
  auto sq = [](double x) { return x * x; };
  CHECK(augarch::expect_centered_exponential(sq) == Catch::Approx(1.0).epsilon(1e-10));
  auto quart = [](double x) { return x * x * x * x; };
  CHECK(augarch::expect_centered_exponential(quart) == Catch::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("batch means standard error is positive and sane") {
  augarch::RandomStream rng(99);
  std::vector<double> xs(6400);
  for (double& v : xs) v = rng.normal();
  const double se = augarch::batch_means_se(xs);
  CHECK(se > 0.0);
  CHECK(se < 3.0 / std::sqrt(6400.0));
}
