#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "augarch/dependence.hpp"
#include "augarch/model.hpp"
#include "augarch/rng.hpp"
#include "augarch/stats.hpp"

using namespace augarch;

namespace {

ModelSpec garch_018() {
  return make_builtin("garch", {{"omega", 0.1}, {"alpha", 0.1}, {"beta", 0.8}});
}

ModelSpec const_half() {
  ModelSpec m;
  m.c = CoeffExpr{0.5, 0.0, 0.0, 0.0, 0.0};
  m.g = CoeffExpr{1.0, 0.0, 0.0, 0.0, 0.0};
  m.link = LinkFunction::polynomial(1.0);
  m.finalize_nonneg();
  return m;
}

}  // namespace

TEST_CASE("fit_geometric_decay on exact and constant inputs") {
  const std::vector<std::int64_t> ms = {1, 2, 3, 4};
  const std::vector<double> geo = {1.0, 0.5, 0.25, 0.125};
  const DecayFit f = fit_geometric_decay(ms, geo);
  CHECK(f.rate == Catch::Approx(0.5).margin(1e-12));
  CHECK(f.r_squared == Catch::Approx(1.0).margin(1e-12));
  CHECK(f.contracting);

  const std::vector<double> flat = {1.0, 1.0, 1.0, 1.0};
  const DecayFit fc = fit_geometric_decay(ms, flat);
  CHECK(fc.rate == Catch::Approx(1.0).margin(1e-12));
  CHECK(!fc.contracting);
  CHECK(!fc.degenerate);

  const std::vector<double> zeros = {0.0, 0.0, 0.0, 0.0};
  CHECK(fit_geometric_decay(ms, zeros).degenerate);
}

TEST_CASE("fit_geometric_decay recovers the rate from noisy synthetic data") {
  RandomStream rng(SeedSpec{31, 0, Purpose::generic});
  const double truth = 0.7;
  std::vector<std::int64_t> ms;
  std::vector<double> errors;
  for (std::int64_t m = 1; m <= 12; ++m) {
    ms.push_back(m);
    const double noise = 1.0 + 0.05 * rng.uniform_sym();
    errors.push_back(2.0 * std::pow(truth, static_cast<double>(m)) * noise);
  }
  const DecayFit f = fit_geometric_decay(ms, errors);
  CHECK(f.rate_band.lo <= truth);
  CHECK(truth <= f.rate_band.hi);
  CHECK(f.r_squared > 0.99);
}

TEST_CASE("l2 coupling error vanishes when c = 0") {
  const DecayFit f = l2_coupling_error(make_builtin("iid"), Transform::power_abs(1.0),
                                       {1, 2, 3, 4}, 2000, 8,
                                       SeedSpec{32, 0, Purpose::l2_reps});
  for (double e : f.errors) CHECK(e == 0.0);
  CHECK(f.degenerate);
}

TEST_CASE("l2 coupling error decays at the predicted rates") {
  SECTION("constant c = 0.5") {
    const DecayFit f = l2_coupling_error(const_half(), Transform::power_abs(1.0),
                                         {1, 2, 3, 4, 5, 6, 7, 8, 10, 12}, 20000, 64,
                                         SeedSpec{33, 0, Purpose::l2_reps});
    CHECK(!f.degenerate);
    CHECK(f.rate <= 0.5 + (f.rate_band.hi - f.rate_band.lo));
    CHECK(f.r_squared > 0.95);
  }
  SECTION("garch(0.1, 0.1, 0.8), f = |x|") {
    const DecayFit f = l2_coupling_error(garch_018(), Transform::power_abs(1.0),
                                         {1, 2, 4, 6, 8, 12, 16, 20, 24}, 20000, 263,
                                         SeedSpec{34, 0, Purpose::l2_reps});
    CHECK(!f.degenerate);
    CHECK(f.rate <= std::sqrt(0.9) + (f.rate_band.hi - f.rate_band.lo));
    CHECK(f.contracting);
    CHECK(f.r_squared > 0.9);
  }
}

TEST_CASE("coupling tails vanish when c = 0") {
  const CouplingTailReport r =
      coupling_tail(make_builtin("iid"), Transform::power_abs(1.0), 0.0, {1, 2, 3}, 2000, 8,
                    SeedSpec{35, 0, Purpose::tails});
  for (double p : r.lambda_tail) CHECK(p == 0.0);
  CHECK(r.regime == TailRegime::inconclusive);
  CHECK(r.note.find("exact") != std::string::npos);
}

TEST_CASE("tail regime contest separates the exponential and polynomial regimes") {
  const std::vector<std::int64_t> ms = {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48};
  const CouplingTailReport garch_rep =
      coupling_tail(garch_018(), Transform::power_abs(1.0), 0.0, ms, 30000, 263,
                    SeedSpec{36, 0, Purpose::tails});
  CHECK(garch_rep.regime == TailRegime::exponential);
  CHECK(garch_rep.alpha > 0.0);

  const ModelSpec logc = make_builtin("logc", {{"s", 0.5}, {"d", 1.0}});
  const CouplingTailReport logc_rep =
      coupling_tail(logc, Transform::power_abs(1.0), 0.0, ms, 30000, 512,
                    SeedSpec{37, 0, Purpose::tails});
  CHECK(logc_rep.regime == TailRegime::polynomial);

  // T_m diagnostics: mean near 0, variance growing linearly in m
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    CHECK(garch_rep.tm_var[i] < garch_rep.tm_var[i + 1]);
  }
}

TEST_CASE("tail estimates are non-increasing in m up to band slack") {
  const std::vector<std::int64_t> ms = {1, 2, 4, 8, 16, 32};
  const CouplingTailReport r =
      coupling_tail(garch_018(), Transform::power_abs(1.0), 0.0, ms, 20000, 263,
                    SeedSpec{38, 0, Purpose::tails});
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    CHECK(r.lambda_tail[i + 1] <= r.lambda_hi[i]);
    CHECK(r.eta_tail[i + 1] <= r.eta_hi[i]);
  }
}

TEST_CASE("autocovariance of an iid series") {
  const AutocovarianceTable t = autocovariance(make_builtin("iid"), Transform::power_abs(1.0),
                                               10, 100000, 1, SeedSpec{39, 0, Purpose::path});
  for (std::size_t k = 1; k < t.gamma.size(); ++k) {
    CHECK(std::fabs(t.gamma[k]) < 4.0 * t.se[k]);
  }
  CHECK(t.gamma[0] > 0.0);
  // abs partial sums are nondecreasing
  for (std::size_t k = 1; k < t.abs_partial_sum.size(); ++k) {
    CHECK(t.abs_partial_sum[k] >= t.abs_partial_sum[k - 1]);
  }
}

TEST_CASE("gamma(0) equals the mean-square deviation by definition") {
  RandomStream rng(SeedSpec{40, 0, Purpose::generic});
  std::vector<double> xs(5000);
  for (double& v : xs) v = rng.normal() + 0.3;
  const AutocovarianceTable t = autocovariance_from_series(xs, 5);
  const double mean = mean_of(xs);
  double g0 = 0.0;
  for (double v : xs) g0 += (v - mean) * (v - mean);
  g0 /= static_cast<double>(xs.size());
  CHECK(t.gamma[0] == Catch::Approx(g0).epsilon(1e-12));
}

TEST_CASE("squared-garch autocovariance decays like the ARMA(1,1) oracle") {
  // For garch(omega, alpha, beta) the autocorrelation of y^2 is
  // rho(k) = rho(1) (alpha+beta)^{k-1} with
  // rho(1) = alpha (1 - alpha beta - beta^2) / (1 - 2 alpha beta - beta^2).
  const ModelSpec m = make_builtin("garch", {{"omega", 0.1}, {"alpha", 0.1}, {"beta", 0.85}});
  const AutocovarianceTable t = autocovariance(m, Transform::power_abs(2.0), 12, 2000000, 300,
                                               SeedSpec{41, 0, Purpose::path});
  const double alpha = 0.1;
  const double beta = 0.85;
  const double rho1 = alpha * (1.0 - alpha * beta - beta * beta) /
                      (1.0 - 2.0 * alpha * beta - beta * beta);
  CHECK(t.gamma[1] / t.gamma[0] == Catch::Approx(rho1).margin(0.02));
  std::vector<double> lags;
  std::vector<double> logg;
  for (std::size_t k = 1; k <= 10; ++k) {
    if (t.gamma[k] > 0.0) {
      lags.push_back(static_cast<double>(k));
      logg.push_back(std::log(t.gamma[k]));
    }
  }
  REQUIRE(lags.size() >= 8);
  const LinearFit lf = least_squares(lags, logg);
  CHECK(std::exp(lf.slope) == Catch::Approx(0.95).margin(0.03));
}

TEST_CASE("covariance bound: |gamma(k)| <= 4 ||eta||_2 l2error(k-1) within errors") {
  const ModelSpec m = garch_018();
  const Transform f = Transform::power_abs(1.0);
  std::vector<std::int64_t> ms;
  for (std::int64_t j = 1; j <= 7; ++j) ms.push_back(j);
  const DecayFit fit =
      l2_coupling_error(m, f, ms, 20000, 263, SeedSpec{42, 0, Purpose::l2_reps});
  const AutocovarianceTable t =
      autocovariance(m, f, 8, 400000, 263, SeedSpec{42, 0, Purpose::path});
  // k = 1 pairs with m = 0, the empty truncation: l2 error is ||eta||_2 itself
  CHECK(std::fabs(t.gamma[1]) <= 4.0 * fit.eta_l2 * fit.eta_l2 + 5.0 * t.se[1]);
  for (std::size_t k = 2; k <= 8; ++k) {
    const double l2_err = fit.errors[k - 2];  // entry for m = k - 1
    const double floor_err = fit.noise_floor[k - 2];
    const double bound = 4.0 * fit.eta_l2 * l2_err;
    const double slack = 5.0 * std::sqrt(t.se[k] * t.se[k] +
                                         16.0 * fit.eta_l2 * fit.eta_l2 * floor_err * floor_err);
    INFO("k = " << k);
    CHECK(std::fabs(t.gamma[k]) <= bound + slack);
  }
}

TEST_CASE("summability certificates") {
  SECTION("iid: certified with zero tail") {
    const AutocovarianceTable t = autocovariance(make_builtin("iid"), Transform::power_abs(1.0),
                                                 5, 50000, 1, SeedSpec{43, 0, Purpose::path});
    const DecayFit f = l2_coupling_error(make_builtin("iid"), Transform::power_abs(1.0),
                                         {1, 2, 3}, 2000, 8, SeedSpec{43, 1, Purpose::l2_reps});
    const SummabilityReport r = summability_check(t, f);
    CHECK(r.certified);
    CHECK(r.tail_bound == 0.0);
  }
  SECTION("garch: certified with an explicit geometric bound") {
    const ModelSpec m = garch_018();
    const Transform f = Transform::power_abs(1.0);
    const DecayFit fit = l2_coupling_error(m, f, {1, 2, 4, 6, 8, 12, 16, 20}, 20000, 263,
                                           SeedSpec{44, 0, Purpose::l2_reps});
    const AutocovarianceTable t =
        autocovariance(m, f, 20, 200000, 263, SeedSpec{44, 0, Purpose::path});
    const SummabilityReport r = summability_check(t, fit);
    CHECK(r.certified);
    CHECK(r.tail_bound > 0.0);
    CHECK(r.total_bound >= r.partial_sum);
  }
  SECTION("rate at 1 cannot certify") {
    DecayFit flat;
    flat.rate = 1.0;
    flat.errors = {1.0, 1.0};
    AutocovarianceTable t;
    t.abs_partial_sum = {0.0, 0.5};
    t.lags = {0, 1};
    t.second_moment = 1.0;
    CHECK(!summability_check(t, flat).certified);
  }
}

TEST_CASE("cross-lemma consistency: EQ21 models have geometric L2 decay and exponential tails") {
  const ModelSpec m = garch_018();  // EQ21 holds at mu = 1
  const DecayFit fit = l2_coupling_error(m, Transform::power_abs(1.0),
                                         {1, 2, 4, 6, 8, 12, 16, 20, 24}, 20000, 263,
                                         SeedSpec{45, 0, Purpose::l2_reps});
  CHECK(fit.contracting);
  const CouplingTailReport tails =
      coupling_tail(m, Transform::power_abs(1.0), 0.0, {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48},
                    30000, 263, SeedSpec{45, 1, Purpose::tails});
  CHECK(tails.regime == TailRegime::exponential);
}
