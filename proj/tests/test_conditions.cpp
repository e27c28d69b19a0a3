#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "augarch/conditions.hpp"
#include "augarch/model.hpp"
#include "augarch/rng.hpp"
#include "augarch/simulate.hpp"
#include "augarch/stats.hpp"

using namespace augarch;

namespace {

ModelSpec garch_018() {
  return make_builtin("garch", {{"omega", 0.1}, {"alpha", 0.1}, {"beta", 0.8}});
}

/// Independent oracle: Simpson rule for E h(Z), Z ~ N(0,1), on [-15, 15].
template <typename Fn>
double simpson_normal(Fn&& h, int intervals = 600000) {
  const double a = -15.0;
  const double b = 15.0;
  const double dx = (b - a) / intervals;
  auto f = [&](double x) { return h(x) * normal_pdf(x); };
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) {
    s += f(a + i * dx) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return s * dx / 3.0;
}

}  // namespace

TEST_CASE("lyapunov exponent closed forms") {
  const ModelSpec half = make_builtin("garch", {{"omega", 1.0}, {"alpha", 0.0}, {"beta", 0.5}});
  CHECK(lyapunov_exponent(half).point == Catch::Approx(-0.6931471805599453).margin(1e-15));
  const ModelSpec big = make_builtin("garch", {{"omega", 1.0}, {"alpha", 0.0}, {"beta", 1.5}});
  CHECK(lyapunov_exponent(big).point == Catch::Approx(0.4054651081081644).margin(1e-15));
  const ModelSpec logc = make_builtin("logc", {{"s", 0.5}, {"d", 1.0}});
  CHECK(lyapunov_exponent(logc).point == Catch::Approx(-1.0).margin(1e-15));
  const ModelSpec iid = make_builtin("iid");
  const MomentEstimate e = lyapunov_exponent(iid);
  CHECK(std::isinf(e.point));
  CHECK(e.point < 0.0);
}

TEST_CASE("lyapunov exponent for garch against a Simpson oracle") {
  const ModelSpec m = make_builtin("garch", {{"omega", 0.1}, {"alpha", 0.1}, {"beta", 0.85}});
  const MomentEstimate est = lyapunov_exponent(m);
  CHECK(est.method == EstimateMethod::quadrature);
  const double oracle = simpson_normal([](double x) { return std::log(0.85 + 0.1 * x * x); });
  CHECK(est.point == Catch::Approx(oracle).margin(1e-7));
  // Jensen: strictly below log E c = log 0.95
  CHECK(est.ci_high < std::log(0.95));
}

TEST_CASE("quadrature bands cover the truth for kinked integrands") {
  const MomentEstimate e = estimate_expectation(
      InnovationDist::standard_normal(), [](double x) { return std::fabs(x); }, CheckBudget{},
      SeedSpec{1, 0, Purpose::conditions_mc}, "E|eps|", 1.0);
  const double truth = std::sqrt(2.0 / kPi);
  CHECK(e.ci_low <= truth);
  CHECK(truth <= e.ci_high);
}

TEST_CASE("stationarity verdicts") {
  CHECK(check_stationarity(garch_018()).verdict == Verdict::holds);
  const ModelSpec igarch = make_builtin("igarch", {{"omega", 0.1}, {"alpha", 0.2}});
  CHECK(check_stationarity(igarch).verdict == Verdict::holds);
  const ModelSpec degenerate =
      make_builtin("garch", {{"omega", 0.1}, {"alpha", 0.0}, {"beta", 1.0}});
  CHECK(check_stationarity(degenerate).verdict == Verdict::fails);
  const ModelSpec iid = make_builtin("iid");
  CHECK(check_stationarity(iid).verdict == Verdict::holds);
  CHECK(check_log_c_window(iid).verdict == Verdict::fails);
  CHECK(check_log_c_window(garch_018()).verdict == Verdict::holds);
}

TEST_CASE("lambda moment closed forms and verdicts") {
  const ModelSpec m = garch_018();
  const ConditionReport r1 = check_lambda_moment(m, 1.0);
  REQUIRE(r1.verdict == Verdict::holds);
  REQUIRE(r1.evidence[0].method == EstimateMethod::closed_form);
  CHECK(r1.evidence[0].point == Catch::Approx(0.9).margin(1e-15));

  const ModelSpec boundary =
      make_builtin("garch", {{"omega", 0.1}, {"alpha", 0.2}, {"beta", 0.8}});
  const ConditionReport rb = check_lambda_moment(boundary, 1.0);
  CHECK(rb.verdict == Verdict::fails);
  CHECK(rb.converse_applies);

  const ConditionReport r2 = check_lambda_moment(m, 2.0);
  REQUIRE(r2.verdict == Verdict::holds);
  CHECK(r2.evidence[0].point == Catch::Approx(0.83).margin(1e-15));
}

TEST_CASE("E c^2 closed form matches a large monte carlo oracle") {
  const ModelSpec m = garch_018();
  RandomStream rng(SeedSpec{1001, 0, Purpose::conditions_mc});
  const std::uint64_t n = 10000000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double c = m.c_at(m.innovation.sample(rng));
    sum += c * c;
    sumsq += c * c * c * c;
  }
  const double mean = sum / static_cast<double>(n);
  const double se = std::sqrt((sumsq / static_cast<double>(n) - mean * mean) /
                              static_cast<double>(n));
  CHECK(std::fabs(mean - 0.83) < 4.0 * se);
}

TEST_CASE("power moment verdicts: the igarch separation") {
  const ModelSpec garch = garch_018();
  CHECK(check_power_moment(garch, 1.0).verdict == Verdict::holds);
  CHECK(check_power_moment(garch, 2.0).verdict == Verdict::holds);

  const ModelSpec igarch = make_builtin("igarch", {{"omega", 0.1}, {"alpha", 0.2}});
  CHECK(check_stationarity(igarch).verdict == Verdict::holds);
  const ConditionReport r = check_power_moment(igarch, 1.0);
  CHECK(r.verdict == Verdict::fails);
  CHECK(r.converse_applies);

  const ModelSpec eg = make_builtin(
      "egarch", {{"omega", -0.1}, {"beta", 0.9}, {"alpha", 0.2}, {"gamma", -0.1}});
  CHECK_THROWS_AS(check_power_moment(eg, 1.0), std::invalid_argument);
}

TEST_CASE("exp moment verdicts for exponential links") {
  const ModelSpec eg = make_builtin(
      "egarch", {{"omega", -0.1}, {"beta", 0.9}, {"alpha", 0.2}, {"gamma", -0.1}});
  const ConditionReport ok = check_exp_moment(eg, 1.0);
  CHECK(ok.verdict == Verdict::holds);
  CHECK(ok.evidence[0].point == Catch::Approx(0.9).margin(1e-15));

  const ModelSpec boundary = make_builtin(
      "egarch", {{"omega", -0.1}, {"beta", 1.0}, {"alpha", 0.2}, {"gamma", -0.1}});
  CHECK(check_exp_moment(boundary, 1.0).verdict == Verdict::fails);

  const ModelSpec heavy = make_builtin(
      "egarch", {{"omega", -0.1}, {"beta", 0.9}, {"alpha", 0.2}, {"gamma", -0.1}},
      InnovationDist::student_t(5.0));
  const ConditionReport ht = check_exp_moment(heavy, 1.0);
  CHECK(ht.verdict == Verdict::fails);
  CHECK(ht.note.find("exp") != std::string::npos);

  const ModelSpec garch = garch_018();
  CHECK_THROWS_AS(check_exp_moment(garch, 1.0), std::invalid_argument);
}

TEST_CASE("exp moment divergence shown by the tail integral oracle") {
  // E exp(|g(eps)|) with g linear and student-t eps: the tail integral of
  // exp(|g(x)|) * t5-density over [T, 2T] must be increasing in T.
  const ModelSpec heavy = make_builtin(
      "egarch", {{"omega", -0.1}, {"beta", 0.9}, {"alpha", 0.2}, {"gamma", -0.1}},
      InnovationDist::student_t(5.0));
  auto t5_density = [](double x) {
    const double scale = std::sqrt(3.0 / 5.0);  // variance normalization
    const double z = x / scale;
    const double c = std::exp(std::lgamma(3.0) - std::lgamma(2.5) - 0.5 * std::log(5.0 * kPi));
    return c * std::pow(1.0 + z * z / 5.0, -3.0) / scale;
  };
  auto segment = [&](double t0, double t1) {
    const int steps = 20000;
    const double dx = (t1 - t0) / steps;
    double s = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double x = t0 + i * dx;
      const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
      s += w * std::exp(std::fabs(heavy.g_at(x))) * t5_density(x) * dx;
    }
    return s;
  };
  // exp(0.1 x) beats the x^{-6} tail once x > 60; increments then blow up
  const double s1 = segment(50.0, 100.0);
  const double s2 = segment(100.0, 200.0);
  const double s3 = segment(200.0, 400.0);
  CHECK(s2 > 10.0 * s1);
  CHECK(s3 > 10.0 * s2);
}

TEST_CASE("log-moment regime split for the heavy-tailed logc model") {
  const ModelSpec logc = make_builtin("logc", {{"s", 0.5}, {"d", 1.0}});
  for (double mu : {1.0, 2.0, 3.0}) {
    const LogMomentReports r = check_log_moments(logc, mu);
    INFO("mu = " << mu);
    CHECK(r.eq21.verdict == Verdict::fails);
    CHECK(r.eq20.verdict == Verdict::holds);
  }
  CHECK(check_log_moments(logc, 4.5).eq20.verdict == Verdict::holds);
  CHECK(check_log_moments(logc, 6.0).eq20.verdict == Verdict::fails);

  const LogMomentReports g = check_log_moments(garch_018(), 1.0);
  CHECK(g.eq21.verdict == Verdict::holds);
  CHECK(g.eq20.verdict == Verdict::holds);

  const ModelSpec iid = make_builtin("iid");
  const LogMomentReports z = check_log_moments(iid, 3.0);
  CHECK(z.eq20.verdict == Verdict::fails);  // |log 0| = inf convention
  CHECK(z.eq21.verdict == Verdict::holds);
}

TEST_CASE("monte carlo estimate of an infinite moment is unstable in n") {
  // E c^3 = inf for the logc model; the fixed-seed estimate grows with the
  // sample size by orders of magnitude.
  const ModelSpec logc = make_builtin("logc", {{"s", 0.5}, {"d", 1.0}});
  auto estimate = [&](std::uint64_t n, std::uint64_t salt) {
    RandomStream rng(SeedSpec{555, salt, Purpose::conditions_mc});
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double c = logc.c_at(logc.innovation.sample(rng));
      sum += c * c * c;
    }
    return sum / static_cast<double>(n);
  };
  const double small = estimate(10000, 1);
  const double large = estimate(1000000, 2);
  CHECK(large > 5.0 * small);
}

TEST_CASE("nonnegativity checks") {
  CHECK(check_nonnegativity(garch_018()).verdict == Verdict::holds);

  // The negative-c remark model: c concentrated inside [-1/2, 0].
  ModelSpec neg;
  neg.c = CoeffExpr{-0.2, 0.1, 0.0, 0.0, 0.0};
  neg.g = CoeffExpr{1.0, 0.0, 0.0, 0.0, 0.0};
  neg.link = LinkFunction::polynomial(1.0);
  neg.innovation = InnovationDist::uniform();
  neg.finalize_nonneg();
  CHECK(check_nonnegativity(neg).verdict == Verdict::fails);

  ModelSpec signg;
  signg.c = CoeffExpr{0.5, 0.0, 0.0, 0.0, 0.0};
  signg.g = CoeffExpr{0.0, 1.0, 0.0, 0.0, 0.0};
  signg.link = LinkFunction::polynomial(1.0);
  signg.finalize_nonneg();
  CHECK(check_nonnegativity(signg).verdict == Verdict::fails);

  // exact over a bounded support even without the structural k-pattern
  ModelSpec shifted;
  shifted.c = CoeffExpr{0.5, 0.1, 0.0, 0.0, 0.0};  // 0.5 + 0.1 x >= 0.5 - 0.1*sqrt(3) > 0
  shifted.g = CoeffExpr{1.0, 0.0, 0.0, 0.0, 0.0};
  shifted.innovation = InnovationDist::uniform();
  shifted.finalize_nonneg();
  CHECK(check_nonnegativity(shifted).verdict == Verdict::holds);
}

TEST_CASE("sigma inverse moment routes") {
  const CheckBudget budget;
  const SeedSpec seed{77, 0, Purpose::conditions_mc};
  auto dummy_sampler = [](RandomStream&) { return 1.0; };

  const ConditionReport garch_r =
      check_sigma_inverse_moment(garch_018(), 1.0, budget, seed, dummy_sampler);
  CHECK(garch_r.verdict == Verdict::holds);
  REQUIRE(garch_r.theta.has_value());
  CHECK(*garch_r.theta == 1.0);

  const ModelSpec eg = make_builtin(
      "egarch", {{"omega", -0.1}, {"beta", 0.9}, {"alpha", 0.2}, {"gamma", -0.1}});
  CHECK(check_sigma_inverse_moment(eg, 1.0, budget, seed, dummy_sampler).verdict ==
        Verdict::holds);

  // polynomial link with ess inf g = 0: no certificate, Monte Carlo evidence
  ModelSpec gmin0;
  gmin0.c = CoeffExpr{0.5, 0.0, 0.0, 0.0, 0.0};
  gmin0.g = CoeffExpr{0.0, 0.0, 1.0, 0.0, 0.0};  // g = eps^2
  gmin0.link = LinkFunction::polynomial(1.0);
  gmin0.finalize_nonneg();
  auto sigma_sampler = [&](RandomStream& rng) {
    std::vector<double> window(64);
    for (double& v : window) v = gmin0.innovation.sample(rng);
    return truncated_series(gmin0, window, 64).state;
  };
  const ConditionReport r = check_sigma_inverse_moment(gmin0, 1.0, budget, seed, sigma_sampler);
  CHECK(r.verdict == Verdict::inconclusive);
  REQUIRE(!r.evidence.empty());
  CHECK(r.evidence[0].point > 0.0);
}

TEST_CASE("contraction certificates") {
  const auto garch_cert = contraction_certificate(garch_018());
  REQUIRE(garch_cert.has_value());
  CHECK(garch_cert->rho == Catch::Approx(0.9).margin(1e-12));

  const ModelSpec igarch = make_builtin("igarch", {{"omega", 0.1}, {"alpha", 0.2}});
  const auto ig_cert = contraction_certificate(igarch);
  REQUIRE(ig_cert.has_value());
  CHECK(ig_cert->rho < 1.0);
  CHECK(ig_cert->mu < 1.0);

  const ModelSpec logc = make_builtin("logc", {{"s", 0.5}, {"d", 1.0}});
  CHECK(!contraction_certificate(logc).has_value());
}

TEST_CASE("lambda moment verdict is monotone in mu") {
  const ModelSpec m = garch_018();
  bool holds_above = false;
  for (double mu : {2.0, 1.5, 1.0, 0.5}) {  // descending
    const Verdict v = check_lambda_moment(m, mu).verdict;
    if (holds_above) REQUIRE(v == Verdict::holds);
    if (v == Verdict::holds) holds_above = true;
  }
  CHECK(holds_above);
}

TEST_CASE("jensen consistency of the lyapunov estimate") {
  for (const char* fam : {"garch", "igarch"}) {
    const ModelSpec m = fam == std::string("garch")
                            ? garch_018()
                            : make_builtin("igarch", {{"omega", 0.1}, {"alpha", 0.2}});
    const MomentEstimate lyap = lyapunov_exponent(m);
    const MomentEstimate ec = coeff_abs_moment(m.c, m.innovation, 1.0, CheckBudget{},
                                               SeedSpec{1, 0, Purpose::conditions_mc}, "c");
    CHECK(lyap.point <= std::log(ec.point) + 1e-9);
  }
}

TEST_CASE("gates") {
  std::vector<ConditionReport> reports(2);
  reports[0].condition = Condition::EQ5;
  reports[0].verdict = Verdict::holds;
  reports[1].condition = Condition::EQ10;
  reports[1].verdict = Verdict::holds;
  CHECK(make_gate(reports).status == GateStatus::pass);
  reports[1].verdict = Verdict::inconclusive;
  CHECK(make_gate(reports).status == GateStatus::warn);
  reports[1].verdict = Verdict::fails;
  const Gate g = make_gate(reports);
  CHECK(g.status == GateStatus::refuse);
  CHECK(g.message.find("EQ10") != std::string::npos);
  CHECK_THROWS_AS(enforce_gate(g), GateRefusal);
}
