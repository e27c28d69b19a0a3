#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "augarch/model.hpp"
#include "augarch/quadrature.hpp"
#include "augarch/rng.hpp"

namespace augarch {

enum class Condition { EQ5, EQ8, EQ9, EQ10, EQ11, EQ12, EQ19, EQ20, EQ21, EQ27 };

inline std::string condition_name(Condition c) {
  switch (c) {
    case Condition::EQ5:
      return "EQ5";
    case Condition::EQ8:
      return "EQ8";
    case Condition::EQ9:
      return "EQ9";
    case Condition::EQ10:
      return "EQ10";
    case Condition::EQ11:
      return "EQ11";
    case Condition::EQ12:
      return "EQ12";
    case Condition::EQ19:
      return "EQ19";
    case Condition::EQ20:
      return "EQ20";
    case Condition::EQ21:
      return "EQ21";
    case Condition::EQ27:
      return "EQ27";
  }
  return "?";
}

enum class Verdict { holds, fails, inconclusive };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

enum class EstimateMethod { closed_form, quadrature, monte_carlo };

inline std::string method_name(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::closed_form:
      return "closed-form";
    case EstimateMethod::quadrature:
      return "quadrature";
    case EstimateMethod::monte_carlo:
      return "monte-carlo";
  }
  return "?";
}

/// One estimated (or exact) moment with a 95% band.
struct MomentEstimate {
  std::string quantity;
  double order = 0.0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  EstimateMethod method = EstimateMethod::closed_form;
  std::uint64_t samples = 0;
};

/// Verdict plus evidence for one named condition of the paper.
struct ConditionReport {
  Condition condition = Condition::EQ5;
  Verdict verdict = Verdict::inconclusive;
  std::vector<MomentEstimate> evidence;
  std::optional<double> theta;
  bool converse_applies = false;
  std::string note;
};

struct CheckBudget {
  int quad_nodes = 256;
  std::uint64_t mc_samples = 1000000;
};

// ---------------------------------------------------------------------------
// Expectation engine
// ---------------------------------------------------------------------------

namespace detail {

inline MomentEstimate exact_estimate(std::string quantity, double order, double value) {
  MomentEstimate e;
  e.quantity = std::move(quantity);
  e.order = order;
  e.point = value;
  e.ci_low = value;
  e.ci_high = value;
  e.method = EstimateMethod::closed_form;
  return e;
}

template <typename Fn>
double quad_expect(const InnovationDist& innov, Fn&& h, int nodes) {
  switch (innov.kind) {
    case InnovationKind::standard_normal:
      return expect_standard_normal(h, nodes);
    case InnovationKind::uniform:
      return expect_uniform(h, -kSqrt3, kSqrt3, nodes);
    case InnovationKind::centered_exponential:
      return expect_centered_exponential(h, nodes);
    default:
      throw std::logic_error("quad_expect: no rule for this innovation");
  }
}

}  // namespace detail

/// E h(eps). Quadrature for normal / uniform / centered-exponential, exact
/// two-atom average for two-point, Monte Carlo for student-t. The quadrature
/// band is an observed refinement error (rule at n vs n/2 nodes), so boundary
/// verdicts stay honest for kinked integrands.
template <typename Fn>
MomentEstimate estimate_expectation(const InnovationDist& innov, Fn&& h, const CheckBudget& budget,
                                    const SeedSpec& seed, std::string quantity, double order = 0.0) {
  if (innov.kind == InnovationKind::two_point) {
    return detail::exact_estimate(std::move(quantity), order, 0.5 * (h(-1.0) + h(1.0)));
  }
  if (innov.kind == InnovationKind::student_t) {
    RandomStream rng(seed);
    const std::uint64_t n = budget.mc_samples;
    double sum = 0.0;
    double sumsq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double v = h(innov.sample(rng));
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(n));
    MomentEstimate e;
    e.quantity = std::move(quantity);
    e.order = order;
    e.point = mean;
    e.ci_low = mean - 1.96 * se;
    e.ci_high = mean + 1.96 * se;
    e.method = EstimateMethod::monte_carlo;
    e.samples = n;
    return e;
  }
  const int nodes = budget.quad_nodes;
  const double fine = detail::quad_expect(innov, h, nodes);
  const double coarse = detail::quad_expect(innov, h, std::max(8, nodes / 2));
  const double band = 4.0 * std::fabs(fine - coarse) + 1e-12 * (1.0 + std::fabs(fine));
  MomentEstimate e;
  e.quantity = std::move(quantity);
  e.order = order;
  e.point = fine;
  e.ci_low = fine - band;
  e.ci_high = fine + band;
  e.method = EstimateMethod::quadrature;
  return e;
}

// ---------------------------------------------------------------------------
// Structural finiteness analysis
// ---------------------------------------------------------------------------

/// Is E |e(eps)|^mu finite? Exact for the expressible coefficient forms.
inline bool abs_moment_finite(const CoeffFn& fn, const InnovationDist& innov, double mu) {
  if (innov.bounded_support()) return true;
  const Growth gr = coeff_growth(fn);
  if (gr.log_affine) {
    // |e|^mu = exp(mu (s x - d)); one-sided exponential in x.
    return innov.has_exp_moment(mu * std::fabs(gr.log_scale), 1.0);
  }
  auto side_ok = [&](const GrowthSide& s) {
    return s.degree == 0.0 || innov.has_abs_moment(mu * s.degree);
  };
  return side_ok(gr.pos) && side_ok(gr.neg);
}

/// Is E exp(t |e(eps)|) finite? (t > 0)
inline bool abs_exp_moment_finite(const CoeffFn& fn, const InnovationDist& innov, double t) {
  if (t <= 0.0) return true;
  if (innov.bounded_support()) return true;
  const Growth gr = coeff_growth(fn);
  if (gr.log_affine) return false;  // exp(t exp(s x)) against an unbounded law
  auto side_ok = [&](const GrowthSide& s) {
    return s.degree == 0.0 || innov.has_exp_moment(t * s.coef, s.degree);
  };
  return side_ok(gr.pos) && side_ok(gr.neg);
}

/// P(e(eps) = 0) > 0? (exact for atoms / constants; zero for continuous laws
/// unless e is identically zero)
inline bool has_zero_atom(const CoeffFn& fn, const InnovationDist& innov) {
  if (is_constant(fn)) return constant_value(fn) == 0.0;
  if (innov.kind == InnovationKind::two_point) {
    return eval_coeff(fn, -1.0) == 0.0 || eval_coeff(fn, 1.0) == 0.0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Moment estimates of coefficient functions
// ---------------------------------------------------------------------------

/// E |coeff(eps)|^mu with closed forms where the basis allows them.
inline MomentEstimate coeff_abs_moment(const CoeffFn& fn, const InnovationDist& innov, double mu,
                                       const CheckBudget& budget, const SeedSpec& seed,
                                       const std::string& label) {
  const std::string quantity = "E|" + label + "(eps)|^mu";
  if (!abs_moment_finite(fn, innov, mu)) {
    MomentEstimate e = detail::exact_estimate(quantity, mu, kInf);
    e.ci_high = kInf;
    return e;
  }
  if (is_constant(fn)) {
    return detail::exact_estimate(quantity, mu, std::pow(std::fabs(constant_value(fn)), mu));
  }
  if (const auto* ea = std::get_if<ExpAffineExpr>(&fn);
      ea != nullptr && innov.kind == InnovationKind::standard_normal) {
    // E exp(mu(s eps - d)) = exp(mu^2 s^2 / 2 - mu d)
    return detail::exact_estimate(quantity, mu,
                                  std::exp(0.5 * mu * mu * ea->scale * ea->scale - mu * ea->shift));
  }
  if (const auto* b = std::get_if<CoeffExpr>(&fn)) {
    const InnovationMoments mom = innov.moments();
    if (mu == 1.0 && nonneg_structural(fn)) {
      const double v = b->k0 + b->k2 * mom.m2 + b->k3 * mom.abs1 + b->k4 * mom.m2_neg;
      return detail::exact_estimate(quantity, mu, v);
    }
    if (mu == 2.0 && b->k1 == 0.0 && b->k3 == 0.0 && std::isfinite(mom.m4)) {
      // (k0 + k2 x^2 + k4 x^2 1{x<0})^2 expanded against tabulated moments
      const double v = b->k0 * b->k0 + b->k2 * b->k2 * mom.m4 + b->k4 * b->k4 * mom.m4_neg +
                       2.0 * b->k0 * b->k2 * mom.m2 + 2.0 * b->k0 * b->k4 * mom.m2_neg +
                       2.0 * b->k2 * b->k4 * mom.m4_neg;
      return detail::exact_estimate(quantity, mu, v);
    }
  }
  return estimate_expectation(
      innov, [&](double x) { return std::pow(std::fabs(eval_coeff(fn, x)), mu); }, budget, seed,
      quantity, mu);
}

/// E exp(t |coeff(eps)|), finite cases only; log-space quadrature to dodge
/// intermediate overflow.
inline MomentEstimate coeff_exp_moment(const CoeffFn& fn, const InnovationDist& innov, double t,
                                       const CheckBudget& budget, const SeedSpec& seed,
                                       const std::string& label) {
  const std::string quantity = "E exp(t|" + label + "(eps)|)";
  if (!abs_exp_moment_finite(fn, innov, t)) {
    MomentEstimate e = detail::exact_estimate(quantity, t, kInf);
    e.ci_high = kInf;
    return e;
  }
  if (is_constant(fn)) {
    return detail::exact_estimate(quantity, t, std::exp(t * std::fabs(constant_value(fn))));
  }
  auto h = [&](double x) { return std::exp(t * std::fabs(eval_coeff(fn, x))); };
  return estimate_expectation(innov, h, budget, seed, quantity, t);
}

// ---------------------------------------------------------------------------
// Named condition checks
// ---------------------------------------------------------------------------

/// E log|c(eps)|, Eq (5) / Eq (19). Returns -inf when P(c(eps) = 0) > 0.
inline MomentEstimate lyapunov_exponent(const ModelSpec& model, const CheckBudget& budget = {},
                                        const SeedSpec& seed = {}) {
  const std::string quantity = "E log|c(eps)|";
  if (has_zero_atom(model.c, model.innovation)) {
    MomentEstimate e = detail::exact_estimate(quantity, 0.0, -kInf);
    e.ci_low = -kInf;
    return e;
  }
  if (is_constant(model.c)) {
    return detail::exact_estimate(quantity, 0.0, std::log(std::fabs(constant_value(model.c))));
  }
  if (const auto* ea = std::get_if<ExpAffineExpr>(&model.c)) {
    // log c = s eps - d and every innovation law here has mean zero.
    return detail::exact_estimate(quantity, 0.0, -ea->shift);
  }
  auto h = [&](double x) {
    const double v = std::fabs(eval_coeff(model.c, x));
    return std::log(std::max(v, 1e-300));
  };
  return estimate_expectation(model.innovation, h, budget, seed.with(11, Purpose::conditions_mc),
                              quantity);
}

namespace detail {

inline MomentEstimate log_plus_moment(const CoeffFn& fn, const InnovationDist& innov, double mu,
                                      const CheckBudget& budget, const SeedSpec& seed,
                                      const std::string& label, std::uint64_t salt) {
  auto h = [&](double x) {
    const double v = std::fabs(eval_coeff(fn, x));
    const double lp = v > 1.0 ? std::log(v) : 0.0;
    return mu == 1.0 ? lp : std::pow(lp, mu);
  };
  return estimate_expectation(innov, h, budget, seed.with(salt, Purpose::conditions_mc),
                              "E(log+|" + label + "(eps)|)^mu", mu);
}

}  // namespace detail

/// Theorem 1 gate: E log|c| < 0 with finite log+ moments (Eq 5).
inline ConditionReport check_stationarity(const ModelSpec& model, const CheckBudget& budget = {},
                                          const SeedSpec& seed = {}) {
  ConditionReport r;
  r.condition = Condition::EQ5;
  MomentEstimate lyap = lyapunov_exponent(model, budget, seed);
  const MomentEstimate logc = detail::log_plus_moment(model.c, model.innovation, 1.0, budget, seed,
                                                      "c", 12);
  const MomentEstimate logg = detail::log_plus_moment(model.g, model.innovation, 1.0, budget, seed,
                                                      "g", 13);
  r.evidence = {lyap, logc, logg};
  // log+|coeff| of every expressible form grows at most linearly in |eps|,
  // so the log+ moments are finite for every innovation law here.
  if (lyap.ci_high < 0.0) {
    r.verdict = Verdict::holds;
  } else if (lyap.ci_low >= 0.0) {
    r.verdict = Verdict::fails;
  } else {
    r.verdict = Verdict::inconclusive;
  }
  if (std::isinf(lyap.point) && lyap.point < 0.0) {
    r.note = "E log|c| = -inf (P(c(eps)=0) > 0): series terminates, EQ19 fails";
  }
  return r;
}

/// Eq (19): -inf < E log|c| < 0, the premise of the coupling-tail lemmas.
inline ConditionReport check_log_c_window(const ModelSpec& model, const CheckBudget& budget = {},
                                          const SeedSpec& seed = {}) {
  ConditionReport r;
  r.condition = Condition::EQ19;
  const MomentEstimate lyap = lyapunov_exponent(model, budget, seed);
  r.evidence = {lyap};
  if (std::isinf(lyap.point)) {
    r.verdict = Verdict::fails;
    r.note = "E log|c(eps)| diverges to -inf";
  } else if (lyap.ci_high < 0.0) {
    r.verdict = Verdict::holds;
  } else if (lyap.ci_low >= 0.0) {
    r.verdict = Verdict::fails;
  } else {
    r.verdict = Verdict::inconclusive;
  }
  return r;
}

namespace detail {

inline ConditionReport moment_pair_check(Condition tag, const ModelSpec& model, double mu,
                                         const CheckBudget& budget, const SeedSpec& seed) {
  ConditionReport r;
  r.condition = tag;
  const MomentEstimate ec = coeff_abs_moment(model.c, model.innovation, mu, budget,
                                             seed.with(21, Purpose::conditions_mc), "c");
  const MomentEstimate eg = coeff_abs_moment(model.g, model.innovation, mu, budget,
                                             seed.with(22, Purpose::conditions_mc), "g");
  r.evidence = {ec, eg};
  r.converse_applies = model.nonneg;
  if (!std::isfinite(eg.point) || !std::isfinite(ec.point)) {
    r.verdict = Verdict::fails;
    r.note = !std::isfinite(ec.point) ? "E|c(eps)|^mu = inf" : "E|g(eps)|^mu = inf";
  } else if (ec.ci_high < 1.0) {
    r.verdict = Verdict::holds;
  } else if (ec.ci_low >= 1.0) {
    r.verdict = Verdict::fails;
  } else {
    r.verdict = Verdict::inconclusive;
  }
  if (r.verdict == Verdict::fails && r.converse_applies) {
    r.note += (r.note.empty() ? "" : "; ");
    r.note += "with EQ9, E|Lambda(sigma0^2)|^mu = inf";
  }
  return r;
}

}  // namespace detail

/// Theorem 3 / Eq (8): E|g|^mu < inf and E|c|^mu < 1.
inline ConditionReport check_lambda_moment(const ModelSpec& model, double mu,
                                           const CheckBudget& budget = {},
                                           const SeedSpec& seed = {}) {
  if (!(mu > 0.0)) throw std::invalid_argument("check_lambda_moment: mu > 0 required");
  return detail::moment_pair_check(Condition::EQ8, model, mu, budget, seed);
}

/// Corollary 1 / Eq (10): decides E|y0|^{2 nu} < inf for polynomial links
/// (two-sided under Eq (9)).
inline ConditionReport check_power_moment(const ModelSpec& model, double nu,
                                          const CheckBudget& budget = {},
                                          const SeedSpec& seed = {}) {
  if (model.link.kind != LinkKind::polynomial) {
    throw std::invalid_argument("check_power_moment applies to polynomial links only");
  }
  if (!(nu > 0.0)) throw std::invalid_argument("check_power_moment: nu > 0 required");
  ConditionReport r = detail::moment_pair_check(Condition::EQ10, model, nu / model.link.delta,
                                                budget, seed);
  r.condition = Condition::EQ10;
  // Corollary 1 also needs E|eps|^{2 nu} < inf.
  MomentEstimate eps_mom;
  if (model.innovation.has_abs_moment(2.0 * nu)) {
    eps_mom = estimate_expectation(
        model.innovation, [&](double x) { return std::pow(std::fabs(x), 2.0 * nu); }, budget,
        seed.with(23, Purpose::conditions_mc), "E|eps|^{2nu}", 2.0 * nu);
  } else {
    eps_mom = detail::exact_estimate("E|eps|^{2nu}", 2.0 * nu, kInf);
  }
  r.evidence.push_back(eps_mom);
  if (!std::isfinite(eps_mom.point)) {
    r.verdict = Verdict::fails;
    r.note = "E|eps|^{2nu} = inf";
  }
  return r;
}

/// Proposition 1 / Eq (11): |c| <= c < 1 a.s. and E exp(mu|g|) < inf, for
/// exponential links. Necessity (Eq 12 route) is used only under Eq (9).
inline ConditionReport check_exp_moment(const ModelSpec& model, double mu,
                                        const CheckBudget& budget = {}, const SeedSpec& seed = {}) {
  if (model.link.kind != LinkKind::exponential) {
    throw std::invalid_argument("check_exp_moment applies to exponential links only");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("check_exp_moment: mu > 0 required");
  ConditionReport r;
  r.condition = Condition::EQ11;
  const CoeffRange crange = coeff_range(model.c, model.innovation);
  const double ess_sup = std::max(std::fabs(crange.lo), std::fabs(crange.hi));
  MomentEstimate sup_ev = detail::exact_estimate("ess sup |c(eps)|", 0.0, ess_sup);
  const MomentEstimate exp_g = coeff_exp_moment(model.g, model.innovation, mu, budget,
                                                seed.with(31, Purpose::conditions_mc), "g");
  MomentEstimate eps_mom;
  if (model.innovation.has_abs_moment(2.0 * mu)) {
    eps_mom = estimate_expectation(
        model.innovation, [&](double x) { return std::pow(std::fabs(x), 2.0 * mu); }, budget,
        seed.with(32, Purpose::conditions_mc), "E|eps|^{2mu}", 2.0 * mu);
  } else {
    eps_mom = detail::exact_estimate("E|eps|^{2mu}", 2.0 * mu, kInf);
  }
  r.evidence = {sup_ev, exp_g, eps_mom};
  const bool clause1 = ess_sup < 1.0;
  const bool clause2 = std::isfinite(exp_g.point);
  const bool eps_ok = std::isfinite(eps_mom.point);
  r.verdict = (clause1 && clause2 && eps_ok) ? Verdict::holds : Verdict::fails;
  if (!clause1) r.note = "ess sup |c(eps)| >= 1";
  if (!clause2) r.note = "E exp(mu|g(eps)|) = inf";
  if (!eps_ok) r.note = "E|eps|^{2mu} = inf";
  r.converse_applies = model.nonneg;
  if (r.converse_applies && (ess_sup > 1.0 || !clause2)) {
    r.note += (r.note.empty() ? "" : "; ");
    r.note += "with EQ9, E|y0|^{2mu} = inf (Eq 12 / Eq 13 necessity)";
  }
  return r;
}

struct LogMomentReports {
  ConditionReport eq20;
  ConditionReport eq21;
};

/// Eq (20) vs Eq (21): which of the Lemma-4 / Lemma-5 tail regimes holds.
inline LogMomentReports check_log_moments(const ModelSpec& model, double mu,
                                          const CheckBudget& budget = {},
                                          const SeedSpec& seed = {}) {
  if (!(mu > 0.0)) throw std::invalid_argument("check_log_moments: mu > 0 required");
  LogMomentReports out;
  out.eq21 = detail::moment_pair_check(Condition::EQ21, model, mu, budget, seed);
  out.eq21.converse_applies = false;
  out.eq21.note = "";

  ConditionReport& r = out.eq20;
  r.condition = Condition::EQ20;
  bool logc_finite = true;
  MomentEstimate logc_ev;
  if (has_zero_atom(model.c, model.innovation)) {
    logc_finite = false;
    logc_ev = detail::exact_estimate("E|log|c(eps)||^mu", mu, kInf);
  } else if (const auto* ea = std::get_if<ExpAffineExpr>(&model.c)) {
    // |log c|^mu = |s eps - d|^mu
    logc_finite = model.innovation.has_abs_moment(mu);
    if (logc_finite) {
      const double s = ea->scale;
      const double d = ea->shift;
      logc_ev = estimate_expectation(
          model.innovation, [&](double x) { return std::pow(std::fabs(s * x - d), mu); }, budget,
          seed.with(41, Purpose::conditions_mc), "E|log|c(eps)||^mu", mu);
    } else {
      logc_ev = detail::exact_estimate("E|log|c(eps)||^mu", mu, kInf);
    }
  } else {
    // |log|c|| grows logarithmically, so every polynomial moment is finite.
    logc_ev = estimate_expectation(
        model.innovation,
        [&](double x) {
          const double v = std::max(std::fabs(eval_coeff(model.c, x)), 1e-300);
          return std::pow(std::fabs(std::log(v)), mu);
        },
        budget, seed.with(41, Purpose::conditions_mc), "E|log|c(eps)||^mu", mu);
  }
  const MomentEstimate logg_ev =
      detail::log_plus_moment(model.g, model.innovation, mu, budget, seed, "g", 42);
  r.evidence = {logc_ev, logg_ev};
  r.verdict = logc_finite ? Verdict::holds : Verdict::fails;
  if (!logc_finite) r.note = "E|log|c(eps)||^mu = inf";
  if (mu <= 2.0) {
    r.note += (r.note.empty() ? "" : "; ");
    r.note += "Lemma 4 needs mu > 2";
  }
  return out;
}

/// Eq (9): c(eps) >= 0 and g(eps) >= 0 a.s.
inline ConditionReport check_nonnegativity(const ModelSpec& model, const CheckBudget& budget = {},
                                           const SeedSpec& seed = {}) {
  ConditionReport r;
  r.condition = Condition::EQ9;
  const bool structural = nonneg_structural(model.c) && nonneg_structural(model.g);
  bool exact_range = false;
  if (!structural && model.innovation.bounded_support()) {
    const CoeffRange rc = coeff_range(model.c, model.innovation);
    const CoeffRange rg = coeff_range(model.g, model.innovation);
    exact_range = rc.lo >= 0.0 && rg.lo >= 0.0;
  }
  if (structural || exact_range) {
    r.verdict = Verdict::holds;
    r.note = structural ? "nonnegativity proved structurally"
                        : "nonnegativity exact over the bounded support";
    return r;
  }
  RandomStream rng(seed.with(0, Purpose::nonneg_screen));
  const std::uint64_t n = budget.mc_samples;
  std::uint64_t violations = 0;
  double first_violation = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = model.innovation.sample(rng);
    if (model.c_at(x) < 0.0 || model.g_at(x) < 0.0) {
      if (violations == 0) first_violation = x;
      ++violations;
    }
  }
  MomentEstimate ev;
  ev.quantity = "P(c(eps) < 0 or g(eps) < 0)";
  ev.point = static_cast<double>(violations) / static_cast<double>(n);
  ev.method = EstimateMethod::monte_carlo;
  ev.samples = n;
  ev.ci_low = 0.0;
  ev.ci_high = violations == 0 ? 1.0 - std::pow(0.05, 1.0 / static_cast<double>(n)) : ev.point;
  r.evidence = {ev};
  if (violations > 0) {
    r.verdict = Verdict::fails;
    r.note = "sampled violation at eps = " + std::to_string(first_violation);
  } else {
    r.verdict = Verdict::inconclusive;
    r.note = "no violation in " + std::to_string(n) + " samples";
  }
  return r;
}

/// Eq (27): E sigma0^{-theta} < inf, via the structural lower-bound route
/// (polynomial), the exponential-link sufficient conditions, or Monte Carlo.
/// The Monte Carlo route needs a simulation depth; the caller supplies it
/// (the result is then evidence, not a certificate).
template <typename SigmaSampler>
ConditionReport check_sigma_inverse_moment(const ModelSpec& model, double theta,
                                           const CheckBudget& budget, const SeedSpec& seed,
                                           SigmaSampler&& sample_sigma0) {
  if (!(theta > 0.0)) throw std::invalid_argument("check_sigma_inverse_moment: theta > 0");
  ConditionReport r;
  r.condition = Condition::EQ27;
  r.theta = theta;
  if (model.link.kind == LinkKind::polynomial) {
    const CoeffRange rg = coeff_range(model.g, model.innovation);
    const bool c_nonneg = nonneg_structural(model.c);
    if (c_nonneg && rg.lo > 0.0) {
      const double sigma2_floor = model.link.invert(rg.lo);
      const double bound = std::pow(sigma2_floor, -0.5 * theta);
      MomentEstimate ev = detail::exact_estimate("bound E sigma0^{-theta}", theta, bound);
      ev.ci_high = bound;
      r.evidence = {ev};
      r.verdict = Verdict::holds;
      r.note = "sigma0^2 >= Lambda^{-1}(ess inf g) = " + std::to_string(sigma2_floor);
      return r;
    }
  } else {
    const CoeffRange crange = coeff_range(model.c, model.innovation);
    const double ess_sup = std::max(std::fabs(crange.lo), std::fabs(crange.hi));
    if (ess_sup < 1.0 && abs_exp_moment_finite(model.g, model.innovation, 0.5 * theta)) {
      const MomentEstimate exp_g = coeff_exp_moment(
          model.g, model.innovation, 0.5 * theta, budget, seed.with(51, Purpose::conditions_mc),
          "g");
      r.evidence = {detail::exact_estimate("ess sup |c(eps)|", 0.0, ess_sup), exp_g};
      r.verdict = Verdict::holds;
      r.note = "|c| <= " + std::to_string(ess_sup) + " < 1 and E exp(theta/2 |g|) < inf";
      return r;
    }
  }
  // Monte Carlo estimate of E sigma0^{-theta}; cannot certify finiteness.
  RandomStream rng(seed.with(52, Purpose::conditions_mc));
  const std::uint64_t n = std::max<std::uint64_t>(1000, budget.mc_samples / 100);
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double s2 = sample_sigma0(rng);
    const double v = std::pow(s2, -0.5 * theta);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  const double se = std::sqrt(std::max(0.0, sumsq / static_cast<double>(n) - mean * mean) /
                              static_cast<double>(n));
  MomentEstimate ev;
  ev.quantity = "E sigma0^{-theta} (MC)";
  ev.order = theta;
  ev.point = mean;
  ev.ci_low = mean - 1.96 * se;
  ev.ci_high = mean + 1.96 * se;
  ev.method = EstimateMethod::monte_carlo;
  ev.samples = n;
  r.evidence = {ev};
  r.verdict = Verdict::inconclusive;
  r.note = "no structural certificate; Monte Carlo estimate reported";
  return r;
}

// ---------------------------------------------------------------------------
// Contraction certificate
// ---------------------------------------------------------------------------

struct ContractionCertificate {
  double rho = 1.0;  // per-step decay rate of the truncated-series tail
  double mu = 0.0;   // the moment order that certified it
};

/// Searches a small grid of moment orders for E|c|^mu < 1 and converts the
/// winner into a per-step geometric rate for truncation-depth selection
/// (rate = E|c|^mu for mu <= 1, else (E|c|^mu)^{1/mu}).
inline std::optional<ContractionCertificate> contraction_certificate(
    const ModelSpec& model, const CheckBudget& budget = {}, const SeedSpec& seed = {}) {
  static constexpr double grid[] = {2.0, 1.0, 0.5, 0.25, 0.125};
  std::optional<ContractionCertificate> best;
  for (double mu : grid) {
    const MomentEstimate est = coeff_abs_moment(model.c, model.innovation, mu, budget,
                                                seed.with(61, Purpose::conditions_mc), "c");
    if (!std::isfinite(est.point) || est.ci_high >= 1.0) continue;
    const double rate = mu <= 1.0 ? est.point : std::pow(est.point, 1.0 / mu);
    if (!best || rate < best->rho) best = ContractionCertificate{rate, mu};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Precondition gates
// ---------------------------------------------------------------------------

enum class GateStatus { pass, warn, refuse };

struct Gate {
  GateStatus status = GateStatus::pass;
  std::string message;
};

/// A distributional check runs only if no precondition fails; inconclusive
/// preconditions downgrade to a warning.
inline Gate make_gate(std::span<const ConditionReport> reports) {
  Gate g;
  for (const ConditionReport& r : reports) {
    if (r.verdict == Verdict::fails) {
      g.status = GateStatus::refuse;
      g.message = "precondition " + condition_name(r.condition) + " fails" +
                  (r.note.empty() ? "" : " (" + r.note + ")");
      return g;
    }
    if (r.verdict == Verdict::inconclusive) {
      g.status = GateStatus::warn;
      if (!g.message.empty()) g.message += "; ";
      g.message += "precondition " + condition_name(r.condition) + " inconclusive";
    }
  }
  return g;
}

/// Thrown when a paper-precondition gate refuses a distributional check.
class GateRefusal : public std::runtime_error {
 public:
  explicit GateRefusal(const std::string& msg) : std::runtime_error(msg) {}
};

inline void enforce_gate(const Gate& g) {
  if (g.status == GateStatus::refuse) throw GateRefusal(g.message);
}

}  // namespace augarch
