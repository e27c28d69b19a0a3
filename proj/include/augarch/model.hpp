#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "augarch/rng.hpp"
#include "augarch/special.hpp"

namespace augarch {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kSqrt3 = 1.7320508075688772935;

// ---------------------------------------------------------------------------
// Innovations
// ---------------------------------------------------------------------------

enum class InnovationKind {
  standard_normal,
  student_t,
  uniform,
  two_point,
  centered_exponential,
};

/// Simple moments of the (unit-variance) innovation law, used for closed-form
/// coefficient moments. m4 may be +inf.
struct InnovationMoments {
  double abs1 = 0.0;    // E|x|
  double m2 = 1.0;      // E x^2
  double m4 = 0.0;      // E x^4
  double m2_neg = 0.0;  // E x^2 1{x<0}
  double m4_neg = 0.0;  // E x^4 1{x<0}
};

/// I.i.d. innovation law, normalized to mean zero and unit variance.
struct InnovationDist {
  InnovationKind kind = InnovationKind::standard_normal;
  double df = 0.0;  // student_t only

  static InnovationDist standard_normal() { return {InnovationKind::standard_normal, 0.0}; }
  static InnovationDist student_t(double df) {
    if (!(df > 2.0)) throw std::invalid_argument("student_t innovations need df > 2");
    return {InnovationKind::student_t, df};
  }
  static InnovationDist uniform() { return {InnovationKind::uniform, 0.0}; }
  static InnovationDist two_point() { return {InnovationKind::two_point, 0.0}; }
  static InnovationDist centered_exponential() {
    return {InnovationKind::centered_exponential, 0.0};
  }

  double sample(RandomStream& rng) const {
    switch (kind) {
      case InnovationKind::standard_normal:
        return rng.normal();
      case InnovationKind::student_t:
        return rng.student_t(df) * std::sqrt((df - 2.0) / df);
      case InnovationKind::uniform:
        return kSqrt3 * rng.uniform_sym();
      case InnovationKind::two_point:
        return rng.coin() ? 1.0 : -1.0;
      case InnovationKind::centered_exponential:
        return rng.exponential() - 1.0;
    }
    return 0.0;
  }

  /// Distribution function H(x) = P(eps <= x).
  double cdf(double x) const {
    switch (kind) {
      case InnovationKind::standard_normal:
        return normal_cdf(x);
      case InnovationKind::student_t:
        return student_t_cdf(x / std::sqrt((df - 2.0) / df), df);
      case InnovationKind::uniform: {
        if (x <= -kSqrt3) return 0.0;
        if (x >= kSqrt3) return 1.0;
        return (x + kSqrt3) / (2.0 * kSqrt3);
      }
      case InnovationKind::two_point: {
        if (x < -1.0) return 0.0;
        if (x < 1.0) return 0.5;
        return 1.0;
      }
      case InnovationKind::centered_exponential:
        return x <= -1.0 ? 0.0 : 1.0 - std::exp(-(x + 1.0));
    }
    return 0.0;
  }

  bool bounded_support() const {
    return kind == InnovationKind::uniform || kind == InnovationKind::two_point;
  }

  double support_lo() const {
    switch (kind) {
      case InnovationKind::uniform:
        return -kSqrt3;
      case InnovationKind::two_point:
        return -1.0;
      case InnovationKind::centered_exponential:
        return -1.0;
      default:
        return -kInf;
    }
  }

  double support_hi() const {
    switch (kind) {
      case InnovationKind::uniform:
        return kSqrt3;
      case InnovationKind::two_point:
        return 1.0;
      default:
        return kInf;
    }
  }

  /// sup { p : E|eps|^p < inf }.
  double max_poly_moment() const {
    return kind == InnovationKind::student_t ? df : kInf;
  }

  bool has_abs_moment(double p) const { return p < max_poly_moment(); }

  /// Is E exp(t |eps|^power) finite? (t > 0)
  bool has_exp_moment(double t, double power) const {
    if (t <= 0.0 || power <= 0.0) return true;
    if (bounded_support()) return true;
    switch (kind) {
      case InnovationKind::standard_normal:
        if (power < 2.0) return true;
        if (power == 2.0) return t < 0.5;
        return false;
      case InnovationKind::centered_exponential:
        if (power < 1.0) return true;
        if (power == 1.0) return t < 1.0;
        return false;
      case InnovationKind::student_t:
        return false;
      default:
        return true;
    }
  }

  InnovationMoments moments() const {
    InnovationMoments m;
    switch (kind) {
      case InnovationKind::standard_normal:
        m.abs1 = std::sqrt(2.0 / kPi);
        m.m4 = 3.0;
        m.m2_neg = 0.5;
        m.m4_neg = 1.5;
        break;
      case InnovationKind::uniform:
        m.abs1 = kSqrt3 / 2.0;
        m.m4 = 9.0 / 5.0;
        m.m2_neg = 0.5;
        m.m4_neg = 0.9;
        break;
      case InnovationKind::two_point:
        m.abs1 = 1.0;
        m.m4 = 1.0;
        m.m2_neg = 0.5;
        m.m4_neg = 0.5;
        break;
      case InnovationKind::centered_exponential:
        m.abs1 = 2.0 / std::exp(1.0);
        m.m4 = 9.0;
        m.m2_neg = 1.0 - 2.0 / std::exp(1.0);
        m.m4_neg = 9.0 - 24.0 / std::exp(1.0);
        break;
      case InnovationKind::student_t: {
        const double s = std::sqrt((df - 2.0) / df);
        m.abs1 = s * 2.0 * std::sqrt(df) *
                 std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)) /
                 (std::sqrt(kPi) * (df - 1.0));
        m.m4 = df > 4.0 ? 3.0 * (df - 2.0) / (df - 4.0) : kInf;
        m.m2_neg = 0.5;
        m.m4_neg = 0.5 * m.m4;
        break;
      }
    }
    return m;
  }

  std::string name() const {
    switch (kind) {
      case InnovationKind::standard_normal:
        return "standard-normal";
      case InnovationKind::student_t:
        return "student-t(" + std::to_string(df) + ")";
      case InnovationKind::uniform:
        return "uniform";
      case InnovationKind::two_point:
        return "two-point";
      case InnovationKind::centered_exponential:
        return "centered-exponential";
    }
    return "?";
  }
};

// ---------------------------------------------------------------------------
// Link function
// ---------------------------------------------------------------------------

enum class LinkKind { polynomial, exponential };

/// The invertible map Lambda between the volatility sigma^2 and the state of
/// the linear recursion. Polynomial: x^delta on [0, inf); exponential: log x.
struct LinkFunction {
  LinkKind kind = LinkKind::polynomial;
  double delta = 1.0;

  static LinkFunction polynomial(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("polynomial link needs delta > 0");
    return {LinkKind::polynomial, delta};
  }
  static LinkFunction exponential() { return {LinkKind::exponential, 0.0}; }

  double apply(double sigma2) const {
    if (kind == LinkKind::polynomial) {
      if (sigma2 < 0.0) throw std::domain_error("polynomial link: sigma2 < 0");
      return delta == 1.0 ? sigma2 : std::pow(sigma2, delta);
    }
    if (sigma2 <= 0.0) throw std::domain_error("exponential link: sigma2 <= 0");
    return std::log(sigma2);
  }

  double invert(double x) const {
    if (kind == LinkKind::polynomial) {
      if (x < 0.0) throw std::domain_error("polynomial link invert: negative state");
      return delta == 1.0 ? x : std::pow(x, 1.0 / delta);
    }
    return std::exp(x);
  }

  std::string name() const {
    if (kind == LinkKind::polynomial) return "polynomial(delta=" + std::to_string(delta) + ")";
    return "exponential";
  }
};

// ---------------------------------------------------------------------------
// Coefficient functions
// ---------------------------------------------------------------------------

/// Five-term basis e(x) = k0 + k1 x + k2 x^2 + k3 |x| + k4 x^2 1{x<0}.
/// This is the serializable coefficient language of the config file.
struct CoeffExpr {
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
};

/// base + scale * |x|^exponent; used by the power-garch constructor, whose
/// |x|^{2 delta} term is outside the basis.
struct PowerAbsExpr {
  double base = 0.0;
  double scale = 0.0;
  double exponent = 1.0;
};

/// exp(scale * x - shift); coefficient with affine log, used by the logc
/// family (heavy-tailed c with finite log-moments only).
struct ExpAffineExpr {
  double scale = 0.0;
  double shift = 0.0;
};

using CoeffFn = std::variant<CoeffExpr, PowerAbsExpr, ExpAffineExpr>;

inline double eval_coeff(const CoeffExpr& e, double x) {
  double v = e.k0 + e.k1 * x + e.k2 * x * x + e.k3 * std::fabs(x);
  if (x < 0.0) v += e.k4 * x * x;
  return v;
}

inline double eval_coeff(const PowerAbsExpr& e, double x) {
  return e.base + e.scale * std::pow(std::fabs(x), e.exponent);
}

inline double eval_coeff(const ExpAffineExpr& e, double x) {
  return std::exp(e.scale * x - e.shift);
}

inline double eval_coeff(const CoeffFn& fn, double x) {
  return std::visit([x](const auto& e) { return eval_coeff(e, x); }, fn);
}

inline bool is_constant(const CoeffFn& fn) {
  if (const auto* b = std::get_if<CoeffExpr>(&fn)) {
    return b->k1 == 0.0 && b->k2 == 0.0 && b->k3 == 0.0 && b->k4 == 0.0;
  }
  if (const auto* p = std::get_if<PowerAbsExpr>(&fn)) return p->scale == 0.0;
  if (const auto* e = std::get_if<ExpAffineExpr>(&fn)) return e->scale == 0.0;
  return false;
}

inline double constant_value(const CoeffFn& fn) { return eval_coeff(fn, 0.0); }

/// Structural proof of e(eps) >= 0 a.s. (sufficient, not necessary).
inline bool nonneg_structural(const CoeffFn& fn) {
  if (const auto* b = std::get_if<CoeffExpr>(&fn)) {
    return b->k1 == 0.0 && b->k3 == 0.0 && b->k0 >= 0.0 && b->k2 >= 0.0 &&
           b->k2 + b->k4 >= 0.0;
  }
  if (const auto* p = std::get_if<PowerAbsExpr>(&fn)) return p->base >= 0.0 && p->scale >= 0.0;
  return true;  // exp-affine is positive
}

struct CoeffRange {
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {

/// Range of a*x^2 + b*x + c over [lo, hi]; endpoints may be infinite.
inline CoeffRange quad_range(double a, double b, double c, double lo, double hi) {
  auto val = [&](double x) { return (a * x + b) * x + c; };
  CoeffRange r{kInf, -kInf};
  auto add = [&](double v) {
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
  };
  if (std::isfinite(lo)) add(val(lo));
  if (std::isfinite(hi)) add(val(hi));
  if (a != 0.0) {
    const double v = -b / (2.0 * a);
    if (v > lo && v < hi) add(val(v));
  }
  auto tail = [&](double sign) {
    if (a > 0.0) return kInf;
    if (a < 0.0) return -kInf;
    if (b != 0.0) return (b * sign > 0.0) ? kInf : -kInf;
    return c;
  };
  if (std::isinf(lo)) add(tail(-1.0));
  if (std::isinf(hi)) add(tail(+1.0));
  return r;
}

}  // namespace detail

/// Exact range of the coefficient function over the innovation support
/// (piecewise-quadratic analysis for the basis; monotone analysis otherwise).
inline CoeffRange coeff_range(const CoeffFn& fn, const InnovationDist& innov) {
  const double lo = innov.support_lo();
  const double hi = innov.support_hi();
  if (innov.kind == InnovationKind::two_point) {
    const double a = eval_coeff(fn, -1.0);
    const double b = eval_coeff(fn, 1.0);
    return {std::min(a, b), std::max(a, b)};
  }
  if (const auto* b = std::get_if<CoeffExpr>(&fn)) {
    CoeffRange r{kInf, -kInf};
    if (hi > 0.0) {  // x >= 0 piece: k2 x^2 + (k1 + k3) x + k0
      const CoeffRange p = detail::quad_range(b->k2, b->k1 + b->k3, b->k0, 0.0, hi);
      r.lo = std::min(r.lo, p.lo);
      r.hi = std::max(r.hi, p.hi);
    }
    if (lo < 0.0) {  // x < 0 piece: (k2 + k4) x^2 + (k1 - k3) x + k0
      const CoeffRange p = detail::quad_range(b->k2 + b->k4, b->k1 - b->k3, b->k0, lo, 0.0);
      r.lo = std::min(r.lo, p.lo);
      r.hi = std::max(r.hi, p.hi);
    }
    return r;
  }
  if (const auto* p = std::get_if<PowerAbsExpr>(&fn)) {
    const double abs_hi = std::max(std::fabs(lo), std::fabs(hi));
    const double abs_lo = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi));
    const double at_lo = p->base + p->scale * std::pow(abs_lo, p->exponent);
    const double at_hi = std::isinf(abs_hi) ? (p->scale > 0 ? kInf : (p->scale < 0 ? -kInf : p->base))
                                            : p->base + p->scale * std::pow(abs_hi, p->exponent);
    return {std::min(at_lo, at_hi), std::max(at_lo, at_hi)};
  }
  const auto& e = std::get<ExpAffineExpr>(fn);
  if (e.scale == 0.0) {
    const double v = std::exp(-e.shift);
    return {v, v};
  }
  auto val = [&](double x) {
    if (std::isinf(x)) return (e.scale * x > 0) ? kInf : 0.0;
    return std::exp(e.scale * x - e.shift);
  };
  const double a = val(lo);
  const double b2 = val(hi);
  return {std::min(a, b2), std::max(a, b2)};
}

/// Leading growth of |e(x)| as |x| -> inf on one side:
/// |e(x)| ~ coef * |x|^degree (degree 0 means bounded on that side).
struct GrowthSide {
  double degree = 0.0;
  double coef = 0.0;
};

struct Growth {
  GrowthSide pos;
  GrowthSide neg;
  bool log_affine = false;  // exp-affine coefficient: |e| = exp(scale*x - shift)
  double log_scale = 0.0;

  double max_degree() const { return std::max(pos.degree, neg.degree); }
};

inline Growth coeff_growth(const CoeffFn& fn) {
  Growth g;
  if (const auto* b = std::get_if<CoeffExpr>(&fn)) {
    auto side = [&](double quad, double lin) {
      if (quad != 0.0) return GrowthSide{2.0, std::fabs(quad)};
      if (lin != 0.0) return GrowthSide{1.0, std::fabs(lin)};
      return GrowthSide{0.0, std::fabs(b->k0)};
    };
    g.pos = side(b->k2, b->k1 + b->k3);
    g.neg = side(b->k2 + b->k4, b->k1 - b->k3);
    return g;
  }
  if (const auto* p = std::get_if<PowerAbsExpr>(&fn)) {
    const GrowthSide s = p->scale != 0.0 ? GrowthSide{p->exponent, std::fabs(p->scale)}
                                         : GrowthSide{0.0, std::fabs(p->base)};
    g.pos = g.neg = s;
    return g;
  }
  const auto& e = std::get<ExpAffineExpr>(fn);
  g.log_affine = e.scale != 0.0;
  g.log_scale = e.scale;
  g.pos = g.neg = GrowthSide{0.0, std::exp(-e.shift)};
  return g;
}

// ---------------------------------------------------------------------------
// Observation transforms
// ---------------------------------------------------------------------------

enum class TransformKind { power_abs, signed_power };

/// f(x) = |x|^nu or sign(x) |x|^nu.
struct Transform {
  TransformKind kind = TransformKind::power_abs;
  double nu = 1.0;

  static Transform power_abs(double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("transform needs nu > 0");
    return {TransformKind::power_abs, nu};
  }
  static Transform signed_power(double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("transform needs nu > 0");
    return {TransformKind::signed_power, nu};
  }

  double apply(double y) const {
    const double a = std::fabs(y);
    double v;
    if (nu == 1.0) {
      v = a;
    } else if (nu == 2.0) {
      v = a * a;
    } else {
      v = std::pow(a, nu);
    }
    if (kind == TransformKind::signed_power && y < 0.0) return -v;
    return v;
  }

  std::string name() const {
    return (kind == TransformKind::power_abs ? "power-abs(nu=" : "signed-power(nu=") +
           std::to_string(nu) + ")";
  }
};

// ---------------------------------------------------------------------------
// Model specification
// ---------------------------------------------------------------------------

/// The triple (c, g, Lambda) plus innovation law. Immutable value; safe for
/// concurrent reads.
struct ModelSpec {
  CoeffFn c = CoeffExpr{};
  CoeffFn g = CoeffExpr{};
  LinkFunction link = LinkFunction::polynomial(1.0);
  InnovationDist innovation = InnovationDist::standard_normal();

  /// Eq-(9)-style nonnegativity of c and g: proved structurally at
  /// construction or declared by the caller.
  bool nonneg = false;

  std::string family;  // empty for raw coefficient models
  std::vector<std::pair<std::string, double>> family_params;

  double c_at(double x) const { return eval_coeff(c, x); }
  double g_at(double x) const { return eval_coeff(g, x); }

  void finalize_nonneg(std::optional<bool> declared = std::nullopt) {
    nonneg = declared.value_or(nonneg_structural(c) && nonneg_structural(g));
  }
};

namespace detail {

inline double require_param(const std::map<std::string, double>& params, const std::string& key,
                            const std::string& family) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument("family '" + family + "' needs parameter '" + key + "'");
  }
  return it->second;
}

inline void reject_unknown(const std::map<std::string, double>& params,
                           std::initializer_list<const char*> known, const std::string& family) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* name : known) {
      if (k == name) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::invalid_argument("family '" + family + "': unknown parameter '" + k + "'");
  }
}

}  // namespace detail

/// Built-in (c, g, Lambda) mappings for the named GARCH variants.
///   garch(omega, alpha, beta):        Lambda = x, c = beta + alpha x^2, g = omega
///   igarch(omega, alpha):             garch with beta = 1 - alpha
///   power-garch(omega, alpha, beta, delta): Lambda = x^delta, c = beta + alpha |x|^{2 delta}
///   gjr(omega, alpha, alpha_minus, beta):   c = beta + alpha x^2 + alpha_minus x^2 1{x<0}
///   egarch(omega, beta, alpha, gamma): Lambda = log x, c = beta, g = omega + alpha|x| + gamma x
///   iid():                            c = 0, g = 1, Lambda = x
///   logc(s, d):                       c = exp(s x - d), g = 1, Lambda = x
inline ModelSpec make_builtin(const std::string& family,
                              const std::map<std::string, double>& params = {},
                              std::optional<InnovationDist> innovation = std::nullopt) {
  using detail::reject_unknown;
  using detail::require_param;
  ModelSpec m;
  m.family = family;
  m.innovation = innovation.value_or(InnovationDist::standard_normal());
  if (family == "garch" || family == "igarch") {
    const double omega = require_param(params, "omega", family);
    const double alpha = require_param(params, "alpha", family);
    double beta;
    if (family == "igarch") {
      reject_unknown(params, {"omega", "alpha"}, family);
      if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("igarch needs alpha in (0,1)");
      beta = 1.0 - alpha;
    } else {
      reject_unknown(params, {"omega", "alpha", "beta"}, family);
      beta = require_param(params, "beta", family);
      if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("garch needs alpha, beta >= 0");
    }
    if (!(omega > 0.0)) throw std::invalid_argument(family + " needs omega > 0");
    m.c = CoeffExpr{beta, 0.0, alpha, 0.0, 0.0};
    m.g = CoeffExpr{omega, 0.0, 0.0, 0.0, 0.0};
    m.link = LinkFunction::polynomial(1.0);
    m.family_params = {{"omega", omega}, {"alpha", alpha}, {"beta", beta}};
  } else if (family == "power-garch") {
    reject_unknown(params, {"omega", "alpha", "beta", "delta"}, family);
    const double omega = require_param(params, "omega", family);
    const double alpha = require_param(params, "alpha", family);
    const double beta = require_param(params, "beta", family);
    const double delta = require_param(params, "delta", family);
    if (!(omega > 0.0)) throw std::invalid_argument("power-garch needs omega > 0");
    if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("power-garch needs alpha, beta >= 0");
    m.c = PowerAbsExpr{beta, alpha, 2.0 * delta};
    m.g = CoeffExpr{omega, 0.0, 0.0, 0.0, 0.0};
    m.link = LinkFunction::polynomial(delta);  // throws if delta <= 0
    m.family_params = {{"omega", omega}, {"alpha", alpha}, {"beta", beta}, {"delta", delta}};
  } else if (family == "gjr") {
    reject_unknown(params, {"omega", "alpha", "alpha_minus", "beta"}, family);
    const double omega = require_param(params, "omega", family);
    const double alpha = require_param(params, "alpha", family);
    const double alpha_minus = require_param(params, "alpha_minus", family);
    const double beta = require_param(params, "beta", family);
    if (!(omega > 0.0)) throw std::invalid_argument("gjr needs omega > 0");
    m.c = CoeffExpr{beta, 0.0, alpha, 0.0, alpha_minus};
    m.g = CoeffExpr{omega, 0.0, 0.0, 0.0, 0.0};
    m.link = LinkFunction::polynomial(1.0);
    m.family_params = {
        {"omega", omega}, {"alpha", alpha}, {"alpha_minus", alpha_minus}, {"beta", beta}};
  } else if (family == "egarch") {
    reject_unknown(params, {"omega", "beta", "alpha", "gamma"}, family);
    const double omega = require_param(params, "omega", family);
    const double beta = require_param(params, "beta", family);
    const double alpha = require_param(params, "alpha", family);
    const double gamma = require_param(params, "gamma", family);
    m.c = CoeffExpr{beta, 0.0, 0.0, 0.0, 0.0};
    m.g = CoeffExpr{omega, gamma, 0.0, alpha, 0.0};
    m.link = LinkFunction::exponential();
    m.family_params = {{"omega", omega}, {"beta", beta}, {"alpha", alpha}, {"gamma", gamma}};
  } else if (family == "iid") {
    reject_unknown(params, {}, family);
    m.c = CoeffExpr{};
    m.g = CoeffExpr{1.0, 0.0, 0.0, 0.0, 0.0};
    m.link = LinkFunction::polynomial(1.0);
  } else if (family == "logc") {
    reject_unknown(params, {"s", "d"}, family);
    const double s = require_param(params, "s", family);
    const double d = require_param(params, "d", family);
    m.c = ExpAffineExpr{s, d};
    m.g = CoeffExpr{1.0, 0.0, 0.0, 0.0, 0.0};
    m.link = LinkFunction::polynomial(1.0);
    if (!innovation) m.innovation = InnovationDist::student_t(5.0);
    m.family_params = {{"s", s}, {"d", d}};
  } else {
    throw std::invalid_argument("unknown model family '" + family + "'");
  }
  m.finalize_nonneg();
  return m;
}

inline std::string describe_family(const std::string& family) {
  if (family == "garch") {
    return "garch(omega, alpha, beta)\n"
           "  Lambda(x) = x, c(x) = beta + alpha x^2, g(x) = omega\n"
           "  recursion: sigma2_k = omega + beta sigma2_{k-1} + alpha y_{k-1}^2\n"
           "  binding conditions: E log(beta + alpha eps^2) < 0 (stationarity);\n"
           "  E|y|^{2nu} < inf iff E(beta + alpha eps^2)^nu < 1 (EQ10).";
  }
  if (family == "igarch") {
    return "igarch(omega, alpha)   [garch with beta = 1 - alpha]\n"
           "  Lambda(x) = x, c(x) = (1-alpha) + alpha x^2, g(x) = omega\n"
           "  E c(eps) = 1: stationary (E log c < 0 by Jensen) but E y^2 = inf;\n"
           "  the log-moment route applies where moment/mixing conditions fail.";
  }
  if (family == "power-garch") {
    return "power-garch(omega, alpha, beta, delta)\n"
           "  Lambda(x) = x^delta, c(x) = beta + alpha |x|^{2 delta}, g(x) = omega\n"
           "  recursion: sigma^{2 delta}_k = omega + beta sigma^{2 delta}_{k-1} + alpha "
           "|y_{k-1}|^{2 delta}\n"
           "  binding conditions: EQ10 with exponent nu/delta.";
  }
  if (family == "gjr") {
    return "gjr(omega, alpha, alpha_minus, beta)   [threshold garch]\n"
           "  Lambda(x) = x, c(x) = beta + alpha x^2 + alpha_minus x^2 1{x<0}, g(x) = omega\n"
           "  nonnegativity (EQ9) needs beta, alpha, alpha + alpha_minus >= 0.";
  }
  if (family == "egarch") {
    return "egarch(omega, beta, alpha, gamma)\n"
           "  Lambda(x) = log x, c(x) = beta, g(x) = omega + alpha |x| + gamma x\n"
           "  recursion: log sigma2_k = omega + beta log sigma2_{k-1} + alpha|eps| + gamma eps\n"
           "  binding conditions: |beta| < 1 and E exp(mu |g(eps)|) < inf (EQ11).";
  }
  if (family == "iid") {
    return "iid()\n"
           "  c = 0, g = 1, Lambda(x) = x: sigma2 = 1 and y_k = eps_k.\n"
           "  Reference model; every limit law is exact.";
  }
  if (family == "logc") {
    return "logc(s, d)   [default innovations student-t(5)]\n"
           "  Lambda(x) = x, c(x) = exp(s eps - d), g(x) = 1\n"
           "  E log c = -d; E c^mu = inf for heavy-tailed eps: only the\n"
           "  log-moment conditions (EQ20) hold, the polynomial coupling-tail regime.";
  }
  throw std::invalid_argument("unknown model family '" + family + "'");
}

inline const std::vector<std::string>& builtin_families() {
  static const std::vector<std::string> names = {"garch",  "igarch", "power-garch", "gjr",
                                                 "egarch", "iid",    "logc"};
  return names;
}

}  // namespace augarch
