#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "augarch/model.hpp"
#include "augarch/rng.hpp"

namespace augarch {

/// Raised when the recursion state leaves the link domain (negative state
/// under a polynomial link). Carries the offending index.
class DomainViolation : public std::runtime_error {
 public:
  DomainViolation(std::int64_t index, double state, double c_val, double g_val)
      : std::runtime_error("link domain violation at k = " + std::to_string(index) +
                           ": state = " + std::to_string(state) +
                           " with c(eps) = " + std::to_string(c_val) +
                           ", g(eps) = " + std::to_string(g_val)),
        index(index),
        state(state) {}
  std::int64_t index;
  double state;
};

/// Default depth for models certified only through log moments (Lemma-4
/// regime), where no geometric tail certificate exists.
inline constexpr std::int64_t kLogMomentOnlyDepth = 2048;

inline constexpr std::int64_t kDepthFloor = 64;

/// Truncation depth M = max(64, ceil(log tol / log rho_hat)) from a certified
/// contraction rate rho_hat < 1 (see contraction_certificate). The depth-M
/// truncated series then has expected tail magnitude below tol in the norm
/// that certified rho_hat. c == 0 collapses the series to one term.
inline std::int64_t truncation_depth(const ModelSpec& model, double tol, double rho_hat) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("truncation_depth: tol in (0,1)");
  if (is_constant(model.c) && constant_value(model.c) == 0.0) return 1;
  if (!(rho_hat > 0.0) || rho_hat >= 1.0) {
    throw std::invalid_argument(
        "truncation_depth: no contraction certificate (rho_hat must lie in (0,1)); "
        "log-moment-only regimes need an explicit depth (default " +
        std::to_string(kLogMomentOnlyDepth) + ")");
  }
  const double m = std::ceil(std::log(tol) / std::log(rho_hat));
  return std::max<std::int64_t>(kDepthFloor, static_cast<std::int64_t>(m));
}

/// A simulated stationary sample path. The state array x holds
/// X_{1-M}, ..., X_n from the zero-initialized recursion, so X_k equals the
/// depth-(M+k-1) partial sum of the series representation, and the interior
/// recursion X_k = c(eps_{k-1}) X_{k-1} + g(eps_{k-1}) holds exactly between
/// consecutive entries. For exponential links x carries log sigma^2 and
/// sigma^2 is clamped to exp(+-700) with an overflow flag.
struct Path {
  std::int64_t n = 0;
  std::int64_t depth = 0;              // M
  std::vector<double> eps;             // eps_{1-M} .. eps_n    (n + M values)
  std::vector<double> x;               // X_{1-M} .. X_n        (n + M values)
  std::vector<double> sigma2;          // sigma^2_k, k = 1..n
  std::vector<double> y;               // y_k = sigma_k eps_k, k = 1..n
  bool overflow = false;

  std::size_t offset(std::int64_t k) const {
    return static_cast<std::size_t>(k - (1 - depth));
  }
  /// X_k for k in [1-M, n].
  double state_at(std::int64_t k) const { return x[offset(k)]; }
  double eps_at(std::int64_t k) const { return eps[offset(k)]; }
  /// Lambda(sigma_k^2) for k in [1, n].
  double lambda_sigma2(std::int64_t k) const { return x[offset(k)]; }
};

namespace detail {

inline double sigma2_from_state(const ModelSpec& model, double state, std::int64_t k,
                                double c_val, double g_val, bool* overflow) {
  if (model.link.kind == LinkKind::polynomial) {
    if (state < 0.0) throw DomainViolation(k, state, c_val, g_val);
    return model.link.delta == 1.0 ? state : std::pow(state, 1.0 / model.link.delta);
  }
  if (state > 700.0) {
    *overflow = true;
    return std::exp(700.0);
  }
  if (state < -700.0) {
    *overflow = true;
    return std::exp(-700.0);
  }
  return std::exp(state);
}

}  // namespace detail

/// Simulates a path of length n with truncation depth M >= 1 (equivalently,
/// the zero-initialized recursion with burn-in M). Polynomial links assume
/// nonnegativity has been screened (module conditions); a negative state
/// still aborts with the offending index either way.
inline Path simulate_path(const ModelSpec& model, std::int64_t n, std::int64_t M,
                          const SeedSpec& seed) {
  if (n < 1) throw std::invalid_argument("simulate_path: n >= 1");
  if (M < 1) throw std::invalid_argument("simulate_path: M >= 1");
  Path p;
  p.n = n;
  p.depth = M;
  const std::size_t total = static_cast<std::size_t>(n + M);
  p.eps.resize(total);
  p.x.resize(total);
  p.sigma2.resize(static_cast<std::size_t>(n));
  p.y.resize(static_cast<std::size_t>(n));

  RandomStream rng(seed);
  for (std::size_t i = 0; i < total; ++i) p.eps[i] = model.innovation.sample(rng);

  p.x[0] = 0.0;  // X_{1-M}
  for (std::size_t i = 1; i < total; ++i) {
    const double e = p.eps[i - 1];
    const double c_val = model.c_at(e);
    const double g_val = model.g_at(e);
    p.x[i] = c_val * p.x[i - 1] + g_val;
    const std::int64_t k = static_cast<std::int64_t>(i) + (1 - M);
    if (k >= 1) {
      const double s2 = detail::sigma2_from_state(model, p.x[i], k, c_val, g_val, &p.overflow);
      p.sigma2[static_cast<std::size_t>(k - 1)] = s2;
      p.y[static_cast<std::size_t>(k - 1)] = p.eps[i] * std::sqrt(s2);
    }
  }
  return p;
}

/// Simulates with the coefficient functions switching from `pre` to `post`
/// for transitions into indices k > change_at (links must agree). Used by the
/// change-point power experiment.
inline Path simulate_path_with_change(const ModelSpec& pre, const ModelSpec& post, std::int64_t n,
                                      std::int64_t change_at, std::int64_t M,
                                      const SeedSpec& seed) {
  if (pre.link.kind != post.link.kind || pre.link.delta != post.link.delta) {
    throw std::invalid_argument("simulate_path_with_change: links must agree");
  }
  if (change_at < 1 || change_at >= n) {
    throw std::invalid_argument("simulate_path_with_change: change_at in [1, n)");
  }
  Path p;
  p.n = n;
  p.depth = M;
  const std::size_t total = static_cast<std::size_t>(n + M);
  p.eps.resize(total);
  p.x.resize(total);
  p.sigma2.resize(static_cast<std::size_t>(n));
  p.y.resize(static_cast<std::size_t>(n));
  RandomStream rng(seed);
  for (std::size_t i = 0; i < total; ++i) p.eps[i] = pre.innovation.sample(rng);
  p.x[0] = 0.0;
  for (std::size_t i = 1; i < total; ++i) {
    const std::int64_t k = static_cast<std::int64_t>(i) + (1 - M);
    const ModelSpec& m = (k > change_at) ? post : pre;
    const double e = p.eps[i - 1];
    const double c_val = m.c_at(e);
    const double g_val = m.g_at(e);
    p.x[i] = c_val * p.x[i - 1] + g_val;
    if (k >= 1) {
      const double s2 = detail::sigma2_from_state(m, p.x[i], k, c_val, g_val, &p.overflow);
      p.sigma2[static_cast<std::size_t>(k - 1)] = s2;
      p.y[static_cast<std::size_t>(k - 1)] = p.eps[i] * std::sqrt(s2);
    }
  }
  return p;
}

/// Allocation-free path run: burns in depth steps from the zero state, then
/// feeds y_1..y_n to the sink. Same recursion and draw order as
/// simulate_path on a per-stream basis.
template <typename Sink>
void run_path(const ModelSpec& model, std::int64_t n, std::int64_t depth, RandomStream& rng,
              Sink&& sink) {
  double state = 0.0;
  bool overflow = false;
  double e = model.innovation.sample(rng);
  for (std::int64_t j = 1; j < depth; ++j) {
    state = model.c_at(e) * state + model.g_at(e);
    e = model.innovation.sample(rng);
  }
  for (std::int64_t k = 1; k <= n; ++k) {
    const double c_val = model.c_at(e);
    const double g_val = model.g_at(e);
    state = c_val * state + g_val;
    e = model.innovation.sample(rng);
    const double s2 = detail::sigma2_from_state(model, state, k, c_val, g_val, &overflow);
    sink(k, e * std::sqrt(s2));
  }
}

/// One stationary draw y_0 (depth-truncated), without materializing a Path.
inline double stationary_draw(const ModelSpec& model, std::int64_t depth, RandomStream& rng) {
  double y = 0.0;
  run_path(model, 1, depth, rng, [&](std::int64_t, double v) { y = v; });
  return y;
}

/// Depth-m truncated series at one index, from the m innovations preceding
/// it: eps_recent[i] = eps_{k-1-i}. Returns the truncated state and the full
/// window product prod_{j=1..m} c(eps_{k-j}).
struct TruncatedState {
  double state = 0.0;
  double prod_c = 1.0;
};

inline TruncatedState truncated_series(const ModelSpec& model, std::span<const double> eps_recent,
                                       std::int64_t m) {
  if (m < 0 || static_cast<std::size_t>(m) > eps_recent.size()) {
    throw std::invalid_argument("truncated_series: m outside the provided window");
  }
  TruncatedState t;
  for (std::int64_t i = 0; i < m; ++i) {
    const double e = eps_recent[static_cast<std::size_t>(i)];
    t.state += model.g_at(e) * t.prod_c;
    t.prod_c *= model.c_at(e);
  }
  return t;
}

/// The m-dependent surrogate built on the same innovation stream as the base
/// path: Lambda(sigma_{km}^2) is the depth-m truncated series at each k, so
/// y_{km} depends on (eps_k, ..., eps_{k-m}) only. The exact coupling
/// identity Lambda(sigma_k^2) - Lambda(sigma_{km}^2) =
/// [prod_{j=1..m} c(eps_{k-j})] * (left-context state at k-m) holds in exact
/// arithmetic; residual_identity_gap measures its floating-point deviation.
struct CoupledPath {
  Path base;
  std::int64_t m = 0;
  std::vector<double> lambda_m;  // Lambda(sigma_{km}^2), k = 1..n
  std::vector<double> sigma2_m;
  std::vector<double> y_m;
  std::vector<double> residual;  // Lambda(sigma_k^2) - Lambda(sigma_{km}^2)
  std::vector<double> prod_c;    // prod_{j=1..m} c(eps_{k-j})

  double residual_identity_gap() const {
    double worst = 0.0;
    for (std::int64_t k = 1; k <= base.n; ++k) {
      const std::size_t i = static_cast<std::size_t>(k - 1);
      const double rhs = prod_c[i] * base.state_at(k - m);
      const double gap = std::fabs(residual[i] - rhs) / (1.0 + std::fabs(residual[i]));
      if (gap > worst) worst = gap;
    }
    return worst;
  }
};

inline CoupledPath simulate_coupled(const ModelSpec& model, std::int64_t n, std::int64_t m,
                                    std::int64_t M, const SeedSpec& seed) {
  if (m < 1 || m > M) throw std::invalid_argument("simulate_coupled: 1 <= m <= M");
  CoupledPath cp;
  cp.base = simulate_path(model, n, M, seed);
  cp.m = m;
  const std::size_t nn = static_cast<std::size_t>(n);
  cp.lambda_m.resize(nn);
  cp.sigma2_m.resize(nn);
  cp.y_m.resize(nn);
  cp.residual.resize(nn);
  cp.prod_c.resize(nn);
  std::vector<double> window(static_cast<std::size_t>(m));
  for (std::int64_t k = 1; k <= n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    // eps_{k-1}, eps_{k-2}, ... live contiguously below offset(k).
    const std::size_t pos = cp.base.offset(k);
    for (std::int64_t j = 0; j < m; ++j) {
      window[static_cast<std::size_t>(j)] = cp.base.eps[pos - 1 - static_cast<std::size_t>(j)];
    }
    const TruncatedState t = truncated_series(model, window, m);
    cp.lambda_m[i] = t.state;
    cp.prod_c[i] = t.prod_c;
    cp.residual[i] = cp.base.state_at(k) - t.state;
    bool overflow = false;
    const double s2 = detail::sigma2_from_state(model, t.state, k, 0.0, 0.0, &overflow);
    cp.sigma2_m[i] = s2;
    cp.y_m[i] = cp.base.eps_at(k) * std::sqrt(s2);
  }
  return cp;
}

}  // namespace augarch
