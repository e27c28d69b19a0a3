#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "augarch/conditions.hpp"
#include "augarch/dependence.hpp"
#include "augarch/model.hpp"
#include "augarch/parallel.hpp"
#include "augarch/rng.hpp"
#include "augarch/simulate.hpp"
#include "augarch/special.hpp"
#include "augarch/stats.hpp"

namespace augarch {

/// Frozen acceptance thresholds for the distributional checks: the exact-null
/// asymptotic 1% KS critical value plus a finite-n slack calibrated once by
/// pilot runs on the i.i.d. model.
namespace calibration {

inline constexpr double kKsNullCrit1pct = 1.6276;
inline constexpr double kFiniteNSlack = 0.009;

inline double ks_threshold(std::uint64_t reps) {
  return kKsNullCrit1pct / std::sqrt(static_cast<double>(reps)) + kFiniteNSlack;
}

}  // namespace calibration

// ---------------------------------------------------------------------------
// Partial-sum processes
// ---------------------------------------------------------------------------

enum class SumVariant { observation, volatility };

/// S_n(t) = n^{-1/2} sum_{1<=i<=nt} (f(y_i) - mean), piecewise constant and
/// right-continuous; the volatility variant sums f(sigma_i) instead.
struct PartialSumProcess {
  std::vector<double> t_grid;
  std::vector<double> values;
  SumVariant variant = SumVariant::observation;
  double centering_mean = 0.0;
  std::int64_t n = 0;
};

inline PartialSumProcess partial_sum_process(const Path& path, const Transform& f,
                                             std::span<const double> t_grid, SumVariant variant,
                                             double centering_mean) {
  PartialSumProcess out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.variant = variant;
  out.centering_mean = centering_mean;
  out.n = path.n;
  double prev = -1.0;
  for (double t : t_grid) {
    if (t < 0.0 || t > 1.0 || t <= prev) {
      throw std::invalid_argument("partial_sum_process: grid must increase within [0,1]");
    }
    prev = t;
  }
  const double root_n = std::sqrt(static_cast<double>(path.n));
  std::vector<double> cumulative(static_cast<std::size_t>(path.n) + 1, 0.0);
  for (std::int64_t i = 1; i <= path.n; ++i) {
    const double z = variant == SumVariant::observation
                         ? path.y[static_cast<std::size_t>(i - 1)]
                         : std::sqrt(path.sigma2[static_cast<std::size_t>(i - 1)]);
    cumulative[static_cast<std::size_t>(i)] =
        cumulative[static_cast<std::size_t>(i - 1)] + (f.apply(z) - centering_mean);
  }
  out.values.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(path.n) * t));
    out.values.push_back(cumulative[std::min(idx, cumulative.size() - 1)] / root_n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Long-run variance and the finite-n variance curve
// ---------------------------------------------------------------------------

enum class LrvMethod { plug_in_truncated, bartlett };

/// tau^2 = Var f(y_0) + 2 sum_{k>=1} Cov(f(y_0), f(y_k)), estimated by the
/// truncated plug-in sum with a Bartlett-taper fallback on negativity.
struct LongRunVariance {
  double tau2 = 0.0;
  std::int64_t lag_window = 0;
  std::vector<double> gamma;  // lags 0..L
  LrvMethod method = LrvMethod::plug_in_truncated;
  bool bartlett_fallback = false;
  double se = 0.0;    // block-based standard error of tau2
  double mean = 0.0;  // centering mean from the same calibration path
  std::int64_t calibration_n = 0;
};

inline LongRunVariance long_run_variance_from_series(std::span<const double> xs, std::int64_t L,
                                                     std::size_t blocks = 16) {
  const AutocovarianceTable table = autocovariance_from_series(xs, L, blocks);
  LongRunVariance lrv;
  lrv.lag_window = L;
  lrv.gamma = table.gamma;
  lrv.mean = table.mean;
  lrv.calibration_n = table.n;
  auto plug_in = [&](std::span<const double> g) {
    double t = g[0];
    for (std::int64_t k = 1; k <= L; ++k) t += 2.0 * g[static_cast<std::size_t>(k)];
    return t;
  };
  lrv.tau2 = plug_in(table.gamma);
  if (lrv.tau2 <= 0.0) {
    lrv.bartlett_fallback = true;
    lrv.method = LrvMethod::bartlett;
    double t = table.gamma[0];
    for (std::int64_t k = 1; k <= L; ++k) {
      const double w = 1.0 - static_cast<double>(k) / static_cast<double>(L + 1);
      t += 2.0 * w * table.gamma[static_cast<std::size_t>(k)];
    }
    lrv.tau2 = std::max(t, 0.0);
  }
  // block-based standard error of the plug-in functional
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  const std::int64_t block_len = n / static_cast<std::int64_t>(blocks);
  if (block_len > 4 * (L + 1)) {
    std::vector<double> vals;
    vals.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto sub = xs.subspan(b * static_cast<std::size_t>(block_len),
                                  static_cast<std::size_t>(block_len));
      const AutocovarianceTable bt = autocovariance_from_series(sub, L, 2);
      double t = bt.gamma[0];
      for (std::int64_t k = 1; k <= L; ++k) t += 2.0 * bt.gamma[static_cast<std::size_t>(k)];
      vals.push_back(t);
    }
    lrv.se = stddev_of(vals) / std::sqrt(static_cast<double>(blocks));
  }
  return lrv;
}

inline LongRunVariance long_run_variance(const ModelSpec& model, const Transform& f,
                                         std::int64_t L, std::int64_t path_n, std::int64_t depth,
                                         const SeedSpec& seed) {
  const Path p = simulate_path(model, path_n, depth, seed.with(0, Purpose::calibration));
  std::vector<double> xs(p.y.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = f.apply(p.y[i]);
  return long_run_variance_from_series(xs, L);
}

/// beta_n^2 = Var f(y_0) + 2 sum_{j=1}^{n-1} (1 - j/n) Cov(f(y_1), f(y_{j+1}))
/// from an autocovariance table (covariances beyond the table vanish).
struct VarianceCurve {
  std::vector<std::int64_t> n_grid;
  std::vector<double> beta_n2;
  std::vector<double> big_b_n;  // B_n = sqrt(n beta_n^2)
  double beta_inf = 0.0;        // plug-in tau^2 from the full table
};

inline VarianceCurve beta_n_squared(const AutocovarianceTable& table,
                                    std::span<const std::int64_t> n_grid) {
  VarianceCurve vc;
  vc.n_grid.assign(n_grid.begin(), n_grid.end());
  const std::int64_t max_lag = table.lags.empty() ? 0 : table.lags.back();
  vc.beta_inf = table.gamma[0];
  for (std::int64_t k = 1; k <= max_lag; ++k) {
    vc.beta_inf += 2.0 * table.gamma[static_cast<std::size_t>(k)];
  }
  for (std::int64_t n : n_grid) {
    if (n < 1) throw std::invalid_argument("beta_n_squared: n >= 1");
    double b = table.gamma[0];
    const std::int64_t top = std::min(n - 1, max_lag);
    for (std::int64_t j = 1; j <= top; ++j) {
      b += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(n)) *
           table.gamma[static_cast<std::size_t>(j)];
    }
    vc.beta_n2.push_back(b);
    vc.big_b_n.push_back(std::sqrt(static_cast<double>(n) * std::max(b, 0.0)));
  }
  return vc;
}

// ---------------------------------------------------------------------------
// Distributional checks
// ---------------------------------------------------------------------------

struct DistributionalTest {
  std::string kind;
  std::string reference;
  std::uint64_t sample_size = 0;
  double statistic = 0.0;
  double p_approx = 0.0;
  double threshold = 0.0;
  bool pass = false;
  GateStatus gate = GateStatus::pass;
  std::string gate_message;
};

namespace detail {

template <typename PerRep>
std::vector<double> replicate_values(std::uint64_t reps, unsigned workers, PerRep&& fn) {
  std::vector<double> out(reps);
  parallel_replicates(reps, workers, [&](std::uint64_t r) { out[r] = fn(r); });
  return out;
}

inline DistributionalTest ks_test_against(std::vector<double> sample, const std::string& kind,
                                          const std::string& reference, double (*ref_cdf)(double),
                                          const Gate& gate) {
  DistributionalTest t;
  t.kind = kind;
  t.reference = reference;
  t.sample_size = sample.size();
  t.statistic = ks_statistic(std::move(sample), ref_cdf);
  t.p_approx = ks_p_value(t.statistic, t.sample_size);
  t.threshold = calibration::ks_threshold(t.sample_size);
  t.pass = t.statistic <= t.threshold;
  t.gate = gate.status;
  t.gate_message = gate.message;
  return t;
}

}  // namespace detail

/// Theorem 4/5 marginal check: the replicate sample of S_n(1)/tau against the
/// standard normal. Refuses when the precondition gate fails.
inline DistributionalTest fclt_marginal_check(const ModelSpec& model, const Transform& f,
                                              std::int64_t n, std::uint64_t reps, double tau2,
                                              double centering_mean, std::int64_t depth,
                                              const Gate& gate, const SeedSpec& seed,
                                              unsigned workers = 0) {
  enforce_gate(gate);
  if (!(tau2 > 0.0)) throw std::invalid_argument("fclt_marginal_check: tau2 must be positive");
  const double scale = std::sqrt(static_cast<double>(n)) * std::sqrt(tau2);
  std::vector<double> values = detail::replicate_values(reps, workers, [&](std::uint64_t r) {
    RandomStream rng(seed.with(r, Purpose::clt_reps));
    double sum = 0.0;
    run_path(model, n, depth, rng,
             [&](std::int64_t, double y) { sum += f.apply(y) - centering_mean; });
    return sum / scale;
  });
  return detail::ks_test_against(std::move(values), "fclt-marginal", "standard normal",
                                 &normal_cdf, gate);
}

/// Theorem 4/5 sup-functional check: sup_t S_n(t)/tau against the law of
/// sup of Brownian motion, 2 Phi(x) - 1.
inline DistributionalTest fclt_sup_check(const ModelSpec& model, const Transform& f,
                                         std::int64_t n, std::uint64_t reps, double tau2,
                                         double centering_mean, std::int64_t depth,
                                         const Gate& gate, const SeedSpec& seed,
                                         unsigned workers = 0) {
  enforce_gate(gate);
  if (!(tau2 > 0.0)) throw std::invalid_argument("fclt_sup_check: tau2 must be positive");
  const double scale = std::sqrt(static_cast<double>(n)) * std::sqrt(tau2);
  std::vector<double> values = detail::replicate_values(reps, workers, [&](std::uint64_t r) {
    RandomStream rng(seed.with(r, Purpose::clt_reps));
    double sum = 0.0;
    double running_max = 0.0;  // S(0) = 0
    run_path(model, n, depth, rng, [&](std::int64_t, double y) {
      sum += f.apply(y) - centering_mean;
      running_max = std::max(running_max, sum);
    });
    return running_max / scale;
  });
  return detail::ks_test_against(std::move(values), "fclt-sup", "sup of Brownian motion",
                                 &sup_w_cdf, gate);
}

/// Theorem 6/7 measurement: Delta_n = sup_x |Phat(S_n < x B_n) - Phi(x)| per
/// n, with B_n from the beta_n^2 curve, plus the (log n)^2/sqrt(n)
/// normalization.
struct BerryEsseenCurve {
  std::vector<std::int64_t> n_grid;
  std::vector<double> delta;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> normalized;  // delta * sqrt(n) / (log n)^2
  std::vector<double> big_b_n;
  std::uint64_t reps = 0;
};

inline BerryEsseenCurve berry_esseen_curve(const ModelSpec& model, const Transform& f,
                                           std::span<const std::int64_t> n_grid,
                                           std::uint64_t reps, const AutocovarianceTable& table,
                                           double centering_mean, std::int64_t depth,
                                           const Gate& gate, const SeedSpec& seed,
                                           unsigned workers = 0) {
  enforce_gate(gate);
  const VarianceCurve vc = beta_n_squared(table, n_grid);
  BerryEsseenCurve curve;
  curve.n_grid.assign(n_grid.begin(), n_grid.end());
  curve.big_b_n = vc.big_b_n;
  curve.reps = reps;
  const double mc_band = 1.358 / std::sqrt(static_cast<double>(reps));
  for (std::size_t j = 0; j < curve.n_grid.size(); ++j) {
    const std::int64_t n = curve.n_grid[j];
    const double bn = vc.big_b_n[j];
    if (!(bn > 0.0)) throw std::invalid_argument("berry_esseen_curve: B_n must be positive");
    std::vector<double> values =
        detail::replicate_values(reps, workers, [&](std::uint64_t r) {
          RandomStream rng(seed.with((static_cast<std::uint64_t>(j) << 40) | r,
                                     Purpose::berry_reps));
          double sum = 0.0;
          run_path(model, n, depth, rng,
                   [&](std::int64_t, double y) { sum += f.apply(y) - centering_mean; });
          return sum / bn;
        });
    const double d = ks_statistic(std::move(values), &normal_cdf);
    curve.delta.push_back(d);
    curve.ci_low.push_back(std::max(0.0, d - mc_band));
    curve.ci_high.push_back(std::min(1.0, d + mc_band));
    const double ln = std::log(static_cast<double>(n));
    curve.normalized.push_back(d * std::sqrt(static_cast<double>(n)) / (ln * ln));
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Empirical process machinery
// ---------------------------------------------------------------------------

/// Empirical marginal CDF from independent stationary draws; right-continuous
/// with the midpoint convention at tied sample values.
class CdfEstimate {
 public:
  CdfEstimate() = default;
  explicit CdfEstimate(std::vector<double> draws) : sample_(std::move(draws)) {
    std::sort(sample_.begin(), sample_.end());
  }

  double operator()(double x) const {
    if (sample_.empty()) throw std::logic_error("CdfEstimate: empty calibration sample");
    const auto lo = std::lower_bound(sample_.begin(), sample_.end(), x);
    const auto hi = std::upper_bound(lo, sample_.end(), x);
    const double below = static_cast<double>(lo - sample_.begin());
    const double ties = static_cast<double>(hi - lo);
    return (below + 0.5 * ties) / static_cast<double>(sample_.size());
  }

  std::size_t size() const { return sample_.size(); }
  const std::vector<double>& sample() const { return sample_; }

 private:
  std::vector<double> sample_;
};

/// N_cal stationary draws, one per independent replicate path.
inline CdfEstimate estimate_cdf(const ModelSpec& model, std::uint64_t n_cal, std::int64_t depth,
                                const SeedSpec& seed, unsigned workers = 0) {
  std::vector<double> draws(n_cal);
  parallel_replicates(n_cal, workers, [&](std::uint64_t r) {
    RandomStream rng(seed.with(r, Purpose::cdf_draws));
    draws[r] = stationary_draw(model, depth, rng);
  });
  return CdfEstimate(std::move(draws));
}

/// R(s, floor(n t)) = sum_{k <= nt} (1{F(y_k) <= s} - s) on the grid.
struct EmpiricalProcessSurface {
  std::vector<double> s_grid;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> values;  // [s][t]
  std::int64_t n = 0;
};

template <typename Cdf>
EmpiricalProcessSurface empirical_process_surface(std::span<const double> y, const Cdf& F,
                                                  std::span<const double> s_grid,
                                                  std::span<const double> t_grid) {
  EmpiricalProcessSurface out;
  out.s_grid.assign(s_grid.begin(), s_grid.end());
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.n = static_cast<std::int64_t>(y.size());
  if (!std::is_sorted(out.s_grid.begin(), out.s_grid.end()) ||
      !std::is_sorted(out.t_grid.begin(), out.t_grid.end())) {
    throw std::invalid_argument("empirical_process_surface: grids must be sorted");
  }
  const std::size_t ns = out.s_grid.size();
  out.values.assign(ns, std::vector<double>(out.t_grid.size(), 0.0));
  std::vector<double> counts(ns, 0.0);
  std::size_t t_idx = 0;
  const double n_d = static_cast<double>(out.n);
  for (std::int64_t k = 0; k <= out.n; ++k) {
    while (t_idx < out.t_grid.size() &&
           static_cast<double>(k) >= std::floor(n_d * out.t_grid[t_idx]) &&
           std::floor(n_d * out.t_grid[t_idx]) == static_cast<double>(k)) {
      for (std::size_t si = 0; si < ns; ++si) {
        out.values[si][t_idx] = counts[si] - static_cast<double>(k) * out.s_grid[si];
      }
      ++t_idx;
    }
    if (k == out.n) break;
    const double u = F(y[static_cast<std::size_t>(k)]);
    const auto pos = std::lower_bound(out.s_grid.begin(), out.s_grid.end(), u);
    for (std::size_t si = static_cast<std::size_t>(pos - out.s_grid.begin()); si < ns; ++si) {
      counts[si] += 1.0;
    }
  }
  return out;
}

/// Gamma(s, s') = sum_k E Y_0(s) Y_k(s'), truncated at K lags and
/// symmetrized exactly; per-lag contributions and block standard errors kept.
struct CovarianceKernel {
  std::vector<double> s_grid;
  std::vector<std::vector<double>> gamma;  // symmetric
  std::vector<std::vector<double>> se;
  std::vector<std::vector<std::vector<double>>> lag_contrib;  // [k][a][b]
  std::int64_t lag_truncation = 0;
  std::int64_t n = 0;
};

template <typename Cdf>
CovarianceKernel gamma_kernel_from_series(std::span<const double> y, const Cdf& F,
                                          std::span<const double> s_grid, std::int64_t K,
                                          std::size_t blocks = 16) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (K < 0 || n < 4 * (K + 1)) throw std::invalid_argument("gamma_kernel: series too short");
  blocks = std::max<std::size_t>(2, std::min(blocks, static_cast<std::size_t>(n / (2 * (K + 1)))));
  CovarianceKernel kernel;
  kernel.s_grid.assign(s_grid.begin(), s_grid.end());
  kernel.lag_truncation = K;
  kernel.n = n;
  const std::size_t ns = kernel.s_grid.size();

  // indicator-deviation rows Y[s][i] = 1{F(y_i) <= s} - s
  std::vector<std::vector<double>> rows(ns, std::vector<double>(static_cast<std::size_t>(n)));
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = F(y[static_cast<std::size_t>(i)]);
    for (std::size_t a = 0; a < ns; ++a) {
      rows[a][static_cast<std::size_t>(i)] = (u <= kernel.s_grid[a] ? 1.0 : 0.0) - kernel.s_grid[a];
    }
  }

  auto cross = [&](std::size_t a, std::size_t b, std::int64_t k, std::int64_t lo,
                   std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t i = lo; i + k < hi; ++i) {
      s += rows[a][static_cast<std::size_t>(i)] * rows[b][static_cast<std::size_t>(i + k)];
    }
    return s / static_cast<double>(hi - lo - k);
  };

  kernel.lag_contrib.assign(static_cast<std::size_t>(K + 1),
                            std::vector<std::vector<double>>(ns, std::vector<double>(ns, 0.0)));
  kernel.gamma.assign(ns, std::vector<double>(ns, 0.0));
  kernel.se.assign(ns, std::vector<double>(ns, 0.0));

  const std::int64_t block_len = n / static_cast<std::int64_t>(blocks);
  std::vector<double> block_total(blocks);
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = a; b < ns; ++b) {
      double total = cross(a, b, 0, 0, n);
      kernel.lag_contrib[0][a][b] = kernel.lag_contrib[0][b][a] = total;
      for (std::size_t bl = 0; bl < blocks; ++bl) {
        const std::int64_t lo = static_cast<std::int64_t>(bl) * block_len;
        block_total[bl] = cross(a, b, 0, lo, lo + block_len);
      }
      for (std::int64_t k = 1; k <= K; ++k) {
        const double fwd = cross(a, b, k, 0, n);
        const double bwd = cross(b, a, k, 0, n);
        kernel.lag_contrib[static_cast<std::size_t>(k)][a][b] = fwd + bwd;
        kernel.lag_contrib[static_cast<std::size_t>(k)][b][a] = fwd + bwd;
        total += fwd + bwd;
        for (std::size_t bl = 0; bl < blocks; ++bl) {
          const std::int64_t lo = static_cast<std::int64_t>(bl) * block_len;
          block_total[bl] += cross(a, b, k, lo, lo + block_len) +
                             cross(b, a, k, lo, lo + block_len);
        }
      }
      kernel.gamma[a][b] = kernel.gamma[b][a] = total;
      const double se = stddev_of(block_total) / std::sqrt(static_cast<double>(blocks));
      kernel.se[a][b] = kernel.se[b][a] = se;
    }
  }
  return kernel;
}

template <typename Cdf>
CovarianceKernel gamma_kernel(const ModelSpec& model, const Cdf& F,
                              std::span<const double> s_grid, std::int64_t K,
                              std::int64_t path_n, std::int64_t depth, const SeedSpec& seed) {
  const Path p = simulate_path(model, path_n, depth, seed.with(1, Purpose::calibration));
  return gamma_kernel_from_series(p.y, F, s_grid, K);
}

/// Theorem 11 marginal check at fixed s and t = 1: the replicate sample of
/// n^{-1/2} R(s, n) against N(0, Gamma(s,s)).
template <typename Cdf>
DistributionalTest empirical_clt_check(const ModelSpec& model, double s, std::int64_t n,
                                       std::uint64_t reps, double gamma_ss, const Cdf& F,
                                       const Gate& gate, std::int64_t depth, const SeedSpec& seed,
                                       unsigned workers = 0) {
  enforce_gate(gate);
  if (!(gamma_ss > 0.0)) {
    throw std::invalid_argument(
        "empirical_clt_check: Gamma(s,s) must be positive (s in {0,1} is degenerate)");
  }
  const double scale = std::sqrt(static_cast<double>(n)) * std::sqrt(gamma_ss);
  std::vector<double> values = detail::replicate_values(reps, workers, [&](std::uint64_t r) {
    RandomStream rng(seed.with(r, Purpose::empirical_reps));
    double count = 0.0;
    run_path(model, n, depth, rng, [&](std::int64_t, double y) {
      if (F(y) <= s) count += 1.0;
    });
    return (count - static_cast<double>(n) * s) / scale;
  });
  return detail::ks_test_against(std::move(values), "empirical-clt", "standard normal",
                                 &normal_cdf, gate);
}

/// Bai-style change-point statistic:
/// sup_{s in grid, 1<=k<=n} |R(s,k) - (k/n) R(s,n)| / sqrt(n).
template <typename Cdf>
double change_point_statistic(std::span<const double> y, const Cdf& F,
                              std::span<const double> s_grid) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (n < 2) throw std::invalid_argument("change_point_statistic: need n >= 2");
  const std::size_t ns = s_grid.size();
  std::vector<double> u(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = F(y[static_cast<std::size_t>(i)]);
  // R(s, n) first
  std::vector<double> r_n(ns, 0.0);
  for (std::size_t si = 0; si < ns; ++si) {
    double count = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (u[static_cast<std::size_t>(i)] <= s_grid[si]) count += 1.0;
    }
    r_n[si] = count - static_cast<double>(n) * s_grid[si];
  }
  double sup = 0.0;
  std::vector<double> counts(ns, 0.0);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double uk = u[static_cast<std::size_t>(k - 1)];
    for (std::size_t si = 0; si < ns; ++si) {
      if (uk <= s_grid[si]) counts[si] += 1.0;
      const double r_k = counts[si] - static_cast<double>(k) * s_grid[si];
      const double bridged =
          r_k - (static_cast<double>(k) / static_cast<double>(n)) * r_n[si];
      sup = std::max(sup, std::fabs(bridged));
    }
  }
  return sup / std::sqrt(static_cast<double>(n));
}

}  // namespace augarch
