#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "augarch/conditions.hpp"
#include "augarch/model.hpp"
#include "augarch/parallel.hpp"
#include "augarch/rng.hpp"
#include "augarch/simulate.hpp"
#include "augarch/stats.hpp"

namespace augarch {

/// Geometric decay fit of coupling errors against m, on log scale.
struct DecayFit {
  std::vector<std::int64_t> m_values;
  std::vector<double> errors;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> noise_floor;  // MC standard error per point

  double rate = 1.0;  // fitted per-unit-m ratio rho_hat
  double intercept = 0.0;
  double r_squared = 0.0;
  Interval rate_band{1.0, 1.0};
  std::size_t used_points = 0;
  bool degenerate = false;
  bool contracting = false;           // rate_band.hi < 1
  bool precondition_verified = true;  // E f(y)^2 gate; fit still runs when false

  double eta_l2 = 0.0;  // ||f(y)||_2 estimate from the same replicates
  double eta_l2_se = 0.0;
  std::uint64_t reps = 0;
};

/// Least-squares fit of log(error) on m over the usable points (positive and
/// above 10x the MC noise floor when floors are supplied).
inline DecayFit fit_geometric_decay(std::span<const std::int64_t> m_values,
                                    std::span<const double> errors,
                                    std::span<const double> noise_floor = {}) {
  if (m_values.size() != errors.size()) {
    throw std::invalid_argument("fit_geometric_decay: size mismatch");
  }
  DecayFit fit;
  fit.m_values.assign(m_values.begin(), m_values.end());
  fit.errors.assign(errors.begin(), errors.end());
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0)) continue;
    if (!noise_floor.empty() && !(errors[i] > 10.0 * noise_floor[i])) continue;
    xs.push_back(static_cast<double>(m_values[i]));
    ys.push_back(std::log(errors[i]));
  }
  fit.used_points = xs.size();
  if (xs.size() < 3) {
    fit.degenerate = true;
    return fit;
  }
  const LinearFit lf = least_squares(xs, ys);
  fit.rate = std::exp(lf.slope);
  fit.intercept = lf.intercept;
  fit.r_squared = lf.r_squared;
  fit.rate_band = {std::exp(lf.slope - 1.96 * lf.slope_se), std::exp(lf.slope + 1.96 * lf.slope_se)};
  fit.contracting = fit.rate_band.hi < 1.0;
  return fit;
}

namespace detail {

/// One replicate of the coupling experiment at a fixed interior index:
/// sweeps the depth-d truncated series for d = 1..D over a fresh innovation
/// window and reports the states at the requested depths plus the full-depth
/// reference, the same multiplier innovation, and the log|c| prefix sums.
struct CouplingSweep {
  double eps0 = 0.0;                 // multiplier eps_k
  double full_state = 0.0;           // depth-D state ("truth")
  std::vector<double> state_at_m;    // states at the requested depths
  std::vector<double> logc_prefix;   // sum_{i<=m} log|c(eps_{k-i})| at requested depths
};

inline void coupling_sweep(const ModelSpec& model, std::span<const std::int64_t> m_sorted,
                           std::int64_t depth, RandomStream& rng, CouplingSweep& out) {
  out.eps0 = model.innovation.sample(rng);
  out.state_at_m.assign(m_sorted.size(), 0.0);
  out.logc_prefix.assign(m_sorted.size(), 0.0);
  double state = 0.0;
  double prod = 1.0;
  double logc_sum = 0.0;
  std::size_t next = 0;
  for (std::int64_t d = 1; d <= depth; ++d) {
    const double e = model.innovation.sample(rng);
    const double c_val = model.c_at(e);
    state += model.g_at(e) * prod;
    prod *= c_val;
    logc_sum += std::log(std::max(std::fabs(c_val), 1e-300));
    while (next < m_sorted.size() && m_sorted[next] == d) {
      out.state_at_m[next] = state;
      out.logc_prefix[next] = logc_sum;
      ++next;
    }
  }
  out.full_state = state;
}

inline double eta_from_state(const ModelSpec& model, const Transform& f, double eps0,
                             double state) {
  bool overflow = false;
  const double s2 = sigma2_from_state(model, state, 0, 0.0, 0.0, &overflow);
  return f.apply(eps0 * std::sqrt(s2));
}

}  // namespace detail

/// L2 coupling error ||eta_0 - eta_{0m}||_2 per m, measured at a fixed
/// interior index across independent replicates (depth D plays the role of
/// the fully converged left context).
inline DecayFit l2_coupling_error(const ModelSpec& model, const Transform& f,
                                  std::vector<std::int64_t> m_list, std::uint64_t reps,
                                  std::int64_t depth, const SeedSpec& seed,
                                  bool precondition_verified = true, unsigned workers = 0) {
  if (reps < 10) throw std::invalid_argument("l2_coupling_error: too few replicates");
  std::sort(m_list.begin(), m_list.end());
  if (m_list.empty() || m_list.front() < 1 || m_list.back() > depth) {
    throw std::invalid_argument("l2_coupling_error: m values must lie in [1, depth]");
  }
  const std::size_t nm = m_list.size();

  struct Acc {
    std::vector<double> sq;   // sum (eta - eta_m)^2
    std::vector<double> q4;   // sum (eta - eta_m)^4
    double eta_sq = 0.0;      // sum eta^2
    double eta_4 = 0.0;
  };
  Acc init;
  init.sq.assign(nm, 0.0);
  init.q4.assign(nm, 0.0);

  const Acc total = chunked_replicates(
      reps, workers, 256, init,
      [&](std::uint64_t r, Acc& acc) {
        RandomStream rng(seed.with(r, Purpose::l2_reps));
        detail::CouplingSweep sweep;
        detail::coupling_sweep(model, m_list, depth, rng, sweep);
        const double eta = detail::eta_from_state(model, f, sweep.eps0, sweep.full_state);
        acc.eta_sq += eta * eta;
        acc.eta_4 += eta * eta * eta * eta;
        for (std::size_t i = 0; i < nm; ++i) {
          const double em = detail::eta_from_state(model, f, sweep.eps0, sweep.state_at_m[i]);
          const double d2 = (eta - em) * (eta - em);
          acc.sq[i] += d2;
          acc.q4[i] += d2 * d2;
        }
      },
      [&](Acc& t, const Acc& s) {
        for (std::size_t i = 0; i < nm; ++i) {
          t.sq[i] += s.sq[i];
          t.q4[i] += s.q4[i];
        }
        t.eta_sq += s.eta_sq;
        t.eta_4 += s.eta_4;
      });

  const double n = static_cast<double>(reps);
  std::vector<double> errors(nm);
  std::vector<double> lo(nm);
  std::vector<double> hi(nm);
  std::vector<double> floor(nm);
  for (std::size_t i = 0; i < nm; ++i) {
    const double mean_sq = total.sq[i] / n;
    const double var_sq = std::max(0.0, total.q4[i] / n - mean_sq * mean_sq);
    const double se_sq = std::sqrt(var_sq / n);
    errors[i] = std::sqrt(mean_sq);
    lo[i] = std::sqrt(std::max(0.0, mean_sq - 1.96 * se_sq));
    hi[i] = std::sqrt(mean_sq + 1.96 * se_sq);
    floor[i] = errors[i] > 0.0 ? 0.5 * se_sq / errors[i] : se_sq;
  }
  DecayFit fit = fit_geometric_decay(m_list, errors, floor);
  fit.ci_low = std::move(lo);
  fit.ci_high = std::move(hi);
  fit.noise_floor = std::move(floor);
  fit.precondition_verified = precondition_verified;
  fit.reps = reps;
  const double eta_m2 = total.eta_sq / n;
  fit.eta_l2 = std::sqrt(eta_m2);
  const double eta_var = std::max(0.0, total.eta_4 / n - eta_m2 * eta_m2);
  fit.eta_l2_se = fit.eta_l2 > 0.0 ? 0.5 * std::sqrt(eta_var / n) / fit.eta_l2 : 0.0;
  return fit;
}

enum class TailRegime { exponential, polynomial, inconclusive };

inline std::string tail_regime_name(TailRegime r) {
  switch (r) {
    case TailRegime::exponential:
      return "exponential";
    case TailRegime::polynomial:
      return "polynomial";
    case TailRegime::inconclusive:
      return "inconclusive";
  }
  return "?";
}

/// Coupling tail probabilities P(|diff| > exp(-alpha m)) at the state level
/// (Lemmas 3-5) and the transformed level (Lemmas 6-7), with exact binomial
/// bands and T_m diagnostics, plus the exponential-vs-polynomial regime
/// contest on r^2 of the two linearizations.
struct CouplingTailReport {
  double alpha = 0.0;
  std::vector<std::int64_t> m_values;
  std::vector<double> lambda_tail, lambda_lo, lambda_hi;
  std::vector<double> eta_tail, eta_lo, eta_hi;
  std::vector<double> tm_mean, tm_var;
  TailRegime regime = TailRegime::inconclusive;
  double r2_exponential = 0.0;
  double r2_polynomial = 0.0;
  std::uint64_t reps = 0;
  std::string note;
};

inline CouplingTailReport coupling_tail(const ModelSpec& model, const Transform& f, double alpha,
                                        std::vector<std::int64_t> m_list, std::uint64_t reps,
                                        std::int64_t depth, const SeedSpec& seed,
                                        unsigned workers = 0) {
  std::sort(m_list.begin(), m_list.end());
  if (m_list.empty() || m_list.front() < 1 || m_list.back() > depth) {
    throw std::invalid_argument("coupling_tail: m values must lie in [1, depth]");
  }
  const std::size_t nm = m_list.size();
  const MomentEstimate lyap = lyapunov_exponent(model, CheckBudget{}, seed);
  const bool c_vanishes = std::isinf(lyap.point);

  CouplingTailReport rep;
  rep.m_values = m_list;
  rep.reps = reps;
  rep.alpha = alpha > 0.0 ? alpha
                          : (c_vanishes ? 0.1 : std::min(0.25 * std::fabs(lyap.point), 0.1));

  struct Acc {
    std::vector<std::uint64_t> lambda_hits;
    std::vector<std::uint64_t> eta_hits;
    std::vector<double> tm_sum;
    std::vector<double> tm_sumsq;
  };
  Acc init;
  init.lambda_hits.assign(nm, 0);
  init.eta_hits.assign(nm, 0);
  init.tm_sum.assign(nm, 0.0);
  init.tm_sumsq.assign(nm, 0.0);

  const double elogc = c_vanishes ? 0.0 : lyap.point;
  const Acc total = chunked_replicates(
      reps, workers, 256, init,
      [&](std::uint64_t r, Acc& acc) {
        RandomStream rng(seed.with(r, Purpose::tails));
        detail::CouplingSweep sweep;
        detail::coupling_sweep(model, m_list, depth, rng, sweep);
        const double eta = detail::eta_from_state(model, f, sweep.eps0, sweep.full_state);
        for (std::size_t i = 0; i < nm; ++i) {
          const double threshold = std::exp(-rep.alpha * static_cast<double>(m_list[i]));
          if (std::fabs(sweep.full_state - sweep.state_at_m[i]) > threshold) {
            ++acc.lambda_hits[i];
          }
          const double em = detail::eta_from_state(model, f, sweep.eps0, sweep.state_at_m[i]);
          if (std::fabs(eta - em) > threshold) ++acc.eta_hits[i];
          const double tm = sweep.logc_prefix[i] - elogc * static_cast<double>(m_list[i]);
          acc.tm_sum[i] += tm;
          acc.tm_sumsq[i] += tm * tm;
        }
      },
      [&](Acc& t, const Acc& s) {
        for (std::size_t i = 0; i < nm; ++i) {
          t.lambda_hits[i] += s.lambda_hits[i];
          t.eta_hits[i] += s.eta_hits[i];
          t.tm_sum[i] += s.tm_sum[i];
          t.tm_sumsq[i] += s.tm_sumsq[i];
        }
      });

  const double n = static_cast<double>(reps);
  rep.lambda_tail.resize(nm);
  rep.lambda_lo.resize(nm);
  rep.lambda_hi.resize(nm);
  rep.eta_tail.resize(nm);
  rep.eta_lo.resize(nm);
  rep.eta_hi.resize(nm);
  rep.tm_mean.resize(nm);
  rep.tm_var.resize(nm);
  for (std::size_t i = 0; i < nm; ++i) {
    rep.lambda_tail[i] = static_cast<double>(total.lambda_hits[i]) / n;
    const Interval li = clopper_pearson(total.lambda_hits[i], reps);
    rep.lambda_lo[i] = li.lo;
    rep.lambda_hi[i] = li.hi;
    rep.eta_tail[i] = static_cast<double>(total.eta_hits[i]) / n;
    const Interval ei = clopper_pearson(total.eta_hits[i], reps);
    rep.eta_lo[i] = ei.lo;
    rep.eta_hi[i] = ei.hi;
    rep.tm_mean[i] = total.tm_sum[i] / n;
    rep.tm_var[i] = std::max(0.0, total.tm_sumsq[i] / n - rep.tm_mean[i] * rep.tm_mean[i]);
  }

  // regime contest on the state-level tails
  std::vector<double> xs_m;
  std::vector<double> xs_logm;
  std::vector<double> ys;
  for (std::size_t i = 0; i < nm; ++i) {
    if (total.lambda_hits[i] == 0) continue;
    xs_m.push_back(static_cast<double>(m_list[i]));
    xs_logm.push_back(std::log(static_cast<double>(m_list[i])));
    ys.push_back(std::log(rep.lambda_tail[i]));
  }
  if (c_vanishes) {
    rep.regime = TailRegime::inconclusive;
    rep.note = "coupling exact (c = 0): all tails vanish";
    return rep;
  }
  if (xs_m.size() < 3) {
    rep.regime = TailRegime::inconclusive;
    rep.note = "fewer than 3 nonzero tail estimates";
    return rep;
  }
  const LinearFit exp_fit = least_squares(xs_m, ys);
  const LinearFit poly_fit = least_squares(xs_logm, ys);
  rep.r2_exponential = exp_fit.r_squared;
  rep.r2_polynomial = poly_fit.r_squared;
  if (exp_fit.slope >= 0.0 && poly_fit.slope >= 0.0) {
    rep.regime = TailRegime::inconclusive;
    rep.note = "tails not decreasing; alpha too aggressive";
    return rep;
  }
  const double gap = rep.r2_exponential - rep.r2_polynomial;
  if (std::fabs(gap) < 0.05) {
    rep.regime = TailRegime::inconclusive;
    rep.note = "r^2 contest tied";
  } else {
    rep.regime = gap > 0.0 ? TailRegime::exponential : TailRegime::polynomial;
  }
  return rep;
}

/// Autocovariances of f(y) from one long path: bias-corrected overlapping
/// pairs, block-based standard errors, and the running sum of |gamma|.
struct AutocovarianceTable {
  std::vector<std::int64_t> lags;  // 0..max_lag
  std::vector<double> gamma;
  std::vector<double> se;
  std::vector<double> abs_partial_sum;  // sum_{1<=j<=lag} |gamma_j|
  double mean = 0.0;                    // mean of f(y)
  double second_moment = 0.0;           // E f(y)^2 estimate
  std::int64_t n = 0;
};

inline AutocovarianceTable autocovariance_from_series(std::span<const double> xs,
                                                      std::int64_t max_lag,
                                                      std::size_t blocks = 32) {
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  if (max_lag < 0 || n < 4 * (max_lag + 1)) {
    throw std::invalid_argument("autocovariance: series too short for max_lag");
  }
  AutocovarianceTable t;
  t.n = n;
  t.mean = mean_of(xs);
  double m2 = 0.0;
  for (double v : xs) m2 += v * v;
  t.second_moment = m2 / static_cast<double>(n);
  // keep every block long enough to hold lagged pairs
  const std::size_t max_blocks = static_cast<std::size_t>(n / (2 * (max_lag + 1)));
  blocks = std::max<std::size_t>(2, std::min(blocks, max_blocks));
  t.lags.resize(static_cast<std::size_t>(max_lag + 1));
  t.gamma.resize(static_cast<std::size_t>(max_lag + 1));
  t.se.resize(static_cast<std::size_t>(max_lag + 1));
  t.abs_partial_sum.resize(static_cast<std::size_t>(max_lag + 1));

  const std::int64_t block_len = n / static_cast<std::int64_t>(blocks);
  std::vector<double> block_vals(blocks);
  double abs_sum = 0.0;
  for (std::int64_t k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::int64_t i = 0; i + k < n; ++i) {
      s += (xs[static_cast<std::size_t>(i)] - t.mean) *
           (xs[static_cast<std::size_t>(i + k)] - t.mean);
    }
    const double g = s / static_cast<double>(n - k);
    t.lags[static_cast<std::size_t>(k)] = k;
    t.gamma[static_cast<std::size_t>(k)] = g;
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::int64_t lo = static_cast<std::int64_t>(b) * block_len;
      const std::int64_t hi = lo + block_len;
      double bs = 0.0;
      std::int64_t cnt = 0;
      for (std::int64_t i = lo; i + k < hi; ++i) {
        bs += (xs[static_cast<std::size_t>(i)] - t.mean) *
              (xs[static_cast<std::size_t>(i + k)] - t.mean);
        ++cnt;
      }
      block_vals[b] = cnt > 0 ? bs / static_cast<double>(cnt) : 0.0;
    }
    t.se[static_cast<std::size_t>(k)] =
        stddev_of(block_vals) / std::sqrt(static_cast<double>(blocks));
    if (k >= 1) abs_sum += std::fabs(g);
    t.abs_partial_sum[static_cast<std::size_t>(k)] = abs_sum;
  }
  return t;
}

inline AutocovarianceTable autocovariance(const ModelSpec& model, const Transform& f,
                                          std::int64_t max_lag, std::int64_t path_n,
                                          std::int64_t depth, const SeedSpec& seed) {
  const Path p = simulate_path(model, path_n, depth, seed.with(0, Purpose::calibration));
  std::vector<double> xs(p.y.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = f.apply(p.y[i]);
  return autocovariance_from_series(xs, max_lag);
}

/// Short-memory certificate: measured partial sums plus the geometric tail
/// bound 4 ||eta||_2 C rho^K / (1 - rho) from the fitted L2 decay.
struct SummabilityReport {
  bool certified = false;
  double partial_sum = 0.0;  // sum_{k=1..K} |gamma_k|
  double tail_bound = 0.0;
  double total_bound = 0.0;
  std::string note;
};

inline SummabilityReport summability_check(const AutocovarianceTable& table,
                                           const DecayFit& decay) {
  SummabilityReport r;
  r.partial_sum = table.abs_partial_sum.empty() ? 0.0 : table.abs_partial_sum.back();
  const double eta_l2 = std::sqrt(std::max(0.0, table.second_moment));
  if (decay.degenerate) {
    double max_err = 0.0;
    for (double e : decay.errors) max_err = std::max(max_err, e);
    if (max_err <= 1e-12) {
      r.certified = true;
      r.tail_bound = 0.0;
      r.total_bound = r.partial_sum;
      r.note = "coupling exact; tail bound 0";
    } else {
      r.note = "decay fit degenerate; cannot certify";
    }
    return r;
  }
  if (!(decay.rate < 1.0)) {
    r.note = "fitted rate >= 1; cannot certify";
    return r;
  }
  const double K = static_cast<double>(table.lags.empty() ? 0 : table.lags.back());
  const double c_hat = std::exp(decay.intercept);
  r.tail_bound = 4.0 * eta_l2 * c_hat * std::pow(decay.rate, K) / (1.0 - decay.rate);
  r.total_bound = r.partial_sum + r.tail_bound;
  r.certified = true;
  return r;
}

}  // namespace augarch
