// Experiment driver: config-driven Monte Carlo experiments over augmented
// GARCH(1,1) models, with deterministic seeding and CSV/JSON outputs.
//
// Exit codes: 0 success, 1 error (invalid config, domain violation),
// 2 paper-precondition refusal.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "augarch/asymptotics.hpp"
#include "augarch/conditions.hpp"
#include "augarch/csv.hpp"
#include "augarch/dependence.hpp"
#include "augarch/model.hpp"
#include "augarch/parallel.hpp"
#include "augarch/rng.hpp"
#include "augarch/simulate.hpp"
#include "augarch/stats.hpp"
#include "augarch/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace augarch;

namespace {

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("config: unknown key '" + where + "." + key + "'");
    }
  }
}

double get_num(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) {
    throw std::invalid_argument("config: '" + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

std::int64_t get_int(const json& obj, const std::string& key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) {
    throw std::invalid_argument("config: '" + key + "' must be an integer");
  }
  return obj.at(key).get<std::int64_t>();
}

std::vector<std::int64_t> get_int_list(const json& obj, const std::string& key,
                                       std::vector<std::int64_t> fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_array()) throw std::invalid_argument("config: '" + key + "' must be a list");
  std::vector<std::int64_t> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number_integer()) throw std::invalid_argument("config: '" + key + "' entries must be integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

std::vector<double> get_num_list(const json& obj, const std::string& key,
                                 std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_array()) throw std::invalid_argument("config: '" + key + "' must be a list");
  std::vector<double> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number()) throw std::invalid_argument("config: '" + key + "' entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

InnovationDist parse_innovation(const json& block) {
  reject_unknown_keys(block, {"kind", "df"}, "model.innovation");
  const std::string kind = block.value("kind", "standard-normal");
  if (kind == "standard-normal") return InnovationDist::standard_normal();
  if (kind == "student-t") return InnovationDist::student_t(get_num(block, "df", 5.0));
  if (kind == "uniform") return InnovationDist::uniform();
  if (kind == "two-point") return InnovationDist::two_point();
  if (kind == "centered-exponential") return InnovationDist::centered_exponential();
  throw std::invalid_argument("config: unknown innovation kind '" + kind + "'");
}

CoeffExpr parse_coeff(const json& block, const std::string& where) {
  reject_unknown_keys(block, {"k0", "k1", "k2", "k3", "k4"}, where);
  CoeffExpr e;
  e.k0 = get_num(block, "k0", 0.0);
  e.k1 = get_num(block, "k1", 0.0);
  e.k2 = get_num(block, "k2", 0.0);
  e.k3 = get_num(block, "k3", 0.0);
  e.k4 = get_num(block, "k4", 0.0);
  return e;
}

ModelSpec parse_model(const json& block) {
  reject_unknown_keys(block,
                      {"family", "params", "innovation", "c", "g", "link",
                       "nonnegativity_declared"},
                      "model");
  std::optional<InnovationDist> innovation;
  if (block.contains("innovation")) innovation = parse_innovation(block.at("innovation"));
  if (block.contains("family")) {
    std::map<std::string, double> params;
    if (block.contains("params")) {
      for (const auto& [k, v] : block.at("params").items()) {
        if (!v.is_number()) throw std::invalid_argument("config: model.params values must be numbers");
        params[k] = v.get<double>();
      }
    }
    ModelSpec m = make_builtin(block.at("family").get<std::string>(), params, innovation);
    if (block.contains("nonnegativity_declared")) {
      m.finalize_nonneg(block.at("nonnegativity_declared").get<bool>());
    }
    return m;
  }
  if (!block.contains("c") || !block.contains("g") || !block.contains("link")) {
    throw std::invalid_argument("config: model needs either 'family' or raw 'c'/'g'/'link'");
  }
  ModelSpec m;
  m.c = parse_coeff(block.at("c"), "model.c");
  m.g = parse_coeff(block.at("g"), "model.g");
  const json& link = block.at("link");
  reject_unknown_keys(link, {"kind", "delta"}, "model.link");
  const std::string kind = link.value("kind", "polynomial");
  if (kind == "polynomial") {
    m.link = LinkFunction::polynomial(get_num(link, "delta", 1.0));
  } else if (kind == "exponential") {
    m.link = LinkFunction::exponential();
  } else {
    throw std::invalid_argument("config: unknown link kind '" + kind + "'");
  }
  if (innovation) m.innovation = *innovation;
  if (block.contains("nonnegativity_declared")) {
    m.finalize_nonneg(block.at("nonnegativity_declared").get<bool>());
  } else {
    m.finalize_nonneg();
  }
  return m;
}

Transform parse_transform(const json& block) {
  reject_unknown_keys(block, {"kind", "nu"}, "transform");
  const std::string kind = block.value("kind", "power-abs");
  const double nu = get_num(block, "nu", 1.0);
  if (kind == "power-abs") return Transform::power_abs(nu);
  if (kind == "signed-power") return Transform::signed_power(nu);
  throw std::invalid_argument("config: unknown transform kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// JSON helpers for reports
// ---------------------------------------------------------------------------

json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json to_json(const MomentEstimate& e) {
  return json{{"quantity", e.quantity},       {"order", e.order},
              {"point", json_number(e.point)}, {"ci_low", json_number(e.ci_low)},
              {"ci_high", json_number(e.ci_high)}, {"method", method_name(e.method)},
              {"samples", e.samples}};
}

json to_json(const ConditionReport& r) {
  json j{{"condition", condition_name(r.condition)},
         {"verdict", verdict_name(r.verdict)},
         {"converse_applies", r.converse_applies},
         {"note", r.note}};
  if (r.theta) j["theta"] = *r.theta;
  json ev = json::array();
  for (const MomentEstimate& e : r.evidence) ev.push_back(to_json(e));
  j["evidence"] = ev;
  return j;
}

json to_json(const DistributionalTest& t) {
  return json{{"kind", t.kind},
              {"reference", t.reference},
              {"sample_size", t.sample_size},
              {"statistic", t.statistic},
              {"p_approx", t.p_approx},
              {"threshold", t.threshold},
              {"pass", t.pass},
              {"gate", t.gate == GateStatus::pass ? "pass" : "warn"},
              {"gate_message", t.gate_message}};
}

json to_json(const DecayFit& f) {
  return json{{"rate", f.rate},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"rate_band", {f.rate_band.lo, f.rate_band.hi}},
              {"used_points", f.used_points},
              {"degenerate", f.degenerate},
              {"contracting", f.contracting},
              {"precondition_verified", f.precondition_verified},
              {"eta_l2", f.eta_l2},
              {"reps", f.reps}};
}

// ---------------------------------------------------------------------------
// run context: output files, manifest, effective config echo
// ---------------------------------------------------------------------------

struct RunContext {
  ModelSpec model;
  Transform transform = Transform::power_abs(1.0);
  json experiment;  // raw experiment block
  std::string kind;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  fs::path out_dir;
  json effective;  // effective config echo, filled as defaults materialize

  std::vector<fs::path> written;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  fs::path file(const std::string& name) {
    fs::create_directories(out_dir);
    fs::path p = out_dir / name;
    written.push_back(p);
    return p;
  }

  void set_param(const std::string& key, const json& value) {
    effective["experiment"][key] = value;
  }

  SeedSpec seeds() const { return SeedSpec{seed, 0, Purpose::generic}; }

  void write_report(const json& report) {
    const fs::path p = file("report.json");
    std::ofstream out(p);
    out << report.dump(2) << "\n";
  }

  void write_manifest() {
    json outputs = json::object();
    for (const fs::path& p : written) {
      if (p.filename() == "manifest.json") continue;
      outputs[p.filename().string()] = fnv1a_file(p.string());
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest{{"version", kVersion},
                  {"config", effective},
                  {"wall_time_seconds", wall},
                  {"outputs", outputs}};
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }

  void remove_partial_outputs() {
    for (const fs::path& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

// depth policy: explicit > certificate-based > log-moment-only default
std::int64_t resolve_depth(RunContext& ctx, std::int64_t requested, double tol,
                           json& warnings) {
  if (requested > 0) {
    ctx.set_param("depth", requested);
    return requested;
  }
  const auto cert = contraction_certificate(ctx.model, CheckBudget{}, ctx.seeds());
  std::int64_t depth;
  if (cert) {
    depth = truncation_depth(ctx.model, tol, cert->rho);
  } else if (is_constant(ctx.model.c) && constant_value(ctx.model.c) == 0.0) {
    depth = 1;
  } else {
    depth = kLogMomentOnlyDepth;
    warnings.push_back(
        "no geometric contraction certificate (log-moment-only regime): "
        "using default depth " +
        std::to_string(depth));
  }
  ctx.set_param("depth", depth);
  return depth;
}

// E f(y)^2 gate for the FCLT family of checks. The moment verdict is decisive
// only when the converse applies (EQ9); a failed sufficient route without the
// converse downgrades to a warning.
Gate moment_gate(const ConditionReport& r) {
  Gate g;
  if (r.verdict == Verdict::holds) return g;
  if (r.verdict == Verdict::fails && r.converse_applies) {
    g.status = GateStatus::refuse;
    g.message = "precondition " + condition_name(r.condition) + " fails" +
                (r.note.empty() ? "" : " (" + r.note + ")");
    return g;
  }
  g.status = GateStatus::warn;
  g.message = "precondition " + condition_name(r.condition) +
              (r.verdict == Verdict::fails ? " sufficient route fails; moment undecided"
                                           : " inconclusive");
  return g;
}

ConditionReport second_moment_condition(const ModelSpec& model, const Transform& f,
                                        double moment_factor, const SeedSpec& seed) {
  // E |f(y)|^{2/moment_factor...}: for f = |x|^nu the requirement
  // E f(y)^2 < inf is EQ10 at nu (polynomial) or EQ11 at mu > nu (exponential).
  const double nu = f.nu * moment_factor;
  if (model.link.kind == LinkKind::polynomial) {
    return check_power_moment(model, nu, CheckBudget{}, seed);
  }
  return check_exp_moment(model, 2.0 * nu, CheckBudget{}, seed);
}

std::int64_t resolve_lag_window(RunContext& ctx, std::int64_t requested, std::int64_t depth,
                                json& warnings) {
  if (requested >= 0) {
    ctx.set_param("lag_window", requested);
    return requested;
  }
  // L from the fitted geometric decay at relative tolerance 1e-3
  const DecayFit fit =
      l2_coupling_error(ctx.model, ctx.transform, {1, 2, 4, 6, 8, 12, 16, 20},
                        20000, depth, ctx.seeds(), true, ctx.workers);
  std::int64_t lag;
  if (fit.degenerate) {
    double max_err = 0.0;
    for (double e : fit.errors) max_err = std::max(max_err, e);
    lag = max_err <= 1e-12 ? 0 : 50;
    if (lag == 50) warnings.push_back("decay fit degenerate; lag window defaulted to 50");
  } else if (!(fit.rate < 1.0)) {
    lag = 50;
    warnings.push_back("decay fit not contracting; lag window defaulted to 50");
  } else {
    lag = static_cast<std::int64_t>(std::ceil(std::log(1e-3) / std::log(fit.rate)));
    lag = std::max<std::int64_t>(1, std::min<std::int64_t>(lag, 400));
  }
  ctx.set_param("lag_window", lag);
  return lag;
}

// ---------------------------------------------------------------------------
// experiments
// ---------------------------------------------------------------------------

void run_simulate(RunContext& ctx) {
  json warnings = json::array();
  const std::int64_t n = get_int(ctx.experiment, "n", 10000);
  const double tol = get_num(ctx.experiment, "tol", 1e-12);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0), tol, warnings);
  ctx.set_param("n", n);
  ctx.set_param("tol", tol);
  const Path p = simulate_path(ctx.model, n, depth, SeedSpec{ctx.seed, 0, Purpose::path});
  CsvWriter csv(ctx.file("path.csv").string(), {"k", "eps", "lambda_sigma2", "sigma2", "y"});
  for (std::int64_t k = 1; k <= n; ++k) {
    csv.row({static_cast<double>(k), p.eps_at(k), p.lambda_sigma2(k),
             p.sigma2[static_cast<std::size_t>(k - 1)], p.y[static_cast<std::size_t>(k - 1)]});
  }
  csv.close();
  ctx.write_report(json{{"experiment", "simulate"},
                        {"n", n},
                        {"depth", depth},
                        {"overflow", p.overflow},
                        {"warnings", warnings}});
}

void run_couple(RunContext& ctx) {
  json warnings = json::array();
  const std::int64_t n = get_int(ctx.experiment, "n", 10000);
  const std::int64_t m = get_int(ctx.experiment, "m", 8);
  const double tol = get_num(ctx.experiment, "tol", 1e-12);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0), tol, warnings);
  ctx.set_param("n", n);
  ctx.set_param("m", m);
  ctx.set_param("tol", tol);
  const CoupledPath cp = simulate_coupled(ctx.model, n, m, depth,
                                          SeedSpec{ctx.seed, 0, Purpose::path});
  CsvWriter csv(ctx.file("coupled_path.csv").string(),
                {"k", "eps", "lambda_sigma2", "sigma2", "y", "y_m", "residual"});
  for (std::int64_t k = 1; k <= n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    csv.row({static_cast<double>(k), cp.base.eps_at(k), cp.base.lambda_sigma2(k),
             cp.base.sigma2[i], cp.base.y[i], cp.y_m[i], cp.residual[i]});
  }
  csv.close();
  ctx.write_report(json{{"experiment", "couple"},
                        {"n", n},
                        {"m", m},
                        {"depth", depth},
                        {"residual_identity_gap", cp.residual_identity_gap()},
                        {"warnings", warnings}});
}

void run_conditions(RunContext& ctx) {
  const double mu = get_num(ctx.experiment, "mu", 1.0);
  const double nu = get_num(ctx.experiment, "nu", 1.0);
  const double theta = get_num(ctx.experiment, "theta", 1.0);
  CheckBudget budget;
  budget.quad_nodes = static_cast<int>(get_int(ctx.experiment, "quad_nodes", 256));
  budget.mc_samples = static_cast<std::uint64_t>(get_int(ctx.experiment, "mc_samples", 1000000));
  ctx.set_param("mu", mu);
  ctx.set_param("nu", nu);
  ctx.set_param("theta", theta);
  ctx.set_param("quad_nodes", budget.quad_nodes);
  ctx.set_param("mc_samples", budget.mc_samples);
  const SeedSpec seed = ctx.seeds();

  std::vector<ConditionReport> reports;
  reports.push_back(check_stationarity(ctx.model, budget, seed));
  reports.push_back(check_log_c_window(ctx.model, budget, seed));
  reports.push_back(check_nonnegativity(ctx.model, budget, seed));
  reports.push_back(check_lambda_moment(ctx.model, mu, budget, seed));
  if (ctx.model.link.kind == LinkKind::polynomial) {
    reports.push_back(check_power_moment(ctx.model, nu, budget, seed));
  } else {
    reports.push_back(check_exp_moment(ctx.model, mu, budget, seed));
  }
  const LogMomentReports lm = check_log_moments(ctx.model, std::max(mu, 2.5), budget, seed);
  reports.push_back(lm.eq20);
  reports.push_back(lm.eq21);
  const std::int64_t sigma_depth = 256;
  reports.push_back(check_sigma_inverse_moment(
      ctx.model, theta, budget, seed, [&](RandomStream& rng) {
        double state = 0.0;
        for (std::int64_t j = 0; j < sigma_depth; ++j) {
          const double e = ctx.model.innovation.sample(rng);
          state = ctx.model.c_at(e) * state + ctx.model.g_at(e);
        }
        bool overflow = false;
        return detail::sigma2_from_state(ctx.model, state, 0, 0.0, 0.0, &overflow);
      }));

  CsvWriter csv(ctx.file("conditions.csv").string(),
                {"condition", "verdict", "quantity", "order", "point", "ci_low", "ci_high",
                 "method", "samples"});
  for (const ConditionReport& r : reports) {
    for (const MomentEstimate& e : r.evidence) {
      csv.row_strings({condition_name(r.condition), verdict_name(r.verdict), e.quantity,
                       format_g17(e.order), format_g17(e.point), format_g17(e.ci_low),
                       format_g17(e.ci_high), method_name(e.method),
                       std::to_string(e.samples)});
    }
    if (r.evidence.empty()) {
      csv.row_strings({condition_name(r.condition), verdict_name(r.verdict), "", "", "", "", "",
                       "", ""});
    }
  }
  csv.close();

  json jr = json::array();
  for (const ConditionReport& r : reports) jr.push_back(to_json(r));
  ctx.write_report(json{{"experiment", "conditions"}, {"reports", jr}});
}

void run_l2decay(RunContext& ctx) {
  json warnings = json::array();
  std::vector<std::int64_t> default_m;
  for (std::int64_t m = 1; m <= 24; ++m) default_m.push_back(m);
  const std::vector<std::int64_t> m_list = get_int_list(ctx.experiment, "m_list", default_m);
  const std::uint64_t reps =
      static_cast<std::uint64_t>(get_int(ctx.experiment, "reps", 100000));
  const double tol = get_num(ctx.experiment, "tol", 1e-12);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0), tol, warnings);
  ctx.set_param("m_list", m_list);
  ctx.set_param("reps", reps);
  const ConditionReport pre =
      second_moment_condition(ctx.model, ctx.transform, 1.0, ctx.seeds());
  const bool verified = pre.verdict == Verdict::holds;
  if (!verified) {
    warnings.push_back("E f(y)^2 not verified (" + condition_name(pre.condition) + " " +
                       verdict_name(pre.verdict) + "); regime marked inconclusive");
  }
  const DecayFit fit = l2_coupling_error(ctx.model, ctx.transform, m_list, reps, depth,
                                         ctx.seeds(), verified, ctx.workers);
  CsvWriter csv(ctx.file("l2decay.csv").string(), {"m", "estimate", "ci_low", "ci_high"});
  for (std::size_t i = 0; i < fit.m_values.size(); ++i) {
    csv.row({static_cast<double>(fit.m_values[i]), fit.errors[i],
             fit.ci_low.empty() ? fit.errors[i] : fit.ci_low[i],
             fit.ci_high.empty() ? fit.errors[i] : fit.ci_high[i]});
  }
  csv.close();
  ctx.write_report(json{{"experiment", "l2decay"},
                        {"fit", to_json(fit)},
                        {"precondition", to_json(pre)},
                        {"warnings", warnings}});
}

void run_tails(RunContext& ctx) {
  json warnings = json::array();
  const std::vector<std::int64_t> m_list =
      get_int_list(ctx.experiment, "m_list", {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64});
  const std::uint64_t reps =
      static_cast<std::uint64_t>(get_int(ctx.experiment, "reps", 100000));
  const double alpha = get_num(ctx.experiment, "alpha", 0.0);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  ctx.set_param("m_list", m_list);
  ctx.set_param("reps", reps);
  const CouplingTailReport rep = coupling_tail(ctx.model, ctx.transform, alpha, m_list, reps,
                                               depth, ctx.seeds(), ctx.workers);
  ctx.set_param("alpha", rep.alpha);
  CsvWriter csv(ctx.file("tails.csv").string(),
                {"level", "m", "estimate", "ci_low", "ci_high"});
  for (std::size_t i = 0; i < rep.m_values.size(); ++i) {
    csv.row_strings({"lambda", std::to_string(rep.m_values[i]), format_g17(rep.lambda_tail[i]),
                     format_g17(rep.lambda_lo[i]), format_g17(rep.lambda_hi[i])});
  }
  for (std::size_t i = 0; i < rep.m_values.size(); ++i) {
    csv.row_strings({"eta", std::to_string(rep.m_values[i]), format_g17(rep.eta_tail[i]),
                     format_g17(rep.eta_lo[i]), format_g17(rep.eta_hi[i])});
  }
  csv.close();
  CsvWriter diag(ctx.file("tm_diagnostics.csv").string(), {"m", "tm_mean", "tm_var"});
  for (std::size_t i = 0; i < rep.m_values.size(); ++i) {
    diag.row({static_cast<double>(rep.m_values[i]), rep.tm_mean[i], rep.tm_var[i]});
  }
  diag.close();
  ctx.write_report(json{{"experiment", "tails"},
                        {"alpha", rep.alpha},
                        {"regime", tail_regime_name(rep.regime)},
                        {"r2_exponential", rep.r2_exponential},
                        {"r2_polynomial", rep.r2_polynomial},
                        {"note", rep.note},
                        {"warnings", warnings}});
}

void run_acov(RunContext& ctx) {
  json warnings = json::array();
  const std::int64_t max_lag = get_int(ctx.experiment, "max_lag", 20);
  const std::int64_t path_n = get_int(ctx.experiment, "path_n", 1000000);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  ctx.set_param("max_lag", max_lag);
  ctx.set_param("path_n", path_n);
  const AutocovarianceTable t =
      autocovariance(ctx.model, ctx.transform, max_lag, path_n, depth, ctx.seeds());
  CsvWriter csv(ctx.file("acov.csv").string(), {"lag", "gamma", "se", "abs_partial_sum"});
  for (std::size_t k = 0; k < t.lags.size(); ++k) {
    csv.row({static_cast<double>(t.lags[k]), t.gamma[k], t.se[k], t.abs_partial_sum[k]});
  }
  csv.close();
  ctx.write_report(json{{"experiment", "acov"},
                        {"mean", t.mean},
                        {"second_moment", t.second_moment},
                        {"n", t.n},
                        {"warnings", warnings}});
}

void run_lrv(RunContext& ctx) {
  json warnings = json::array();
  const std::int64_t path_n = get_int(ctx.experiment, "path_n", 1000000);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  const ConditionReport pre =
      second_moment_condition(ctx.model, ctx.transform, 1.0, ctx.seeds());
  const Gate gate = moment_gate(pre);
  enforce_gate(gate);
  const std::int64_t L =
      resolve_lag_window(ctx, get_int(ctx.experiment, "lag_window", -1), depth, warnings);
  ctx.set_param("path_n", path_n);
  const LongRunVariance lrv =
      long_run_variance(ctx.model, ctx.transform, L, path_n, depth, ctx.seeds());
  if (lrv.bartlett_fallback) warnings.push_back("plug-in estimate negative; Bartlett fallback");
  CsvWriter csv(ctx.file("lrv.csv").string(), {"lag", "gamma", "se"});
  for (std::size_t k = 0; k < lrv.gamma.size(); ++k) {
    csv.row({static_cast<double>(k), lrv.gamma[k], 0.0});
  }
  csv.close();
  ctx.write_report(json{{"experiment", "lrv"},
                        {"tau2", lrv.tau2},
                        {"se", lrv.se},
                        {"lag_window", lrv.lag_window},
                        {"method", lrv.method == LrvMethod::plug_in_truncated ? "plug-in-truncated"
                                                                              : "bartlett"},
                        {"mean", lrv.mean},
                        {"precondition", to_json(pre)},
                        {"gate", gate.status == GateStatus::pass ? "pass" : "warn"},
                        {"warnings", warnings}});
}

void run_clt(RunContext& ctx, bool sup_variant) {
  json warnings = json::array();
  const std::int64_t n = get_int(ctx.experiment, "n", 4000);
  const std::uint64_t reps = static_cast<std::uint64_t>(get_int(ctx.experiment, "reps", 4000));
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  const std::int64_t cal_n = get_int(ctx.experiment, "calibration_n",
                                     std::max<std::int64_t>(1000000, 16000 * n));
  ctx.set_param("n", n);
  ctx.set_param("reps", reps);
  ctx.set_param("calibration_n", cal_n);

  const ConditionReport pre =
      second_moment_condition(ctx.model, ctx.transform, 1.0, ctx.seeds());
  const Gate gate = moment_gate(pre);
  enforce_gate(gate);

  const std::int64_t L =
      resolve_lag_window(ctx, get_int(ctx.experiment, "lag_window", -1), depth, warnings);
  const LongRunVariance lrv =
      long_run_variance(ctx.model, ctx.transform, L, cal_n, depth, ctx.seeds());
  // the mean is exactly zero for odd transforms of symmetric innovations
  const bool odd_symmetric = ctx.transform.kind == TransformKind::signed_power &&
                             ctx.model.innovation.kind != InnovationKind::centered_exponential;
  const double mean = odd_symmetric ? 0.0 : lrv.mean;

  const DistributionalTest t =
      sup_variant ? fclt_sup_check(ctx.model, ctx.transform, n, reps, lrv.tau2, mean, depth,
                                   gate, ctx.seeds(), ctx.workers)
                  : fclt_marginal_check(ctx.model, ctx.transform, n, reps, lrv.tau2, mean,
                                        depth, gate, ctx.seeds(), ctx.workers);
  // re-derive the replicate sample for the CSV (same streams)
  CsvWriter csv(ctx.file(sup_variant ? "supclt_sample.csv" : "clt_sample.csv").string(),
                {"replicate", "value"});
  {
    const double scale = std::sqrt(static_cast<double>(n)) * std::sqrt(lrv.tau2);
    for (std::uint64_t r = 0; r < reps; ++r) {
      RandomStream rng(ctx.seeds().with(r, Purpose::clt_reps));
      double sum = 0.0;
      double running_max = 0.0;
      run_path(ctx.model, n, depth, rng, [&](std::int64_t, double y) {
        sum += ctx.transform.apply(y) - mean;
        running_max = std::max(running_max, sum);
      });
      csv.row({static_cast<double>(r), (sup_variant ? running_max : sum) / scale});
    }
  }
  csv.close();
  ctx.write_report(json{{"experiment", sup_variant ? "supclt" : "clt"},
                        {"test", to_json(t)},
                        {"tau2", lrv.tau2},
                        {"mean", mean},
                        {"lag_window", L},
                        {"precondition", to_json(pre)},
                        {"warnings", warnings}});
}

void run_berry(RunContext& ctx) {
  json warnings = json::array();
  const std::vector<std::int64_t> n_grid =
      get_int_list(ctx.experiment, "n_list", {500, 2000, 8000});
  const std::uint64_t reps =
      static_cast<std::uint64_t>(get_int(ctx.experiment, "reps", 100000));
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  std::int64_t n_max = 0;
  for (std::int64_t n : n_grid) n_max = std::max(n_max, n);
  const std::int64_t cal_n = get_int(ctx.experiment, "calibration_n",
                                     std::max<std::int64_t>(4000000, 40000 * n_max));
  const std::int64_t max_lag = get_int(ctx.experiment, "max_lag", 200);
  ctx.set_param("n_list", n_grid);
  ctx.set_param("reps", reps);
  ctx.set_param("calibration_n", cal_n);
  ctx.set_param("max_lag", max_lag);

  // third-moment gate: E |f(y)|^3 < inf
  const ConditionReport pre =
      second_moment_condition(ctx.model, ctx.transform, 1.5, ctx.seeds());
  const Gate gate = moment_gate(pre);
  enforce_gate(gate);

  const Path cal = simulate_path(ctx.model, cal_n, depth,
                                 ctx.seeds().with(0, Purpose::calibration));
  std::vector<double> xs(cal.y.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = ctx.transform.apply(cal.y[i]);
  const AutocovarianceTable table = autocovariance_from_series(xs, max_lag);
  const bool odd_symmetric = ctx.transform.kind == TransformKind::signed_power &&
                             ctx.model.innovation.kind != InnovationKind::centered_exponential;
  const double mean = odd_symmetric ? 0.0 : table.mean;
  AutocovarianceTable centered = table;
  if (odd_symmetric) centered.mean = 0.0;

  const BerryEsseenCurve curve =
      berry_esseen_curve(ctx.model, ctx.transform, n_grid, reps, centered, mean, depth, gate,
                         ctx.seeds(), ctx.workers);
  CsvWriter csv(ctx.file("berry.csv").string(),
                {"n", "delta", "ci_low", "ci_high", "normalized", "b_n"});
  for (std::size_t i = 0; i < curve.n_grid.size(); ++i) {
    csv.row({static_cast<double>(curve.n_grid[i]), curve.delta[i], curve.ci_low[i],
             curve.ci_high[i], curve.normalized[i], curve.big_b_n[i]});
  }
  csv.close();

  std::vector<double> n_as_double;
  std::vector<double> log_n;
  std::vector<double> log_delta;
  for (std::size_t i = 0; i < curve.n_grid.size(); ++i) {
    n_as_double.push_back(static_cast<double>(curve.n_grid[i]));
    log_n.push_back(std::log(static_cast<double>(curve.n_grid[i])));
    log_delta.push_back(std::log(std::max(curve.delta[i], 1e-300)));
  }
  const double rho = spearman_rho(n_as_double, curve.normalized);
  const LinearFit slope = least_squares(log_n, log_delta);
  ctx.write_report(json{{"experiment", "berry"},
                        {"spearman_normalized_vs_n", rho},
                        {"log_slope", slope.slope},
                        {"precondition", to_json(pre)},
                        {"mean", mean},
                        {"warnings", warnings}});
}

void run_empproc(RunContext& ctx) {
  json warnings = json::array();
  const std::int64_t n = get_int(ctx.experiment, "n", 4000);
  const std::int64_t cdf_n = get_int(ctx.experiment, "cdf_n", 1000000);
  std::vector<double> default_s;
  for (int i = 0; i <= 10; ++i) default_s.push_back(0.1 * i);
  std::vector<double> default_t;
  for (int i = 0; i <= 10; ++i) default_t.push_back(0.1 * i);
  const std::vector<double> s_grid = get_num_list(ctx.experiment, "s_grid", default_s);
  const std::vector<double> t_grid = get_num_list(ctx.experiment, "t_grid", default_t);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  ctx.set_param("n", n);
  ctx.set_param("cdf_n", cdf_n);
  ctx.set_param("s_grid", s_grid);
  ctx.set_param("t_grid", t_grid);

  const CdfEstimate f = estimate_cdf(ctx.model, static_cast<std::uint64_t>(cdf_n), depth,
                                     ctx.seeds(), ctx.workers);
  const Path p = simulate_path(ctx.model, n, depth, ctx.seeds().with(1, Purpose::path));
  const EmpiricalProcessSurface surf = empirical_process_surface(p.y, f, s_grid, t_grid);
  CsvWriter csv(ctx.file("empproc.csv").string(), {"s", "t", "r"});
  for (std::size_t si = 0; si < s_grid.size(); ++si) {
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
      csv.row({s_grid[si], t_grid[ti], surf.values[si][ti]});
    }
  }
  csv.close();
  ctx.write_report(
      json{{"experiment", "empproc"}, {"n", n}, {"cdf_n", cdf_n}, {"warnings", warnings}});
}

void run_gamma(RunContext& ctx) {
  json warnings = json::array();
  const std::int64_t path_n = get_int(ctx.experiment, "path_n", 1000000);
  const std::int64_t cdf_n = get_int(ctx.experiment, "cdf_n", 1000000);
  std::vector<double> default_s = {0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<double> s_grid = get_num_list(ctx.experiment, "s_grid", default_s);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  std::int64_t K = get_int(ctx.experiment, "lag_truncation", -1);
  if (K < 0) K = resolve_lag_window(ctx, -1, depth, warnings);
  ctx.set_param("path_n", path_n);
  ctx.set_param("cdf_n", cdf_n);
  ctx.set_param("s_grid", s_grid);
  ctx.set_param("lag_truncation", K);

  const CdfEstimate f = estimate_cdf(ctx.model, static_cast<std::uint64_t>(cdf_n), depth,
                                     ctx.seeds(), ctx.workers);
  const CovarianceKernel kernel =
      gamma_kernel(ctx.model, f, s_grid, K, path_n, depth, ctx.seeds());
  CsvWriter csv(ctx.file("gamma.csv").string(), {"s", "s_prime", "gamma", "se"});
  for (std::size_t a = 0; a < s_grid.size(); ++a) {
    for (std::size_t b = 0; b < s_grid.size(); ++b) {
      csv.row({s_grid[a], s_grid[b], kernel.gamma[a][b], kernel.se[a][b]});
    }
  }
  csv.close();
  CsvWriter lags(ctx.file("gamma_lags.csv").string(), {"lag", "s", "s_prime", "value"});
  for (std::size_t k = 0; k < kernel.lag_contrib.size(); ++k) {
    for (std::size_t a = 0; a < s_grid.size(); ++a) {
      for (std::size_t b = 0; b < s_grid.size(); ++b) {
        lags.row({static_cast<double>(k), s_grid[a], s_grid[b], kernel.lag_contrib[k][a][b]});
      }
    }
  }
  lags.close();
  ctx.write_report(json{{"experiment", "gamma"},
                        {"lag_truncation", K},
                        {"path_n", path_n},
                        {"warnings", warnings}});
}

void run_changepoint(RunContext& ctx) {
  json warnings = json::array();
  const std::int64_t n = get_int(ctx.experiment, "n", 4000);
  const std::uint64_t reps = static_cast<std::uint64_t>(get_int(ctx.experiment, "reps", 2000));
  const std::int64_t cdf_n = get_int(ctx.experiment, "cdf_n", 1000000);
  const std::int64_t s_points = get_int(ctx.experiment, "s_points", 19);
  const std::int64_t depth = resolve_depth(ctx, get_int(ctx.experiment, "depth", 0),
                                           get_num(ctx.experiment, "tol", 1e-12), warnings);
  ctx.set_param("n", n);
  ctx.set_param("reps", reps);
  ctx.set_param("cdf_n", cdf_n);
  ctx.set_param("s_points", s_points);

  bool inject = true;
  std::string change_param = "omega";
  double change_factor = 2.0;
  double change_at = 0.5;
  if (ctx.experiment.contains("change")) {
    const json& ch = ctx.experiment.at("change");
    reject_unknown_keys(ch, {"param", "factor", "at", "inject"}, "experiment.change");
    inject = ch.value("inject", true);
    change_param = ch.value("param", std::string("omega"));
    change_factor = get_num(ch, "factor", 2.0);
    change_at = get_num(ch, "at", 0.5);
  }
  ctx.set_param("change",
                json{{"inject", inject}, {"param", change_param}, {"factor", change_factor},
                     {"at", change_at}});

  std::vector<double> s_grid;
  for (std::int64_t i = 1; i <= s_points; ++i) {
    s_grid.push_back(static_cast<double>(i) / static_cast<double>(s_points + 1));
  }
  const CdfEstimate f = estimate_cdf(ctx.model, static_cast<std::uint64_t>(cdf_n), depth,
                                     ctx.seeds(), ctx.workers);

  std::vector<double> null_stats(reps);
  parallel_replicates(reps, ctx.workers, [&](std::uint64_t r) {
    RandomStream rng(ctx.seeds().with(r, Purpose::change_null));
    std::vector<double> y(static_cast<std::size_t>(n));
    run_path(ctx.model, n, depth, rng,
             [&](std::int64_t k, double v) { y[static_cast<std::size_t>(k - 1)] = v; });
    null_stats[r] = change_point_statistic(y, f, s_grid);
  });
  CsvWriter nullcsv(ctx.file("changepoint_null.csv").string(), {"replicate", "statistic"});
  for (std::uint64_t r = 0; r < reps; ++r) {
    nullcsv.row({static_cast<double>(r), null_stats[r]});
  }
  nullcsv.close();
  std::vector<double> sorted_null = null_stats;
  std::sort(sorted_null.begin(), sorted_null.end());
  const double null_q99 = quantile_sorted(sorted_null, 0.99);

  json report{{"experiment", "changepoint"},
              {"null_q99", null_q99},
              {"n", n},
              {"warnings", warnings}};

  if (inject) {
    if (ctx.model.family.empty()) {
      throw std::invalid_argument("changepoint injection needs a family model");
    }
    std::map<std::string, double> params;
    bool found = false;
    for (const auto& [k, v] : ctx.model.family_params) {
      params[k] = k == change_param ? v * change_factor : v;
      if (k == change_param) found = true;
    }
    if (!found) {
      throw std::invalid_argument("changepoint: model has no parameter '" + change_param + "'");
    }
    if (ctx.model.family == "igarch") params.erase("beta");
    const ModelSpec post = make_builtin(ctx.model.family, params, ctx.model.innovation);
    const std::int64_t change_idx =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(change_at * static_cast<double>(n)));
    std::vector<double> alt_stats(reps);
    parallel_replicates(reps, ctx.workers, [&](std::uint64_t r) {
      const Path p = simulate_path_with_change(ctx.model, post, n, change_idx, depth,
                                               ctx.seeds().with(r, Purpose::change_alt));
      alt_stats[r] = change_point_statistic(p.y, f, s_grid);
    });
    CsvWriter altcsv(ctx.file("changepoint_alt.csv").string(), {"replicate", "statistic"});
    for (std::uint64_t r = 0; r < reps; ++r) {
      altcsv.row({static_cast<double>(r), alt_stats[r]});
    }
    altcsv.close();
    std::vector<double> sorted_alt = alt_stats;
    std::sort(sorted_alt.begin(), sorted_alt.end());
    const double alt_median = quantile_sorted(sorted_alt, 0.5);
    report["alt_median"] = alt_median;
    report["detected"] = alt_median > null_q99;
  }
  ctx.write_report(report);
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

const std::vector<std::string> kExperimentKinds = {
    "simulate", "couple", "conditions", "l2decay", "tails", "acov", "lrv",
    "clt",      "supclt", "berry",      "empproc", "gamma", "changepoint"};

int run_experiment(const std::string& config_path, const std::string& forced_kind,
                   std::optional<std::uint64_t> seed_override,
                   std::optional<std::string> out_override, unsigned workers) {
  RunContext ctx;
  json cfg;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << config_path << "'\n";
      return 1;
    }
    try {
      cfg = json::parse(in);
    } catch (const std::exception& e) {
      std::cerr << "error: config parse failure: " << e.what() << "\n";
      return 1;
    }
  }
  try {
    reject_unknown_keys(cfg, {"model", "transform", "experiment", "seed", "output"}, "<root>");
    if (!cfg.contains("model")) throw std::invalid_argument("config: missing 'model'");
    ctx.model = parse_model(cfg.at("model"));
    ctx.transform = cfg.contains("transform") ? parse_transform(cfg.at("transform"))
                                              : Transform::power_abs(1.0);
    ctx.experiment = cfg.value("experiment", json::object());
    ctx.kind = ctx.experiment.value("kind", forced_kind);
    if (ctx.kind.empty()) {
      throw std::invalid_argument("config: experiment.kind missing and no subcommand given");
    }
    if (!forced_kind.empty() && ctx.experiment.contains("kind") &&
        ctx.experiment.at("kind").get<std::string>() != forced_kind) {
      throw std::invalid_argument("config: experiment.kind conflicts with the subcommand");
    }
    if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), ctx.kind) ==
        kExperimentKinds.end()) {
      throw std::invalid_argument("config: unknown experiment kind '" + ctx.kind + "'");
    }
    ctx.seed = seed_override.value_or(
        cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 1);
    ctx.out_dir = out_override.value_or(cfg.value("output", std::string("out")));
    ctx.workers = workers;

    // effective config echo
    ctx.effective["model"] = cfg.at("model");
    if (!ctx.model.family.empty()) {
      json params = json::object();
      for (const auto& [k, v] : ctx.model.family_params) params[k] = v;
      ctx.effective["model"]["family"] = ctx.model.family;
      ctx.effective["model"]["params"] = params;
    }
    ctx.effective["model"]["innovation"] = {{"kind", ctx.model.innovation.name()}};
    ctx.effective["transform"] = {{"kind", ctx.transform.kind == TransformKind::power_abs
                                               ? "power-abs"
                                               : "signed-power"},
                                  {"nu", ctx.transform.nu}};
    ctx.effective["experiment"] = ctx.experiment;
    ctx.effective["experiment"]["kind"] = ctx.kind;
    ctx.effective["seed"] = ctx.seed;
    ctx.effective["output"] = ctx.out_dir.string();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (ctx.kind == "simulate") {
      run_simulate(ctx);
    } else if (ctx.kind == "couple") {
      run_couple(ctx);
    } else if (ctx.kind == "conditions") {
      run_conditions(ctx);
    } else if (ctx.kind == "l2decay") {
      run_l2decay(ctx);
    } else if (ctx.kind == "tails") {
      run_tails(ctx);
    } else if (ctx.kind == "acov") {
      run_acov(ctx);
    } else if (ctx.kind == "lrv") {
      run_lrv(ctx);
    } else if (ctx.kind == "clt") {
      run_clt(ctx, false);
    } else if (ctx.kind == "supclt") {
      run_clt(ctx, true);
    } else if (ctx.kind == "berry") {
      run_berry(ctx);
    } else if (ctx.kind == "empproc") {
      run_empproc(ctx);
    } else if (ctx.kind == "gamma") {
      run_gamma(ctx);
    } else if (ctx.kind == "changepoint") {
      run_changepoint(ctx);
    }
    ctx.write_manifest();
    return 0;
  } catch (const GateRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    ctx.write_report(json{{"experiment", ctx.kind}, {"refused", true}, {"reason", e.what()}});
    ctx.write_manifest();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    ctx.remove_partial_outputs();
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augarch: simulation and statistical verification for augmented GARCH(1,1)"};
  app.require_subcommand(1);
  app.footer("AUGARCH_WORKERS sets the default worker count.");

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  unsigned workers = 0;
  std::string family;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { seed_override = v; }, "master seed override");
    sub->add_option_function<std::string>(
        "--out", [&](const std::string& v) { out_override = v; }, "output directory override");
    sub->add_option("--workers", workers, "worker threads (0 = auto)");
  };

  CLI::App* run = app.add_subcommand("run", "run the experiment named in the config");
  add_common(run);
  for (const std::string& kind : kExperimentKinds) {
    CLI::App* sub = app.add_subcommand(kind, "run a '" + kind + "' experiment");
    add_common(sub);
  }
  CLI::App* describe = app.add_subcommand("describe", "print a builtin family mapping");
  describe->add_option("family", family, "family name")->required();

  CLI11_PARSE(app, argc, argv);

  if (describe->parsed()) {
    try {
      std::cout << describe_family(family) << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  for (CLI::App* sub : app.get_subcommands()) {
    const std::string name = sub->get_name();
    if (name == "describe") continue;
    return run_experiment(config_path, name == "run" ? "" : name, seed_override, out_override,
                          workers);
  }
  return 1;
}
