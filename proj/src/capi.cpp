#include "fpt/fpt.h"

#include <new>
#include <string>

#include "bounds.hpp"
#include "config.hpp"
#include "drift.hpp"
#include "error.hpp"
#include "expr.hpp"
#include "invert.hpp"
#include "lapsolve.hpp"
#include "mc.hpp"

struct fpt_drift {
  fpt::PiecewiseLinearDrift pw;
  double m1;
  double m2;
};

namespace {

thread_local std::string g_last_error;

fpt_status status_of(fpt::errc code) {
  using fpt::errc;
  switch (code) {
    case errc::syntax_error:
    case errc::unknown_identifier:
      return FPT_ERR_PARSE;
    case errc::missing_field:
    case errc::unknown_field:
    case errc::type_mismatch:
    case errc::constraint_violation:
    case errc::invalid_config:
      return FPT_ERR_CONFIG;
    case errc::io_error:
      return FPT_ERR_IO;
    default:
      return fpt::is_usage_error(code) ? FPT_ERR_ARGUMENT : FPT_ERR_NUMERIC;
  }
}

template <typename Body>
fpt_status wrap(const Body& body) {
  try {
    body();
    g_last_error.clear();
    return FPT_OK;
  } catch (const fpt::error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FPT_ERR_NUMERIC;
  }
}

fpt_status require(bool ok, const char* message) {
  if (ok) return FPT_OK;
  g_last_error = message;
  return FPT_ERR_ARGUMENT;
}

fpt::InversionConfig to_inversion(const fpt_inversion* inv) {
  fpt::InversionConfig cfg;
  if (inv == nullptr) return cfg;
  cfg.method = inv->use_gaver_stehfest ? fpt::InversionMethod::gaver_stehfest
                                       : fpt::InversionMethod::euler_summation;
  cfg.terms = inv->terms;
  if (inv->target_rel_tol > 0.0) cfg.target_rel_tol = inv->target_rel_tol;
  return cfg;
}

fpt_inversion from_inversion(const fpt::InversionConfig& cfg) {
  return fpt_inversion{
      cfg.method == fpt::InversionMethod::gaver_stehfest ? 1 : 0, cfg.terms,
      cfg.target_rel_tol};
}

double drift_m1(const fpt::PiecewiseLinearDrift& pw) {
  auto [lo, hi] = fpt::extremes(pw);
  return std::max(std::abs(lo), std::abs(hi));
}

double drift_m2(const fpt::PiecewiseLinearDrift& pw) {
  double lip = 0.0;
  for (double a : pw.slopes) lip = std::max(lip, std::abs(a));
  return lip;
}

}  // namespace

extern "C" {

const char* fpt_last_error(void) { return g_last_error.c_str(); }

fpt_status fpt_drift_piecewise(const double* breakpoints, size_t n_breakpoints,
                               const double* slopes, const double* intercepts,
                               size_t n_segments, fpt_drift** out) {
  if (fpt_status s = require(out && slopes && intercepts &&
                                 (breakpoints || n_breakpoints == 0),
                             "fpt_drift_piecewise: null argument"))
    return s;
  return wrap([&] {
    auto pw = fpt::make_piecewise(
        std::vector<double>(breakpoints, breakpoints + n_breakpoints),
        std::vector<double>(slopes, slopes + n_segments),
        std::vector<double>(intercepts, intercepts + n_segments));
    *out = new fpt_drift{pw, drift_m1(pw), drift_m2(pw)};
  });
}

fpt_status fpt_drift_expression(const char* expression, double lo, double hi,
                                int resolution, double m1, double m2,
                                fpt_drift** out) {
  if (fpt_status s = require(out && expression,
                             "fpt_drift_expression: null argument"))
    return s;
  return wrap([&] {
    fpt::Expression e = fpt::parse_expression(expression);
    auto fn = fpt::make_drift_function(
        [e](double x) { return e.eval(x); }, lo, hi,
        m1 > 0.0 ? std::optional<double>(m1) : std::nullopt,
        m2 > 0.0 ? std::optional<double>(m2) : std::nullopt);
    auto pw = fpt::linearize(fn, lo, hi, resolution);
    *out = new fpt_drift{std::move(pw), fn.m1, fn.m2};
  });
}

void fpt_drift_free(fpt_drift* drift) { delete drift; }

fpt_status fpt_drift_value(const fpt_drift* drift, double x, double* out) {
  if (fpt_status s = require(drift && out, "fpt_drift_value: null argument"))
    return s;
  return wrap([&] { *out = drift->pw.eval(x); });
}

fpt_status fpt_drift_constants(const fpt_drift* drift, double* m1, double* m2) {
  if (fpt_status s =
          require(drift && m1 && m2, "fpt_drift_constants: null argument"))
    return s;
  *m1 = drift->m1;
  *m2 = drift->m2;
  return FPT_OK;
}

fpt_status fpt_laplace_transform(const fpt_drift* drift, double x0, double c,
                                 double lambda_re, double lambda_im,
                                 double* out_re, double* out_im) {
  if (fpt_status s = require(drift && out_re && out_im,
                             "fpt_laplace_transform: null argument"))
    return s;
  return wrap([&] {
    fpt::cplx v =
        fpt::laplace_fpt(drift->pw, x0, c, fpt::cplx(lambda_re, lambda_im));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

fpt_status fpt_cdf(const fpt_drift* drift, double x0, double c, double t,
                   const fpt_inversion* inv, double* out) {
  if (fpt_status s = require(drift && out, "fpt_cdf: null argument")) return s;
  return wrap([&] {
    fpt::FirstPassageQuery q{drift->pw, x0, c};
    *out = fpt::first_passage_cdf(q, t, to_inversion(inv));
  });
}

fpt_status fpt_density(const fpt_drift* drift, double x0, double c, double t,
                       const fpt_inversion* inv, double* out) {
  if (fpt_status s = require(drift && out, "fpt_density: null argument"))
    return s;
  return wrap([&] {
    fpt::FirstPassageQuery q{drift->pw, x0, c};
    *out = fpt::first_passage_density(q, t, to_inversion(inv));
  });
}

fpt_status fpt_survival_curve(const fpt_drift* drift, double x0, double c,
                              const double* times, size_t n_times,
                              const fpt_inversion* inv, double* survival,
                              double* density) {
  if (fpt_status s = require(drift && times && survival && n_times > 0,
                             "fpt_survival_curve: null argument"))
    return s;
  return wrap([&] {
    fpt::FirstPassageQuery q{drift->pw, x0, c};
    fpt::SurvivalCurve curve =
        fpt::survival_curve(q, std::vector<double>(times, times + n_times),
                            to_inversion(inv), density != nullptr);
    for (size_t i = 0; i < n_times; ++i) {
      survival[i] = curve.survival[i];
      if (density) density[i] = curve.density[i];
    }
  });
}

fpt_status fpt_density_bound(const fpt_drift* drift, double x0, double c,
                             double t, double* out) {
  if (fpt_status s = require(drift && out, "fpt_density_bound: null argument"))
    return s;
  return wrap([&] { *out = fpt::density_upper_bound(drift->pw, x0, c, t); });
}

fpt_status fpt_crossing_diff_bound(double m1, double m2, double x0, double c,
                                   double horizon, double eps, double* bound,
                                   double* integral) {
  if (fpt_status s =
          require(bound != nullptr, "fpt_crossing_diff_bound: null argument"))
    return s;
  return wrap([&] {
    fpt::ErrorBudget b = fpt::crossing_diff_bound(m1, m2, x0, c, horizon, eps);
    *bound = b.bound_value;
    if (integral) *integral = b.integral;
  });
}

fpt_status fpt_mc_crossing(const fpt_drift* drift, double x0, double c,
                           const fpt_mc_options* opts, double* p_hat,
                           double* std_err) {
  if (fpt_status s = require(drift && opts && p_hat && std_err,
                             "fpt_mc_crossing: null argument"))
    return s;
  return wrap([&] {
    fpt::McConfig cfg{opts->n_paths, opts->dt, opts->seed,
                      opts->bridge_correction != 0, opts->horizon};
    const fpt::PiecewiseLinearDrift& pw = drift->pw;
    auto mu = [&pw](double x) { return pw.eval(x); };
    fpt::McEstimate est = opts->antithetic
                              ? fpt::estimate_crossing_antithetic(mu, x0, c, cfg)
                              : fpt::estimate_crossing(mu, x0, c, cfg);
    *p_hat = est.p_hat;
    *std_err = est.std_err;
  });
}

fpt_status fpt_config_load(const char* path, fpt_run_config* out) {
  if (fpt_status s = require(path && out, "fpt_config_load: null argument"))
    return s;
  return wrap([&] {
    fpt::RunConfig cfg = fpt::load_config(path);
    fpt::DriftFunction fn = cfg.drift_function();
    fpt::PiecewiseLinearDrift pw = cfg.build_drift();
    out->drift = new fpt_drift{std::move(pw), fn.m1, fn.m2};
    out->x0 = cfg.x0;
    out->barrier = cfg.barrier;
    out->inversion = from_inversion(cfg.inversion);
    out->t_max = cfg.t_max;
    out->steps = cfg.steps;
    out->has_mc = cfg.has_mc ? 1 : 0;
    out->mc = fpt_mc_options{cfg.mc.n_paths, cfg.mc.dt, cfg.mc.seed,
                             cfg.mc.bridge_correction ? 1 : 0, cfg.mc.horizon,
                             0};
    out->m1 = fn.m1;
    out->m2 = fn.m2;
  });
}

void fpt_run_config_free(fpt_run_config* config) {
  if (config == nullptr) return;
  fpt_drift_free(config->drift);
  config->drift = nullptr;
}

}  // extern "C"
