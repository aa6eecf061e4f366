/* C interface to the first-passage-time engine.
 *
 * All functions return fpt_status; outputs go through pointers. On any
 * failure the thread-local message from fpt_last_error() describes the
 * problem. Handles are opaque and must be released with their free function.
 */
#ifndef FPT_FPT_H
#define FPT_FPT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpt_status {
  FPT_OK = 0,
  FPT_ERR_ARGUMENT = 1, /* bad inputs, constraint violations */
  FPT_ERR_NUMERIC = 2,  /* series/quadrature/inversion failure */
  FPT_ERR_PARSE = 3,    /* expression syntax errors */
  FPT_ERR_CONFIG = 4,   /* config file problems */
  FPT_ERR_IO = 5
} fpt_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char* fpt_last_error(void);

/* ---- drifts ---------------------------------------------------------- */

typedef struct fpt_drift fpt_drift;

/* Continuous piecewise-linear drift: m breakpoints, m+1 (slope, intercept)
 * pairs, constant extreme segments. */
fpt_status fpt_drift_piecewise(const double* breakpoints, size_t n_breakpoints,
                               const double* slopes, const double* intercepts,
                               size_t n_segments, fpt_drift** out);

/* Parses `expression` (variable x; + - * / ^, sin cos exp tanh atan abs) and
 * linearizes it over [lo, hi] with `resolution` nodes per unit. Pass m1 <= 0
 * or m2 <= 0 to have the constants estimated on a grid. */
fpt_status fpt_drift_expression(const char* expression, double lo, double hi,
                                int resolution, double m1, double m2,
                                fpt_drift** out);

void fpt_drift_free(fpt_drift* drift);

/* mu(x) for the piecewise-linear drift. */
fpt_status fpt_drift_value(const fpt_drift* drift, double x, double* out);

/* m1 (sup |mu|) and m2 (Lipschitz bound) associated with the drift. */
fpt_status fpt_drift_constants(const fpt_drift* drift, double* m1, double* m2);

/* ---- transforms and distributions ------------------------------------ */

/* Laplace transform E[e^{-lambda tau_c}] at lambda = re + i*im, Re > 0. */
fpt_status fpt_laplace_transform(const fpt_drift* drift, double x0, double c,
                                 double lambda_re, double lambda_im,
                                 double* out_re, double* out_im);

typedef struct fpt_inversion {
  int use_gaver_stehfest; /* 0 = Euler summation (default) */
  int terms;              /* 0 = method default */
  double target_rel_tol;  /* <= 0 = default 1e-8 */
} fpt_inversion;

/* P(tau_c <= t) and the first-passage density f_c(t). `inv` may be NULL for
 * defaults. */
fpt_status fpt_cdf(const fpt_drift* drift, double x0, double c, double t,
                   const fpt_inversion* inv, double* out);
fpt_status fpt_density(const fpt_drift* drift, double x0, double c, double t,
                       const fpt_inversion* inv, double* out);

/* Survival P(tau_c > t_i) on an increasing positive grid; `density` may be
 * NULL if densities are not wanted. */
fpt_status fpt_survival_curve(const fpt_drift* drift, double x0, double c,
                              const double* times, size_t n_times,
                              const fpt_inversion* inv, double* survival,
                              double* density);

/* ---- certificates ----------------------------------------------------- */

fpt_status fpt_density_bound(const fpt_drift* drift, double x0, double c,
                             double t, double* out);

/* Bound on |P_approx(tau_c > T) - P(tau_c > T)| for a drift approximation
 * with sup-error eps; also returns the inner time integral. */
fpt_status fpt_crossing_diff_bound(double m1, double m2, double x0, double c,
                                   double horizon, double eps, double* bound,
                                   double* integral);

/* ---- Monte Carlo ------------------------------------------------------ */

typedef struct fpt_mc_options {
  uint64_t n_paths;
  double dt;
  uint64_t seed;
  int bridge_correction;
  double horizon;
  int antithetic;
} fpt_mc_options;

fpt_status fpt_mc_crossing(const fpt_drift* drift, double x0, double c,
                           const fpt_mc_options* opts, double* p_hat,
                           double* std_err);

/* ---- run configuration ------------------------------------------------ */

typedef struct fpt_run_config {
  fpt_drift* drift;
  double x0;
  double barrier;
  fpt_inversion inversion;
  double t_max;
  int steps;
  int has_mc;
  fpt_mc_options mc;
  double m1;
  double m2;
} fpt_run_config;

/* Loads and validates a config file; on success *out owns a drift handle.
 * Release with fpt_run_config_free. */
fpt_status fpt_config_load(const char* path, fpt_run_config* out);
void fpt_run_config_free(fpt_run_config* config);

#ifdef __cplusplus
}
#endif

#endif /* FPT_FPT_H */
