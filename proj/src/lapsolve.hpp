#pragma once

#include <complex>
#include <vector>

#include "drift.hpp"

namespace fpt {

using cplx = std::complex<double>;

// Normalized (u, u') with an accumulated log-magnitude factor, so the actual
// solution is exp(log_scale) * (u, du). Propagation keeps max(|u|,|du|) = 1.
struct PropState {
  cplx u{1.0, 0.0};
  cplx du{0.0, 0.0};
  double log_scale = 0.0;
};

// Seed of the unique (up to scale) solution of 1/2 u'' + b0 u' - lambda u = 0
// decaying as x -> -inf, anchored at x_start: u = exp(r_plus (x - x_start))
// with r_plus = -b0 + sqrt(b0^2 + 2 lambda), Re r_plus > 0.
PropState leftmost_seed(double b0, cplx lambda, double x_start);

// Transport (u, u') across one linear-drift piece mu = a x + b, from x_from
// to x_to (either direction). Uses the closed exponential form when a = 0,
// the Kummer fundamental pair when it is numerically sound, and an exact
// Taylor recursion of the ODE otherwise.
PropState propagate_segment(double a, double b, cplx lambda, double x_from,
                            double x_to, PropState state);

// How the last propagate_segment call transported the state; exposed for
// diagnostics and tests.
enum class SegmentRoute { exponential, kummer, taylor };
SegmentRoute last_segment_route();

// Global solution u of 1/2 u'' + mu u' - lambda u = 0 with u(-inf) = 0,
// assembled left to right over the drift's segments. Immutable; evaluation
// anywhere returns a normalized state plus log scale.
class LaplaceSolution {
 public:
  LaplaceSolution(const PiecewiseLinearDrift& drift, cplx lambda,
                  const std::vector<double>& extra_points = {},
                  cplx seed_scale = cplx(1.0, 0.0));

  PropState at(double x) const;
  cplx log_u(double x) const;  // log_scale + log(u), principal branch

  // Relative residual of 1/2 u'' + mu u' - lambda u at x under central
  // differences with step h; x must be further than h from any breakpoint.
  double ode_residual(double x, double h) const;

  const PiecewiseLinearDrift& drift() const { return drift_; }
  cplx lambda() const { return lambda_; }
  const std::vector<double>& nodes() const { return drift_.breakpoints; }
  const std::vector<PropState>& node_states() const { return states_; }

 private:
  PiecewiseLinearDrift drift_;  // with extra points inserted as zero kinks
  cplx lambda_;
  std::vector<PropState> states_;  // one per breakpoint of drift_
};

LaplaceSolution solve_u(const PiecewiseLinearDrift& drift, cplx lambda,
                        const std::vector<double>& extra_points = {},
                        cplx seed_scale = cplx(1.0, 0.0));

// Laplace transform of the first-passage density: u(x0)/u(c), Re lambda > 0,
// x0 < c. Real positive lambda gives a value in (0, 1).
cplx laplace_fpt(const PiecewiseLinearDrift& drift, double x0, double c,
                 cplx lambda);

// Independent validation path: adaptive Runge-Kutta (Cash-Karp 4/5)
// integration of (u, u')' = (u', 2 lambda u - 2 mu u'), restarted at drift
// kinks, relative tolerance 1e-10, log-scaled like the analytic propagation.
PropState numeric_ode_oracle(const PiecewiseLinearDrift& drift, cplx lambda,
                             double x_start, PropState seed, double x_end);

}  // namespace fpt
