#pragma once

#include "drift.hpp"

namespace fpt {

struct ErrorBudget {
  double epsilon;
  double horizon;
  double m1;
  double m2;
  double integral;     // the time integral in the certificate
  double bound_value;  // full certified bound on |P_n - P|
};

// Pointwise upper bound on the first-passage density:
// (c-x0)/(sqrt(2 pi) t^{3/2}) exp(G(c)-G(x0) - 3Mt/2 - (c-x0)^2/(2t)),
// with G an antiderivative of mu and M = m_constant(drift).
double density_upper_bound(const PiecewiseLinearDrift& drift, double x0,
                           double c, double t);

// Certified bound on the crossing-probability error of a drift approximation
// with sup-error eps, horizon T, |mu| <= m1 and Lipschitz constant m2:
// 2 T m2 e^{3 m2 T / 2} e^{m1 (c-x0)} * integral * eps, where
// integral = int_0^T (c-x0)/(sqrt(2 pi) s^{3/2}) e^{-(c-x0)^2/(2s)}
//            (m1 + 1/sqrt(2 pi (T-s))) ds.
ErrorBudget crossing_diff_bound(double m1, double m2, double x0, double c,
                                double horizon, double eps);

// Exact probability that Brownian motion with constant drift mu, started d
// below the barrier, crosses it within horizon h:
// 1 - Phi((-mu h + d)/sqrt(h)) + e^{2 mu d} Phi((-mu h - d)/sqrt(h)).
double anderson_crossing(double mu, double h, double d);

}  // namespace fpt
