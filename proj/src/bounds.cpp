#include "bounds.hpp"

#include <cmath>

#include "error.hpp"
#include "quad.hpp"
#include "specfun.hpp"

namespace fpt {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gauss_kernel(double d, double s) {
  return d / (std::sqrt(2.0 * kPi) * s * std::sqrt(s)) *
         std::exp(-d * d / (2.0 * s));
}

}  // namespace

double density_upper_bound(const PiecewiseLinearDrift& drift, double x0,
                           double c, double t) {
  if (!(x0 < c)) fail(errc::barrier_not_above, "density_upper_bound: x0 < c");
  if (!(t > 0.0)) fail(errc::invalid_argument, "density_upper_bound: t > 0");
  double d = c - x0;
  double g = antiderivative_diff(drift, x0, c);
  double m = m_constant(drift);
  return gauss_kernel(d, t) * std::exp(g - 1.5 * m * t);
}

ErrorBudget crossing_diff_bound(double m1, double m2, double x0, double c,
                                double horizon, double eps) {
  if (!(x0 < c)) fail(errc::barrier_not_above, "crossing_diff_bound: x0 < c");
  if (!(horizon > 0.0) || m1 < 0.0 || m2 < 0.0 || eps < 0.0)
    fail(errc::invalid_argument, "crossing_diff_bound: bad parameters");

  const double d = c - x0;
  const double t_half = 0.5 * horizon;

  // s in (0, T/2]: substitute s = d^2/(2 w^2); the s^{-3/2} e^{-d^2/2s}
  // singularity becomes a plain Gaussian in w.
  double w_mid = d / std::sqrt(2.0 * t_half);      // w at s = T/2
  double w_cap = std::sqrt(w_mid * w_mid + 45.0);  // e^{-w^2} below 1e-19
  auto left_part = [&](double w) {
    double s = d * d / (2.0 * w * w);
    return std::exp(-w * w) * (m1 + 1.0 / std::sqrt(2.0 * kPi * (horizon - s)));
  };
  double integral =
      (2.0 / std::sqrt(kPi)) * integrate(left_part, w_mid, w_cap, 1e-8);

  // s in [T/2, T]: substitute s = T - w^2; the 2w Jacobian cancels the
  // (T-s)^{-1/2} singularity.
  auto right_part = [&](double w) {
    double s = horizon - w * w;
    double h = gauss_kernel(d, s);
    return 2.0 * w * h * m1 + std::sqrt(2.0 / kPi) * h;
  };
  integral += integrate(right_part, 0.0, std::sqrt(t_half), 1e-8);

  double prefactor = 2.0 * horizon * m2 * std::exp(1.5 * m2 * horizon) *
                     std::exp(m1 * d);
  return ErrorBudget{eps, horizon, m1, m2, integral, prefactor * integral * eps};
}

double anderson_crossing(double mu, double h, double d) {
  if (!(h > 0.0) || !(d > 0.0))
    fail(errc::invalid_argument, "anderson_crossing: h > 0 and d > 0 required");
  double rt = std::sqrt(h);
  double first = 1.0 - specfun::normal_cdf((-mu * h + d) / rt);
  double second =
      std::exp(2.0 * mu * d + specfun::log_normal_cdf((-mu * h - d) / rt));
  return first + second;
}

}  // namespace fpt
