#pragma once

#include <cmath>
#include <functional>

#include "error.hpp"

namespace fpt {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0) fail(errc::quadrature_fail, "adaptive quadrature: max depth exceeded");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a,b]. The tolerance is applied to
// the absolute error, scaled by an initial estimate of the integral when a
// relative tolerance is requested.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol,
                 double abs_floor = 1e-300, int max_depth = 48) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  // Seed with a coarse composite pass so the tolerance has a sensible scale
  // even when the integrand is concentrated away from the midpoint.
  const int n0 = 16;
  double h = (b - a) / n0;
  double coarse = 0.0;
  for (int i = 0; i < n0; ++i) {
    double x0 = a + i * h, x1 = x0 + h;
    coarse += h / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  double tol = std::max(std::abs(coarse) * rel_tol, abs_floor);
  double total = 0.0;
  for (int i = 0; i < n0; ++i) {
    double x0 = a + i * h, x1 = x0 + h;
    double fa = f(x0), fb = f(x1), fm = f(0.5 * (x0 + x1));
    double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::adaptive_simpson_rec(f, x0, x1, fa, fm, fb, whole,
                                          tol / n0, max_depth);
  }
  return sign * total;
}

}  // namespace fpt
