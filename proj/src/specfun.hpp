#pragma once

#include <complex>

namespace fpt::specfun {

using cplx = std::complex<double>;

// Gamma function on the complex plane (principal branch), Lanczos
// approximation with reflection for Re z < 0.5. Throws on poles.
cplx gamma(cplx z);
cplx log_gamma(cplx z);

// Rising factorial (a)_k = a(a+1)...(a+k-1), (a)_0 = 1.
cplx pochhammer(cplx a, unsigned k);

// Confluent hypergeometric series 1 + sum_k (a)_k/(b)_k x^k/k!.
// kummer_psi throws series_diverged when no evaluation route reaches an
// estimated relative error below 1e-6; the checked variant reports the
// estimate instead so callers can fall back.
struct kummer_value {
  cplx value;
  double err;  // estimated relative error (machine-cancellation + truncation)
};
kummer_value kummer_psi_checked(cplx a, double b, cplx x);
cplx kummer_psi(cplx a, double b, cplx x);

// Fundamental solution pair of 1/2 y'' + (a_seg x + b_seg) y' - lambda y = 0
// on a segment with slope a_seg != 0, evaluated at x. With vertex
// x* = -b_seg/a_seg and z = -a_seg (x - x*)^2:
//   e1 = Psi(alpha, 1/2; z)              (even about the vertex)
//   e2 = (x - x*) Psi(alpha + 1/2, 3/2; z)  (odd about the vertex)
// where alpha = -lambda / (2 a_seg). At the vertex the pair reduces to
// (1, 0, 0, 1). `reliable` is false when any of the underlying series
// evaluations lost too much precision.
struct basis_eval {
  cplx e1, de1, e2, de2;
  bool reliable;
};
basis_eval kummer_basis(double a_seg, double b_seg, cplx lambda, double x);

// Standard normal CDF, its logarithm, and its inverse.
double normal_cdf(double y);
double log_normal_cdf(double y);
double normal_quantile(double p);

}  // namespace fpt::specfun
