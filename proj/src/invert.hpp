#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "drift.hpp"

namespace fpt {

using cplx = std::complex<double>;
using TransformFn = std::function<cplx(cplx)>;

enum class InversionMethod { euler_summation, gaver_stehfest };

struct InversionConfig {
  InversionMethod method = InversionMethod::euler_summation;
  int terms = 0;  // 0 = method default (32 euler, 14 gaver_stehfest)
  double target_rel_tol = 1e-8;

  int resolved_terms() const;
  void validate() const;
};

// Numerical inversion of a Laplace transform at time t > 0.
double invert_density(const TransformFn& transform, double t,
                      const InversionConfig& cfg);

// Inverts transform(lambda)/lambda, i.e. the transform of the CDF; result
// clipped to [0, 1].
double invert_cdf(const TransformFn& transform, double t,
                  const InversionConfig& cfg);

struct FirstPassageQuery {
  PiecewiseLinearDrift drift;
  double x0;
  double barrier;
};

struct SurvivalCurve {
  std::vector<double> times;
  std::vector<double> survival;
  std::vector<double> density;  // empty unless requested
};

// P(tau_c <= t) and f_c(t) for the query, with the small-t shortcut (the
// probability is super-exponentially small below t ~ (c-x0)^2).
double first_passage_cdf(const FirstPassageQuery& query, double t,
                         const InversionConfig& cfg);
double first_passage_density(const FirstPassageQuery& query, double t,
                             const InversionConfig& cfg);

SurvivalCurve survival_curve(const FirstPassageQuery& query,
                             const std::vector<double>& grid,
                             const InversionConfig& cfg,
                             bool with_density = false);

}  // namespace fpt
