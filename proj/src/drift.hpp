#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace fpt {

// Continuous piecewise-linear drift mu(x) = a_i x + b_i on segment i, where
// segment i covers [x_i, x_{i+1}] with x_0 = -inf, x_{m+1} = +inf. Canonical
// form (enforced by make_piecewise) requires the two unbounded segments to be
// constant (zero slope).
struct PiecewiseLinearDrift {
  std::vector<double> breakpoints;  // x_1 < ... < x_m, may be empty
  std::vector<double> slopes;       // m+1 entries
  std::vector<double> intercepts;   // m+1 entries

  std::size_t segment_count() const { return slopes.size(); }
  // Index of the segment containing x (ties at a breakpoint go right).
  std::size_t segment_index(double x) const;
  double eval(double x) const;
  bool canonical() const {
    return slopes.front() == 0.0 && slopes.back() == 0.0;
  }
};

// Validating constructor: checks monotone breakpoints, continuity at every
// breakpoint (1e-12 relative) and constant extreme segments.
PiecewiseLinearDrift make_piecewise(const std::vector<double>& breakpoints,
                                    const std::vector<double>& slopes,
                                    const std::vector<double>& intercepts);

// No validation beyond shape; for internal use and tests that need
// non-canonical drifts.
PiecewiseLinearDrift make_piecewise_unchecked(std::vector<double> breakpoints,
                                              std::vector<double> slopes,
                                              std::vector<double> intercepts);

// Copy of `drift` with additional zero-kink breakpoints inserted (each new
// point splits its segment without changing mu).
PiecewiseLinearDrift with_extra_breakpoints(const PiecewiseLinearDrift& drift,
                                            const std::vector<double>& points);

// A general drift with user-declared or grid-estimated bounds:
// m1 >= sup |mu|, m2 >= Lipschitz constant.
struct DriftFunction {
  std::function<double(double)> mu;
  double m1 = 0.0;
  double m2 = 0.0;
};

// Builds a DriftFunction; when m1/m2 are not supplied they are estimated on a
// 10^4-point grid over [lo, hi] with a 10% safety margin.
DriftFunction make_drift_function(std::function<double(double)> mu, double lo,
                                  double hi,
                                  std::optional<double> m1 = std::nullopt,
                                  std::optional<double> m2 = std::nullopt);

// Piecewise-linear interpolant of `drift` with nodes spaced 1/n over [lo, hi]
// and constant extension outside; sup-error over [lo, hi] is at most m2/n.
PiecewiseLinearDrift linearize(const DriftFunction& drift, double lo,
                               double hi, int n);

// G(b) - G(a) where G is an antiderivative of mu (base point cancels).
double antiderivative_diff(const PiecewiseLinearDrift& drift, double a,
                           double b);

// inf over R of mu(y)^2 + mu'_-(y)/3, with mu'_- the liminf slope (min of the
// adjacent slopes at a kink).
double m_constant(const PiecewiseLinearDrift& drift);

// (inf mu, sup mu); requires canonical form.
std::pair<double, double> extremes(const PiecewiseLinearDrift& drift);

// Lamperti reduction to unit diffusion coefficient: F(point) and the
// transformed drift value (mu/sigma - sigma'/2)(point).
struct LampertiResult {
  double f_value;
  double new_drift_value;
};
LampertiResult lamperti(const std::function<double(double)>& mu,
                        const std::function<double(double)>& sigma,
                        const std::function<double(double)>& sigma_prime,
                        double y0, double point);

}  // namespace fpt
