#include "drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "quad.hpp"

namespace fpt {

std::size_t PiecewiseLinearDrift::segment_index(double x) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return static_cast<std::size_t>(it - breakpoints.begin());
}

double PiecewiseLinearDrift::eval(double x) const {
  std::size_t i = segment_index(x);
  return slopes[i] * x + intercepts[i];
}

namespace {

void check_shape(const std::vector<double>& breakpoints,
                 const std::vector<double>& slopes,
                 const std::vector<double>& intercepts) {
  if (slopes.size() != intercepts.size() ||
      slopes.size() != breakpoints.size() + 1)
    fail(errc::invalid_argument,
         "piecewise drift: need m breakpoints and m+1 (slope, intercept) pairs");
}

}  // namespace

PiecewiseLinearDrift make_piecewise(const std::vector<double>& breakpoints,
                                    const std::vector<double>& slopes,
                                    const std::vector<double>& intercepts) {
  check_shape(breakpoints, slopes, intercepts);
  for (double v : slopes)
    if (!std::isfinite(v)) fail(errc::invalid_argument, "non-finite slope");
  for (double v : intercepts)
    if (!std::isfinite(v)) fail(errc::invalid_argument, "non-finite intercept");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1]))
      fail(errc::non_monotone_breakpoints,
           "breakpoints must be strictly increasing");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    double x = breakpoints[i];
    double left = slopes[i] * x + intercepts[i];
    double right = slopes[i + 1] * x + intercepts[i + 1];
    double scale = std::max({1.0, std::abs(left), std::abs(right)});
    if (std::abs(left - right) > 1e-12 * scale)
      fail(errc::discontinuous_drift,
           "drift is discontinuous at breakpoint " + std::to_string(x));
  }
  if (slopes.front() != 0.0 || slopes.back() != 0.0)
    fail(errc::non_constant_tail,
         "canonical form requires constant extreme segments");
  return PiecewiseLinearDrift{breakpoints, slopes, intercepts};
}

PiecewiseLinearDrift make_piecewise_unchecked(std::vector<double> breakpoints,
                                              std::vector<double> slopes,
                                              std::vector<double> intercepts) {
  check_shape(breakpoints, slopes, intercepts);
  return PiecewiseLinearDrift{std::move(breakpoints), std::move(slopes),
                              std::move(intercepts)};
}

PiecewiseLinearDrift with_extra_breakpoints(const PiecewiseLinearDrift& drift,
                                            const std::vector<double>& points) {
  PiecewiseLinearDrift out = drift;
  for (double p : points) {
    bool present = false;
    for (double x : out.breakpoints)
      if (x == p) {
        present = true;
        break;
      }
    if (present) continue;
    std::size_t i = out.segment_index(p);
    out.breakpoints.insert(out.breakpoints.begin() + i, p);
    out.slopes.insert(out.slopes.begin() + i, out.slopes[i]);
    out.intercepts.insert(out.intercepts.begin() + i, out.intercepts[i]);
  }
  return out;
}

DriftFunction make_drift_function(std::function<double(double)> mu, double lo,
                                  double hi, std::optional<double> m1,
                                  std::optional<double> m2) {
  if (!(lo < hi)) fail(errc::empty_domain, "drift domain is empty");
  DriftFunction out;
  out.mu = std::move(mu);
  if (m1 && m2) {
    out.m1 = *m1;
    out.m2 = *m2;
  } else {
    const int n = 10000;
    double h = (hi - lo) / n;
    double max_abs = 0.0, max_slope = 0.0;
    double prev = out.mu(lo);
    if (!std::isfinite(prev)) fail(errc::unbounded_value, "drift is non-finite");
    max_abs = std::abs(prev);
    for (int i = 1; i <= n; ++i) {
      double v = out.mu(lo + i * h);
      if (!std::isfinite(v)) fail(errc::unbounded_value, "drift is non-finite");
      max_abs = std::max(max_abs, std::abs(v));
      max_slope = std::max(max_slope, std::abs(v - prev) / h);
      prev = v;
    }
    out.m1 = m1 ? *m1 : max_abs * 1.1;
    out.m2 = m2 ? *m2 : max_slope * 1.1;
  }
  if (out.m1 < 0.0 || out.m2 < 0.0)
    fail(errc::invalid_argument, "drift constants must be non-negative");
  return out;
}

PiecewiseLinearDrift linearize(const DriftFunction& drift, double lo,
                               double hi, int n) {
  if (!(lo < hi)) fail(errc::empty_domain, "linearize: empty domain");
  if (n < 1) fail(errc::invalid_argument, "linearize: resolution must be >= 1");

  std::vector<double> nodes;
  double step = 1.0 / n;
  long k = std::lround(std::ceil((hi - lo) * n - 1e-9));
  for (long i = 0; i < k; ++i) nodes.push_back(lo + i * step);
  nodes.push_back(hi);

  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    values[i] = drift.mu(nodes[i]);
    if (!std::isfinite(values[i]))
      fail(errc::unbounded_value, "linearize: drift value is non-finite");
  }

  std::vector<double> slopes, intercepts;
  slopes.push_back(0.0);
  intercepts.push_back(values.front());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double a = (values[i + 1] - values[i]) / (nodes[i + 1] - nodes[i]);
    slopes.push_back(a);
    intercepts.push_back(values[i] - a * nodes[i]);
  }
  slopes.push_back(0.0);
  intercepts.push_back(values.back());
  return PiecewiseLinearDrift{std::move(nodes), std::move(slopes),
                              std::move(intercepts)};
}

double antiderivative_diff(const PiecewiseLinearDrift& drift, double a,
                           double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    fail(errc::invalid_argument, "antiderivative_diff: endpoints must be finite");
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  // sum the exact piecewise-quadratic primitive over segment overlaps
  double total = 0.0;
  std::size_t i = drift.segment_index(a);
  double left = a;
  const auto& bp = drift.breakpoints;
  while (true) {
    double right = (i < bp.size()) ? std::min(bp[i], b) : b;
    double s = drift.slopes[i], c = drift.intercepts[i];
    total += 0.5 * s * (right * right - left * left) + c * (right - left);
    if (right >= b) break;
    left = right;
    ++i;
  }
  return sign * total;
}

double m_constant(const PiecewiseLinearDrift& drift) {
  const auto& bp = drift.breakpoints;
  double best = std::numeric_limits<double>::infinity();
  auto quad = [](double s, double c, double y) {
    double mu = s * y + c;
    return mu * mu;
  };
  for (std::size_t i = 0; i < drift.segment_count(); ++i) {
    double s = drift.slopes[i], c = drift.intercepts[i];
    double lo = (i == 0) ? -std::numeric_limits<double>::infinity() : bp[i - 1];
    double hi = (i == bp.size()) ? std::numeric_limits<double>::infinity() : bp[i];
    double seg_inf;
    if (s == 0.0) {
      seg_inf = c * c;
    } else {
      double vertex = -c / s;
      if (vertex >= lo && vertex <= hi)
        seg_inf = 0.0;
      else if (vertex < lo)
        seg_inf = quad(s, c, lo);
      else
        seg_inf = quad(s, c, hi);
    }
    best = std::min(best, seg_inf + s / 3.0);
  }
  for (std::size_t i = 0; i < bp.size(); ++i) {
    double mu = drift.slopes[i] * bp[i] + drift.intercepts[i];
    double slope_liminf = std::min(drift.slopes[i], drift.slopes[i + 1]);
    best = std::min(best, mu * mu + slope_liminf / 3.0);
  }
  return best;
}

std::pair<double, double> extremes(const PiecewiseLinearDrift& drift) {
  if (!drift.canonical())
    fail(errc::non_constant_tail, "extremes: drift must have constant tails");
  double lo = drift.intercepts.front(), hi = lo;
  lo = std::min(lo, drift.intercepts.back());
  hi = std::max(hi, drift.intercepts.back());
  for (double x : drift.breakpoints) {
    double v = drift.eval(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

LampertiResult lamperti(const std::function<double(double)>& mu,
                        const std::function<double(double)>& sigma,
                        const std::function<double(double)>& sigma_prime,
                        double y0, double point) {
  auto inv_sigma = [&](double u) {
    double s = sigma(u);
    if (!(s > 0.0))
      fail(errc::sigma_vanishes, "lamperti: sigma must be positive");
    return 1.0 / s;
  };
  double f = (y0 == point) ? 0.0 : integrate(inv_sigma, y0, point, 1e-10);
  double s = sigma(point);
  if (!(s > 0.0)) fail(errc::sigma_vanishes, "lamperti: sigma must be positive");
  return {f, mu(point) / s - 0.5 * sigma_prime(point)};
}

}  // namespace fpt
