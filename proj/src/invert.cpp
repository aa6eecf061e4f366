#include "invert.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "lapsolve.hpp"
#include "log.hpp"

namespace fpt {

int InversionConfig::resolved_terms() const {
  if (terms != 0) return terms;
  return method == InversionMethod::euler_summation ? 32 : 14;
}

void InversionConfig::validate() const {
  int n = resolved_terms();
  if (n < 10) fail(errc::invalid_config, "inversion: terms must be >= 10");
  if (method == InversionMethod::gaver_stehfest && n % 2 != 0)
    fail(errc::invalid_config, "gaver_stehfest: terms must be even");
  if (!(target_rel_tol > 0.0))
    fail(errc::invalid_config, "inversion: target_rel_tol must be positive");
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Bromwich inversion on the shifted trapezoidal contour with Euler
// (binomial) acceleration of the alternating tail. The damping parameter A
// sets the discretization error ~ e^{-A}; roundoff grows like e^{A/2} eps.
struct EulerResult {
  double value;
  double diagnostic;  // spread between two acceleration windows
};

EulerResult euler_invert(const TransformFn& transform, double t, int terms,
                         double tol) {
  const double a_par = std::min(std::max(-std::log(tol), 12.0), 30.0);
  const int m_avg = 12;  // binomial window
  const int n_total = terms + m_avg;

  // partial sums of a0 + sum_k 2 (-1)^k Re fhat((A + 2 pi i k)/(2t))
  std::vector<double> partial(n_total + 1);
  double s = transform(cplx(a_par / (2.0 * t), 0.0)).real();
  partial[0] = s;
  for (int k = 1; k <= n_total; ++k) {
    cplx lam(a_par / (2.0 * t), kPi * k / t);
    double term = 2.0 * transform(lam).real();
    s += (k % 2 == 0) ? term : -term;
    partial[k] = s;
  }

  // binomial coefficients C(m_avg, j) / 2^m_avg
  double binom[m_avg + 1];
  binom[0] = 1.0;
  for (int j = 1; j <= m_avg; ++j)
    binom[j] = binom[j - 1] * double(m_avg - j + 1) / double(j);

  auto accelerated = [&](int offset) {
    double acc = 0.0;
    for (int j = 0; j <= m_avg; ++j) acc += binom[j] * partial[offset + j];
    return acc / std::pow(2.0, m_avg);
  };
  double e_hi = accelerated(terms);
  double e_lo = accelerated(terms - 2);
  double pre = std::exp(0.5 * a_par) / (2.0 * t);
  return {pre * e_hi, pre * std::abs(e_hi - e_lo)};
}

// Stehfest weights for even n.
std::vector<double> stehfest_weights(int n) {
  std::vector<double> w(n + 1, 0.0);
  int half = n / 2;
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  for (int k = 1; k <= n; ++k) {
    double sum = 0.0;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      sum += std::pow(double(j), half) * fact(2 * j) /
             (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) *
              fact(2 * j - k));
    }
    w[k] = ((k + half) % 2 == 0 ? 1.0 : -1.0) * sum;
  }
  return w;
}

double gaver_invert(const TransformFn& transform, double t, int n) {
  static thread_local int cached_n = 0;
  static thread_local std::vector<double> cached_w;
  if (cached_n != n) {
    cached_w = stehfest_weights(n);
    cached_n = n;
  }
  const double ln2 = std::log(2.0);
  double sum = 0.0;
  for (int k = 1; k <= n; ++k)
    sum += cached_w[k] * transform(cplx(k * ln2 / t, 0.0)).real();
  return sum * ln2 / t;
}

double invert_raw(const TransformFn& transform, double t,
                  const InversionConfig& cfg, bool clip_unit,
                  bool is_density) {
  if (!(t > 0.0)) fail(errc::invalid_argument, "inversion requires t > 0");
  cfg.validate();
  double value;
  if (cfg.method == InversionMethod::euler_summation) {
    EulerResult r = euler_invert(transform, t, cfg.resolved_terms(),
                                 cfg.target_rel_tol);
    double allowed = 1e3 * cfg.target_rel_tol * std::max(1.0, std::abs(r.value));
    if (r.diagnostic > allowed)
      fail(errc::inversion_unstable,
           "euler_summation: partial-sum spread " + std::to_string(r.diagnostic));
    value = r.value;
  } else {
    value = gaver_invert(transform, t, cfg.resolved_terms());
  }
  if (is_density) {
    if (value < -1e-8)
      fail(errc::negative_density,
           "inverted density is negative: " + std::to_string(value));
    if (value < 0.0) value = 0.0;
  }
  if (clip_unit) {
    if (value < -1e-6 || value > 1.0 + 1e-6)
      fail(errc::inversion_unstable,
           "inverted CDF far outside [0,1]: " + std::to_string(value));
    value = std::min(std::max(value, 0.0), 1.0);
  }
  return value;
}

}  // namespace

double invert_density(const TransformFn& transform, double t,
                      const InversionConfig& cfg) {
  return invert_raw(transform, t, cfg, /*clip_unit=*/false, /*is_density=*/true);
}

double invert_cdf(const TransformFn& transform, double t,
                  const InversionConfig& cfg) {
  auto cdf_transform = [&transform](cplx lam) { return transform(lam) / lam; };
  return invert_raw(cdf_transform, t, cfg, /*clip_unit=*/true,
                    /*is_density=*/false);
}

namespace {

TransformFn query_transform(const FirstPassageQuery& q) {
  return [&q](cplx lam) { return laplace_fpt(q.drift, q.x0, q.barrier, lam); };
}

bool below_inversion_floor(const FirstPassageQuery& q, double t) {
  double d = q.barrier - q.x0;
  return t < 1e-4 * d * d;
}

}  // namespace

double first_passage_cdf(const FirstPassageQuery& query, double t,
                         const InversionConfig& cfg) {
  if (!(query.x0 < query.barrier))
    fail(errc::barrier_not_above, "query requires x0 < barrier");
  if (below_inversion_floor(query, t)) return 0.0;
  return invert_cdf(query_transform(query), t, cfg);
}

double first_passage_density(const FirstPassageQuery& query, double t,
                             const InversionConfig& cfg) {
  if (!(query.x0 < query.barrier))
    fail(errc::barrier_not_above, "query requires x0 < barrier");
  if (below_inversion_floor(query, t)) return 0.0;
  return invert_density(query_transform(query), t, cfg);
}

SurvivalCurve survival_curve(const FirstPassageQuery& query,
                             const std::vector<double>& grid,
                             const InversionConfig& cfg, bool with_density) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0))
      fail(errc::invalid_argument, "survival grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      fail(errc::invalid_argument, "survival grid must be increasing");
  }
  SurvivalCurve out;
  out.times = grid;
  out.survival.reserve(grid.size());
  if (with_density) out.density.reserve(grid.size());
  for (double t : grid) {
    out.survival.push_back(1.0 - first_passage_cdf(query, t, cfg));
    if (with_density)
      out.density.push_back(first_passage_density(query, t, cfg));
  }
  // survival must be non-increasing; tolerate (and smooth away) violations
  // within inversion accuracy, reject anything larger
  for (std::size_t i = 1; i < out.survival.size(); ++i) {
    double rise = out.survival[i] - out.survival[i - 1];
    if (rise > 1e-6)
      fail(errc::monotonicity_violation,
           "survival curve increases by " + std::to_string(rise));
    if (rise > 0.0) out.survival[i] = out.survival[i - 1];
  }
  return out;
}

}  // namespace fpt
