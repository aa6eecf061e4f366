#include "specfun.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace fpt::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = 3.14159265358979323846;

bool is_nonpositive_integer(cplx z) {
  if (z.imag() != 0.0) return false;
  double r = z.real();
  return r <= 0.0 && r == std::floor(r);
}

// Lanczos, g = 7, 9 coefficients (~15 significant digits in double).
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos_positive(cplx z) {
  // valid for Re z >= 0.5; argument shifted so the series sees z-1
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + cplx(i, 0));
  cplx t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

cplx gamma(cplx z) {
  if (is_nonpositive_integer(z))
    fail(errc::pole_at_nonpositive_integer, "gamma: pole at non-positive integer");
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return kPi / (std::sin(kPi * z) * lanczos_positive(1.0 - z));
  }
  return lanczos_positive(z);
}

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z))
    fail(errc::pole_at_nonpositive_integer, "log_gamma: pole at non-positive integer");
  if (z.real() < 0.5)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + cplx(i, 0));
  cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx pochhammer(cplx a, unsigned k) {
  cplx p = 1.0;
  for (unsigned i = 0; i < k; ++i) p *= a + cplx(i, 0);
  return p;
}

namespace {

// 1/Gamma, zero at the poles.
cplx rgamma(cplx z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return 1.0 / gamma(z);
}

const kummer_value kFailed{cplx(0.0, 0.0), std::numeric_limits<double>::infinity()};

// Direct Taylor series with a cancellation monitor. The returned error
// estimate combines roundoff amplification (largest term over the sum) with
// the truncation tail.
kummer_value kummer_series(cplx a, double b, cplx x, int max_terms) {
  cplx term = 1.0, sum = 1.0;
  double max_mag = 1.0;
  int small_run = 0;
  for (int k = 0; k < max_terms; ++k) {
    term *= (a + cplx(k, 0)) * x / ((b + k) * double(k + 1));
    sum += term;
    double tm = std::abs(term);
    if (!std::isfinite(tm)) return kFailed;
    if (tm > max_mag) max_mag = tm;
    double sm = std::abs(sum);
    if (tm <= 1e-16 * std::max(sm, 1e-300)) {
      if (++small_run >= 2) {
        double denom = std::max(sm, 1e-300);
        return {sum, 4.0 * kEps * max_mag / denom + tm / denom};
      }
    } else {
      small_run = 0;
    }
  }
  return kFailed;
}

// Asymptotic series in 1/x; usable only while terms decrease.
kummer_value kummer_asymptotic(cplx a, double b, cplx x) {
  kummer_value out = kFailed;
  const int max_terms = 60;
  if (x.real() >= 0.0) {
    // M(a,b,x) ~ Gamma(b)/Gamma(a) e^x x^{a-b} sum_k (b-a)_k (1-a)_k / (k! x^k)
    cplx pre = gamma(cplx(b, 0)) * rgamma(a) * std::exp(x) * std::pow(x, a - b);
    if (!std::isfinite(std::abs(pre))) return kFailed;
    cplx term = 1.0, sum = 1.0;
    double prev = 1.0;
    double tail = 1.0;
    for (int k = 0; k < max_terms; ++k) {
      term *= (b - a + cplx(k, 0)) * (1.0 - a + cplx(k, 0)) / (double(k + 1) * x);
      double tm = std::abs(term);
      if (tm >= prev) {  // divergence onset: stop at smallest term
        tail = tm;
        break;
      }
      sum += term;
      prev = tm;
      tail = tm;
      if (tm < 1e-17) break;
    }
    double rel = tail / std::max(std::abs(sum), 1e-300) + std::exp(-std::abs(x.real()));
    out = {pre * sum, rel};
  } else {
    // M(a,b,x) ~ Gamma(b)/Gamma(b-a) (-x)^{-a} sum_k (a)_k (a-b+1)_k / (k! (-x)^k)
    cplx pre = gamma(cplx(b, 0)) * rgamma(cplx(b, 0) - a) * std::pow(-x, -a);
    if (!std::isfinite(std::abs(pre))) return kFailed;
    cplx term = 1.0, sum = 1.0;
    double prev = 1.0;
    double tail = 1.0;
    for (int k = 0; k < max_terms; ++k) {
      term *= (a + cplx(k, 0)) * (a - b + 1.0 + cplx(k, 0)) / (double(k + 1) * (-x));
      double tm = std::abs(term);
      if (tm >= prev) {
        tail = tm;
        break;
      }
      sum += term;
      prev = tm;
      tail = tm;
      if (tm < 1e-17) break;
    }
    double rel = tail / std::max(std::abs(sum), 1e-300) + std::exp(x.real());
    out = {pre * sum, rel};
  }
  if (!std::isfinite(std::abs(out.value))) return kFailed;
  return out;
}

}  // namespace

kummer_value kummer_psi_checked(cplx a, double b, cplx x) {
  if (b <= 0.0 && b == std::floor(b))
    fail(errc::b_nonpositive_integer, "kummer_psi: b is a non-positive integer");
  if (x == cplx(0.0, 0.0)) return {cplx(1.0, 0.0), 0.0};

  kummer_value best = kFailed;
  auto consider = [&best](kummer_value cand) {
    if (cand.err < best.err) best = cand;
  };

  double ax = std::abs(x);
  if (ax <= 40.0) consider(kummer_series(a, b, x, 500));
  if (x.real() < 0.0 && -x.real() <= 600.0) {
    // Kummer transformation M(a,b,x) = e^x M(b-a,b,-x); for the cases of
    // interest (b > a on the real axis) the reflected series has little or
    // no sign alternation.
    kummer_value t = kummer_series(cplx(b, 0) - a, b, -x, 5000);
    if (std::isfinite(t.err)) consider({std::exp(x) * t.value, t.err + 4.0 * kEps});
  }
  if (ax >= 25.0) consider(kummer_asymptotic(a, b, x));
  return best;
}

cplx kummer_psi(cplx a, double b, cplx x) {
  kummer_value v = kummer_psi_checked(a, b, x);
  if (!(v.err < 1e-6))
    fail(errc::series_diverged, "kummer_psi: no convergent evaluation route");
  return v.value;
}

basis_eval kummer_basis(double a_seg, double b_seg, cplx lambda, double x) {
  if (a_seg == 0.0)
    fail(errc::invalid_argument, "kummer_basis: zero segment slope");
  const double vertex = -b_seg / a_seg;
  const double dx = x - vertex;
  const cplx z = -a_seg * dx * dx;
  const double zx = -2.0 * a_seg * dx;  // dz/dx
  const cplx alpha = -lambda / (2.0 * a_seg);

  kummer_value f0 = kummer_psi_checked(alpha, 0.5, z);
  kummer_value f1 = kummer_psi_checked(alpha + 1.0, 1.5, z);
  kummer_value g0 = kummer_psi_checked(alpha + 0.5, 1.5, z);
  kummer_value g1 = kummer_psi_checked(alpha + 1.5, 2.5, z);

  basis_eval out;
  out.e1 = f0.value;
  out.de1 = 2.0 * alpha * f1.value * zx;
  out.e2 = dx * g0.value;
  out.de2 = g0.value + dx * (alpha + 0.5) / 1.5 * g1.value * zx;
  double worst = std::max(std::max(f0.err, f1.err), std::max(g0.err, g1.err));
  out.reliable = worst <= 1e-11 && std::isfinite(std::abs(out.e1)) &&
                 std::isfinite(std::abs(out.de1)) &&
                 std::isfinite(std::abs(out.e2)) &&
                 std::isfinite(std::abs(out.de2));
  return out;
}

double normal_cdf(double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); }

double log_normal_cdf(double y) {
  if (y > -37.0) return std::log(normal_cdf(y));
  // Mills-ratio asymptotics for the far left tail.
  double y2 = y * y;
  return -0.5 * y2 - std::log(-y * std::sqrt(2.0 * kPi)) +
         std::log1p(-1.0 / y2 + 3.0 / (y2 * y2));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    fail(errc::invalid_argument, "normal_quantile: p must lie in (0,1)");
  // Acklam's rational approximation, then one Halley step through normal_cdf.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425, p_high = 1.0 - p_low;
  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= p_high) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace fpt::specfun
