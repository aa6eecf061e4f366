#include "lapsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "log.hpp"
#include "specfun.hpp"

namespace fpt {

namespace {

thread_local SegmentRoute g_last_route = SegmentRoute::exponential;

PropState normalized(cplx u, cplx du, double log_scale) {
  double m = std::max(std::abs(u), std::abs(du));
  if (!(m > 0.0) || !std::isfinite(m))
    fail(errc::singular_basis_matrix, "propagation produced a degenerate state");
  return {u / m, du / m, log_scale + std::log(m)};
}

void check_lambda(cplx lambda) {
  if (lambda.real() > 0.0) return;
  if (lambda == cplx(0.0, 0.0)) return;  // handled by leftmost_seed
  fail(errc::nonpositive_lambda, "lambda must have positive real part");
}

// Constant-drift piece: mu = b, roots r = -b +- sqrt(b^2 + 2 lambda).
PropState prop_exponential(double b, cplx lambda, double h, PropState st) {
  cplx s = std::sqrt(cplx(b * b, 0.0) + 2.0 * lambda);
  // sub-step so exponentials stay representable
  double rmax = (std::abs(b) + std::abs(s)) * std::abs(h);
  int nsub = std::max(1, static_cast<int>(std::ceil(rmax / 200.0)));
  double hs = h / nsub;
  for (int i = 0; i < nsub; ++i) {
    cplx u, du;
    if (std::abs(s) < 1e-8 * std::max(1.0, std::abs(b))) {
      // equal roots: (C1 + C2 t) e^{-b t}
      cplx c1 = st.u;
      cplx c2 = st.du + b * st.u;
      cplx e = std::exp(cplx(-b * hs, 0.0));
      u = (c1 + c2 * hs) * e;
      du = (c2 - b * (c1 + c2 * hs)) * e;
    } else {
      cplx rp = -b + s, rm = -b - s;
      cplx c1 = (st.du - rm * st.u) / (2.0 * s);
      cplx c2 = (rp * st.u - st.du) / (2.0 * s);
      cplx ep = std::exp(rp * hs), em = std::exp(rm * hs);
      u = c1 * ep + c2 * em;
      du = c1 * rp * ep + c2 * rm * em;
    }
    st = normalized(u, du, st.log_scale);
  }
  return st;
}

// Exact power-series transport of the IVP across [x_from, x_to] for
// mu = a x + b. The ODE has polynomial coefficients, so the Taylor
// coefficients of the solution satisfy a two-term recursion; sub-steps keep
// the series short and the partial sums free of cancellation.
PropState prop_taylor(double a, double b, cplx lambda, double x_from,
                      double x_to, PropState st) {
  double span = x_to - x_from;
  double beta_max =
      std::max(std::abs(a * x_from + b), std::abs(a * x_to + b));
  double rate = std::sqrt(2.0 * std::abs(lambda)) + 2.0 * beta_max +
                std::sqrt(std::abs(a)) + 1.0;
  int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(span) * rate / 0.5)));
  double h = span / nsub;
  for (int sub = 0; sub < nsub; ++sub) {
    double beta = a * (x_from + sub * h) + b;
    cplx ck = st.u, ck1 = st.du;  // c_k, c_{k+1}
    cplx u_sum = ck + ck1 * h;
    cplx du_sum = ck1;
    double h_pow = h;  // h^{k+1}
    int small_run = 0;
    for (int k = 0; k < 400; ++k) {
      cplx ck2 = 2.0 * ((lambda - cplx(a * k, 0.0)) * ck -
                        beta * double(k + 1) * ck1) /
                 double((k + 2) * (k + 1));
      h_pow *= h;  // h^{k+2}
      cplx tu = ck2 * h_pow;
      cplx tdu = double(k + 2) * ck2 * (h_pow / h);
      u_sum += tu;
      du_sum += tdu;
      ck = ck1;
      ck1 = ck2;
      double mag = std::max({std::abs(u_sum), std::abs(du_sum), 1e-30});
      if (std::abs(tu) <= 1e-18 * mag && std::abs(tdu) <= 1e-18 * mag) {
        if (++small_run >= 3) break;
      } else {
        small_run = 0;
      }
    }
    st = normalized(u_sum, du_sum, st.log_scale);
  }
  return st;
}

// Kummer fundamental-pair transport. Returns false when the evaluation is
// not trustworthy at the required precision; the caller then takes the
// Taylor route.
bool prop_kummer(double a, double b, cplx lambda, double x_from, double x_to,
                 PropState& st) {
  double vertex = -b / a;
  double df = x_from - vertex, dt = x_to - vertex;
  double zf = -a * df * df, zt = -a * dt * dt;
  double zmax = std::max(std::abs(zf), std::abs(zt));
  if (zmax > 200.0) return false;
  cplx alpha = -lambda / (2.0 * a);
  if (std::abs(alpha) * zmax > 4000.0) return false;  // series cost/cancel guard

  specfun::basis_eval from = specfun::kummer_basis(a, b, lambda, x_from);
  if (!from.reliable) return false;
  specfun::basis_eval to = specfun::kummer_basis(a, b, lambda, x_to);
  if (!to.reliable) return false;

  // Abel's identity gives the Wronskian exactly: W(x) = e^{z(x)}.
  cplx w_exact = std::exp(cplx(zf, 0.0));
  cplx w = from.e1 * from.de2 - from.e2 * from.de1;
  if (std::abs(w - w_exact) > 1e-9 * std::abs(w_exact)) return false;

  cplx n1 = st.u * from.de2 - st.du * from.e2;
  cplx n2 = st.du * from.e1 - st.u * from.de1;
  double cancel1 = (std::abs(st.u * from.de2) + std::abs(st.du * from.e2)) /
                   std::max(std::abs(n1), 1e-300);
  double cancel2 = (std::abs(st.du * from.e1) + std::abs(st.u * from.de1)) /
                   std::max(std::abs(n2), 1e-300);
  cplx c1 = n1 / w_exact, c2 = n2 / w_exact;

  cplx u = c1 * to.e1 + c2 * to.e2;
  cplx du = c1 * to.de1 + c2 * to.de2;
  double out_mag = std::max(std::abs(u), std::abs(du));
  if (!(out_mag > 0.0) || !std::isfinite(out_mag)) return false;

  double m1 = std::abs(c1) * std::max(std::abs(to.e1), std::abs(to.de1));
  double m2 = std::abs(c2) * std::max(std::abs(to.e2), std::abs(to.de2));
  double est_err = 1e-11 * (m1 * std::min(cancel1, 1e12) +
                            m2 * std::min(cancel2, 1e12));
  if (est_err > 1e-9 * out_mag) return false;

  st = normalized(u, du, st.log_scale);
  return true;
}

}  // namespace

SegmentRoute last_segment_route() { return g_last_route; }

PropState leftmost_seed(double b0, cplx lambda, double x_start) {
  (void)x_start;
  if (lambda == cplx(0.0, 0.0)) {
    if (b0 < 0.0) return {cplx(1.0, 0.0), cplx(-2.0 * b0, 0.0), 0.0};
    fail(errc::degenerate_seed,
         "lambda = 0 with non-negative tail drift: no decaying solution");
  }
  if (!(lambda.real() > 0.0))
    fail(errc::nonpositive_lambda, "leftmost_seed requires Re lambda > 0");
  cplx s = std::sqrt(cplx(b0 * b0, 0.0) + 2.0 * lambda);
  cplx r = -b0 + s;  // Re r > 0 since Re s > |b0|
  return {cplx(1.0, 0.0), r, 0.0};
}

PropState propagate_segment(double a, double b, cplx lambda, double x_from,
                            double x_to, PropState state) {
  if (x_from == x_to) return state;
  if (a == 0.0) {
    g_last_route = SegmentRoute::exponential;
    return prop_exponential(b, lambda, x_to - x_from, state);
  }
  PropState st = state;
  if (prop_kummer(a, b, lambda, x_from, x_to, st)) {
    g_last_route = SegmentRoute::kummer;
    return st;
  }
  g_last_route = SegmentRoute::taylor;
  return prop_taylor(a, b, lambda, x_from, x_to, state);
}

LaplaceSolution::LaplaceSolution(const PiecewiseLinearDrift& drift,
                                 cplx lambda,
                                 const std::vector<double>& extra_points,
                                 cplx seed_scale)
    : drift_(with_extra_breakpoints(drift, extra_points)), lambda_(lambda) {
  if (!drift.canonical())
    fail(errc::non_constant_tail, "solve_u requires a canonical drift");
  check_lambda(lambda);
  if (drift_.breakpoints.empty()) {
    // anchor somewhere so the solution has a reference state
    drift_ = with_extra_breakpoints(drift_, {0.0});
  }
  if (seed_scale == cplx(0.0, 0.0))
    fail(errc::invalid_argument, "seed scale must be nonzero");

  const auto& nodes = drift_.breakpoints;
  PropState st = leftmost_seed(drift_.intercepts.front(), lambda_, nodes.front());
  st = normalized(seed_scale * st.u, seed_scale * st.du, st.log_scale);
  states_.reserve(nodes.size());
  states_.push_back(st);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    // segment between nodes i and i+1 is segment index i+1 of drift_
    double a = drift_.slopes[i + 1], b = drift_.intercepts[i + 1];
    st = propagate_segment(a, b, lambda_, nodes[i], nodes[i + 1], st);
    states_.push_back(st);
  }
}

PropState LaplaceSolution::at(double x) const {
  const auto& nodes = drift_.breakpoints;
  if (x < nodes.front()) {
    // left tail: pure decaying exponential relative to the seed state
    const PropState& s0 = states_.front();
    cplx s = std::sqrt(cplx(drift_.intercepts.front() *
                                drift_.intercepts.front(), 0.0) +
                       2.0 * lambda_);
    cplx r = -drift_.intercepts.front() + s;
    cplx e = std::exp(cplx(0.0, 1.0) * (r.imag() * (x - nodes.front())));
    double dls = r.real() * (x - nodes.front());
    return normalized(s0.u * e, s0.u * r * e, s0.log_scale + dls);
  }
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  std::size_t i = static_cast<std::size_t>(it - nodes.begin());
  // x >= nodes[i-1]; propagate within the segment containing x
  if (i > 0 && nodes[i - 1] == x) return states_[i - 1];
  double a = drift_.slopes[i], b = drift_.intercepts[i];
  return propagate_segment(a, b, lambda_, nodes[i - 1], x, states_[i - 1]);
}

cplx LaplaceSolution::log_u(double x) const {
  PropState s = at(x);
  return std::log(s.u) + s.log_scale;
}

double LaplaceSolution::ode_residual(double x, double h) const {
  if (!(h > 0.0)) fail(errc::invalid_argument, "ode_residual: h must be > 0");
  for (double bp : drift_.breakpoints)
    if (std::abs(x - bp) <= h)
      fail(errc::too_close_to_breakpoint,
           "ode_residual: x within h of a breakpoint");
  cplx ref = log_u(x);
  cplx yp = std::exp(log_u(x + h) - ref);
  cplx ym = std::exp(log_u(x - h) - ref);
  cplx resid = 0.5 * (yp - 2.0 + ym) / (h * h) +
               drift_.eval(x) * (yp - ym) / (2.0 * h) - lambda_;
  return std::abs(resid) / std::max(1.0, std::abs(lambda_));
}

LaplaceSolution solve_u(const PiecewiseLinearDrift& drift, cplx lambda,
                        const std::vector<double>& extra_points,
                        cplx seed_scale) {
  return LaplaceSolution(drift, lambda, extra_points, seed_scale);
}

cplx laplace_fpt(const PiecewiseLinearDrift& drift, double x0, double c,
                 cplx lambda) {
  if (!(x0 < c))
    fail(errc::barrier_not_above, "laplace_fpt requires x0 < barrier");
  LaplaceSolution sol(drift, lambda, {x0, c});
  return std::exp(sol.log_u(x0) - sol.log_u(c));
}

namespace {

// Cash-Karp embedded Runge-Kutta 4(5) tableau.
constexpr double kA2 = 1.0 / 5, kA3 = 3.0 / 10, kA4 = 3.0 / 5, kA5 = 1.0,
                 kA6 = 7.0 / 8;
constexpr double kB21 = 1.0 / 5;
constexpr double kB31 = 3.0 / 40, kB32 = 9.0 / 40;
constexpr double kB41 = 3.0 / 10, kB42 = -9.0 / 10, kB43 = 6.0 / 5;
constexpr double kB51 = -11.0 / 54, kB52 = 5.0 / 2, kB53 = -70.0 / 27,
                 kB54 = 35.0 / 27;
constexpr double kB61 = 1631.0 / 55296, kB62 = 175.0 / 512,
                 kB63 = 575.0 / 13824, kB64 = 44275.0 / 110592,
                 kB65 = 253.0 / 4096;
constexpr double kC1 = 37.0 / 378, kC3 = 250.0 / 621, kC4 = 125.0 / 594,
                 kC6 = 512.0 / 1771;
constexpr double kD1 = kC1 - 2825.0 / 27648, kD3 = kC3 - 18575.0 / 48384,
                 kD4 = kC4 - 13525.0 / 55296, kD5 = -277.0 / 14336,
                 kD6 = kC6 - 1.0 / 4;

struct Vec2 {
  cplx u, du;
};

Vec2 operator+(Vec2 a, Vec2 b) { return {a.u + b.u, a.du + b.du}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.u, s * a.du}; }

PropState rk_integrate_piece(const PiecewiseLinearDrift& drift, cplx lambda,
                             double x0, double x1, PropState st) {
  auto rhs = [&](double x, Vec2 y) -> Vec2 {
    return {y.du, 2.0 * lambda * y.u - 2.0 * drift.eval(x) * y.du};
  };
  const double rel_tol = 1e-10;
  double span = x1 - x0;
  if (span == 0.0) return st;
  double x = x0;
  Vec2 y{st.u, st.du};
  double ls = st.log_scale;
  double h = span / 16.0;
  double min_h = std::abs(span) * 1e-14 + 1e-300;
  int guard = 0;
  while ((span > 0 && x < x1) || (span < 0 && x > x1)) {
    if (++guard > 2000000)
      fail(errc::step_underflow, "numeric_ode_oracle: too many steps");
    if ((span > 0 && x + h > x1) || (span < 0 && x + h < x1)) h = x1 - x;
    Vec2 k1 = rhs(x, y);
    Vec2 k2 = rhs(x + kA2 * h, y + (h * kB21) * k1);
    Vec2 k3 = rhs(x + kA3 * h, y + (h * kB31) * k1 + (h * kB32) * k2);
    Vec2 k4 = rhs(x + kA4 * h,
                  y + (h * kB41) * k1 + (h * kB42) * k2 + (h * kB43) * k3);
    Vec2 k5 = rhs(x + kA5 * h, y + (h * kB51) * k1 + (h * kB52) * k2 +
                                   (h * kB53) * k3 + (h * kB54) * k4);
    Vec2 k6 = rhs(x + kA6 * h, y + (h * kB61) * k1 + (h * kB62) * k2 +
                                   (h * kB63) * k3 + (h * kB64) * k4 +
                                   (h * kB65) * k5);
    Vec2 y5 = y + (h * kC1) * k1 + (h * kC3) * k3 + (h * kC4) * k4 +
              (h * kC6) * k6;
    Vec2 err = (h * kD1) * k1 + (h * kD3) * k3 + (h * kD4) * k4 +
               (h * kD5) * k5 + (h * kD6) * k6;
    double scale = std::max({std::abs(y5.u), std::abs(y5.du),
                             std::abs(y.u), std::abs(y.du), 1e-30});
    double e = std::max(std::abs(err.u), std::abs(err.du)) / scale;
    if (e <= rel_tol) {
      x += h;
      y = y5;
      double m = std::max(std::abs(y.u), std::abs(y.du));
      if (m > 1e6 || (m < 1e-6 && m > 0.0)) {
        y.u /= m;
        y.du /= m;
        ls += std::log(m);
      }
      double grow = (e > 0.0) ? 0.9 * std::pow(rel_tol / e, 0.2) : 5.0;
      h *= std::min(5.0, grow);
    } else {
      h *= std::max(0.1, 0.9 * std::pow(rel_tol / e, 0.25));
      if (std::abs(h) < min_h)
        fail(errc::step_underflow, "numeric_ode_oracle: step underflow");
    }
  }
  return normalized(y.u, y.du, ls);
}

}  // namespace

PropState numeric_ode_oracle(const PiecewiseLinearDrift& drift, cplx lambda,
                             double x_start, PropState seed, double x_end) {
  // restart at drift kinks so the integrator only ever sees smooth pieces
  std::vector<double> stops;
  stops.push_back(x_start);
  if (x_end >= x_start) {
    for (double bp : drift.breakpoints)
      if (bp > x_start && bp < x_end) stops.push_back(bp);
  } else {
    for (auto it = drift.breakpoints.rbegin(); it != drift.breakpoints.rend();
         ++it)
      if (*it < x_start && *it > x_end) stops.push_back(*it);
  }
  stops.push_back(x_end);
  PropState st = seed;
  for (std::size_t i = 0; i + 1 < stops.size(); ++i)
    st = rk_integrate_piece(drift, lambda, stops[i], stops[i + 1], st);
  return st;
}

}  // namespace fpt
