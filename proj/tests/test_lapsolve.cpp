#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "drift.hpp"
#include "error.hpp"
#include "lapsolve.hpp"

using namespace fpt;

namespace {

PiecewiseLinearDrift clamp_drift() {
  return make_piecewise({-1.0, 1.0}, {0.0, -1.0, 0.0}, {1.0, 0.0, -1.0});
}

PiecewiseLinearDrift tanh_drift(int n) {
  auto fn = make_drift_function([](double x) { return std::tanh(x); }, -4, 4,
                                1.0, 1.0);
  return linearize(fn, -4, 4, n);
}

cplx oracle_log_u(const PiecewiseLinearDrift& drift, cplx lambda, double x,
                  double start) {
  PropState seed = leftmost_seed(drift.intercepts.front(), lambda, start);
  PropState st = numeric_ode_oracle(drift, lambda, start, seed, x);
  return std::log(st.u) + st.log_scale;
}

// Fully independent transform value: Runge-Kutta from the left tail.
cplx oracle_fpt(const PiecewiseLinearDrift& drift, double x0, double c,
                cplx lambda) {
  double start = drift.breakpoints.empty() ? std::min(x0, c) - 1.0
                                           : drift.breakpoints.front();
  start = std::min(start, std::min(x0, c));
  return std::exp(oracle_log_u(drift, lambda, x0, start) -
                  oracle_log_u(drift, lambda, c, start));
}

}  // namespace

TEST_CASE("leftmost_seed") {
  PropState s = leftmost_seed(0.0, cplx(0.5, 0), 0.0);
  CHECK(std::abs(s.u - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(s.du - cplx(1, 0)) < 1e-15);

  PropState s2 = leftmost_seed(1.0, cplx(1.5, 0), -3.0);
  CHECK(std::abs(s2.du - cplx(1, 0)) < 1e-14);

  try {
    leftmost_seed(1.0, cplx(0, 0), 0.0);
    FAIL("expected throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::degenerate_seed);
  }
  try {
    leftmost_seed(0.0, cplx(-1, 0), 0.0);
    FAIL("expected throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::nonpositive_lambda);
  }
  // lambda = 0 is fine when the tail drift is negative: r+ = -2 b0
  PropState s3 = leftmost_seed(-1.0, cplx(0, 0), 0.0);
  CHECK(std::abs(s3.du - cplx(2, 0)) < 1e-14);
}

TEST_CASE("propagate_segment on a driftless exponential segment") {
  PropState in;
  in.u = cplx(1, 0);
  in.du = cplx(1, 0);  // pure e^x mode for lambda = 0.5
  PropState out = propagate_segment(0.0, 0.0, cplx(0.5, 0), 0.0, 1.0, in);
  CHECK(last_segment_route() == SegmentRoute::exponential);
  cplx log_u = std::log(out.u) + out.log_scale;
  CHECK(std::abs(log_u - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(out.du / out.u - cplx(1, 0)) < 1e-12);
}

TEST_CASE("propagate_segment kummer route vs numeric oracle") {
  cplx lambda(1, 0);
  PropState seed = leftmost_seed(0.0, lambda, 0.0);
  PropState analytic = propagate_segment(-1.0, 0.0, lambda, 0.0, 1.0, seed);
  CHECK(last_segment_route() == SegmentRoute::kummer);

  auto seg = make_piecewise_unchecked({}, {-1.0}, {0.0});
  PropState numeric = numeric_ode_oracle(seg, lambda, 0.0, seed, 1.0);
  cplx la = std::log(analytic.u) + analytic.log_scale;
  cplx ln = std::log(numeric.u) + numeric.log_scale;
  CHECK(std::abs(la - ln) < 1e-8);
  CHECK(std::abs(analytic.du / analytic.u - numeric.du / numeric.u) < 1e-8);
}

TEST_CASE("propagate_segment taylor fallback on a nearly flat segment") {
  // slope so small that the Kummer parametrization collapses numerically
  double a = 1.3e-3, b = 1.0;
  cplx lambda(1, 0);
  PropState seed = leftmost_seed(b, lambda, 0.0);
  PropState analytic = propagate_segment(a, b, lambda, 0.0, 1.0, seed);
  CHECK(last_segment_route() == SegmentRoute::taylor);

  auto seg = make_piecewise_unchecked({}, {a}, {b});
  PropState numeric = numeric_ode_oracle(seg, lambda, 0.0, seed, 1.0);
  cplx la = std::log(analytic.u) + analytic.log_scale;
  cplx ln = std::log(numeric.u) + numeric.log_scale;
  CHECK(std::abs(la - ln) < 1e-9);
}

TEST_CASE("propagate_segment is direction-consistent") {
  cplx lambda(0.7, 0.3);
  PropState seed = leftmost_seed(0.0, lambda, 0.0);
  PropState fwd = propagate_segment(-1.0, 0.0, lambda, 0.0, 0.8, seed);
  PropState back = propagate_segment(-1.0, 0.0, lambda, 0.8, 0.0, fwd);
  cplx r0 = seed.du / seed.u;
  cplx r1 = back.du / back.u;
  CHECK(std::abs(r0 - r1) < 1e-9);
  cplx l0 = std::log(seed.u) + seed.log_scale;
  cplx l1 = std::log(back.u) + back.log_scale;
  CHECK(std::abs(std::exp(l1 - l0) - cplx(1, 0)) < 1e-9);
}

TEST_CASE("numeric_ode_oracle closed forms") {
  auto zero = make_piecewise({}, {0.0}, {0.0});
  PropState seed;
  seed.u = cplx(1, 0);
  seed.du = cplx(1, 0);
  PropState out = numeric_ode_oracle(zero, cplx(0.5, 0), 0.0, seed, 1.0);
  cplx log_u = std::log(out.u) + out.log_scale;
  CHECK(std::abs(log_u - cplx(1, 0)) < 1e-9);

  auto one = make_piecewise({}, {0.0}, {1.0});
  PropState out2 = numeric_ode_oracle(one, cplx(1.5, 0), 0.0, seed, 2.0);
  cplx log_u2 = std::log(out2.u) + out2.log_scale;
  CHECK(std::abs(log_u2 - cplx(2, 0)) < 1e-9);
  CHECK(std::abs(out2.du / out2.u - cplx(1, 0)) < 1e-9);
}

TEST_CASE("solve_u ratios for constant drifts") {
  auto zero = make_piecewise({}, {0.0}, {0.0});
  LaplaceSolution sol = solve_u(zero, cplx(0.5, 0), {0.0, 1.0});
  cplx ratio = std::exp(sol.log_u(1.0) - sol.log_u(0.0));
  CHECK(std::abs(ratio - cplx(std::exp(1.0), 0)) < 1e-12);

  auto one = make_piecewise({}, {0.0}, {1.0});
  LaplaceSolution sol2 = solve_u(one, cplx(1.5, 0), {0.0, 1.0});
  cplx ratio2 = std::exp(sol2.log_u(1.0) - sol2.log_u(0.0));
  CHECK(std::abs(ratio2 - cplx(std::exp(1.0), 0)) < 1e-12);
}

TEST_CASE("solve_u matches the numeric oracle on a grid (clamp drift)") {
  auto cl = clamp_drift();
  cplx lambda(1, 0);
  LaplaceSolution sol = solve_u(cl, lambda);
  double start = cl.breakpoints.front();
  for (int i = 0; i <= 19; ++i) {
    double x = -1.0 + 3.0 * i / 19.0;
    cplx got = sol.log_u(x) - sol.log_u(start);
    cplx want = oracle_log_u(cl, lambda, x, start) -
                oracle_log_u(cl, lambda, start, start);
    CHECK(std::abs(std::exp(got - want) - cplx(1, 0)) < 1e-8);
  }
}

TEST_CASE("laplace_fpt closed forms and oracle agreement") {
  auto zero = make_piecewise({}, {0.0}, {0.0});
  for (double l : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    cplx got = laplace_fpt(zero, 0.0, 1.0, cplx(l, 0));
    double want = std::exp(-std::sqrt(2 * l));
    CHECK(std::abs(got - cplx(want, 0)) <= 1e-10 * want);
  }

  auto one = make_piecewise({}, {0.0}, {1.0});
  cplx got = laplace_fpt(one, 0.0, 1.0, cplx(1.5, 0));
  CHECK(std::abs(got - cplx(std::exp(-1.0), 0)) < 1e-10 * std::exp(-1.0));

  auto cl = clamp_drift();
  cplx v = laplace_fpt(cl, 0.0, 1.0, cplx(1, 0));
  cplx w = oracle_fpt(cl, 0.0, 1.0, cplx(1, 0));
  CHECK(std::abs(v - w) <= 1e-8 * std::abs(w));

  CHECK_THROWS_AS(laplace_fpt(zero, 1.0, 0.0, cplx(1, 0)), error);
  try {
    laplace_fpt(zero, 1.0, 1.0, cplx(1, 0));
    FAIL("expected throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::barrier_not_above);
  }
}

TEST_CASE("laplace_fpt agrees with the oracle for linearized tanh") {
  auto d = tanh_drift(16);
  for (cplx lambda : {cplx(0.5, 0), cplx(2, 0), cplx(1, 3)}) {
    cplx v = laplace_fpt(d, 0.0, 1.0, lambda);
    cplx w = oracle_fpt(d, 0.0, 1.0, lambda);
    CHECK(std::abs(v - w) <= 1e-8 * std::abs(w));
  }
}

TEST_CASE("ode_residual") {
  auto zero = make_piecewise({}, {0.0}, {0.0});
  LaplaceSolution sol = solve_u(zero, cplx(0.5, 0), {0.0, 1.0});
  CHECK(sol.ode_residual(0.3, 1e-4) < 1e-6);

  auto cl = clamp_drift();
  LaplaceSolution sol2 = solve_u(cl, cplx(1, 0), {0.0});
  CHECK(sol2.ode_residual(0.5, 1e-4) < 1e-6);
  CHECK(sol2.ode_residual(-1.7, 1e-4) < 1e-6);
  try {
    sol2.ode_residual(1.0 - 1e-6, 1e-4);
    FAIL("expected throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::too_close_to_breakpoint);
  }
}

TEST_CASE("C0/C1 matching at breakpoints via backward propagation") {
  // forward states are continuous by construction; propagating each segment
  // backward from the next node must reproduce them projectively
  auto d = tanh_drift(4);
  cplx lambda(1.3, 0.4);
  LaplaceSolution sol = solve_u(d, lambda);
  const auto& nodes = sol.nodes();
  const auto& states = sol.node_states();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double a = d.slopes[i + 1], b = d.intercepts[i + 1];
    PropState back =
        propagate_segment(a, b, lambda, nodes[i + 1], nodes[i], states[i + 1]);
    cplx jump = std::exp((std::log(back.u) + back.log_scale) -
                         (std::log(states[i].u) + states[i].log_scale));
    CHECK(std::abs(jump - cplx(1, 0)) < 1e-9);
    cplx slope_back = back.du / back.u;
    cplx slope_fwd = states[i].du / states[i].u;
    CHECK(std::abs(slope_back - slope_fwd) <=
          1e-9 * std::max(1.0, std::abs(slope_fwd)));
  }
}

TEST_CASE("transform is in (0,1) and monotone for real lambda") {
  auto cl = clamp_drift();
  double prev_in_x = 0.0;
  for (double x0 : {-1.5, -0.5, 0.0, 0.5, 0.9}) {
    double v = laplace_fpt(cl, x0, 1.0, cplx(1, 0)).real();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(v > prev_in_x);
    prev_in_x = v;
  }
  CHECK(laplace_fpt(cl, 1.0 - 1e-7, 1.0, cplx(1, 0)).real() ==
        doctest::Approx(1.0).epsilon(1e-3));

  double prev = 1.0;
  for (double l : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    double v = laplace_fpt(cl, 0.0, 1.0, cplx(l, 0)).real();
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("complete monotonicity spot check on a uniform lambda grid") {
  auto d = tanh_drift(8);
  std::vector<double> f;
  for (int k = 0; k <= 14; ++k)
    f.push_back(laplace_fpt(d, 0.0, 1.0, cplx(0.5 + 0.25 * k, 0)).real());
  for (std::size_t i = 0; i + 1 < f.size(); ++i) CHECK(f[i + 1] - f[i] < 0.0);
  for (std::size_t i = 0; i + 2 < f.size(); ++i)
    CHECK(f[i + 2] - 2 * f[i + 1] + f[i] > 0.0);
}

TEST_CASE("seed scale invariance") {
  auto cl = clamp_drift();
  cplx lambda(1.7, 0);
  LaplaceSolution base = solve_u(cl, lambda, {0.0, 1.0});
  LaplaceSolution scaled =
      solve_u(cl, lambda, {0.0, 1.0}, cplx(-137.0, 41.5));
  cplx r1 = std::exp(base.log_u(0.0) - base.log_u(1.0));
  cplx r2 = std::exp(scaled.log_u(0.0) - scaled.log_u(1.0));
  CHECK(std::abs(r1 - r2) <= 1e-12 * std::abs(r1));
}
