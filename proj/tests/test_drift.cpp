#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "drift.hpp"
#include "error.hpp"

using namespace fpt;

namespace {

PiecewiseLinearDrift clamp_drift() {
  // mu(x) = clamp(-x, -1, 1)
  return make_piecewise({-1.0, 1.0}, {0.0, -1.0, 0.0}, {1.0, 0.0, -1.0});
}

}  // namespace

TEST_CASE("make_piecewise validation") {
  auto zero = make_piecewise({}, {0.0}, {0.0});
  CHECK(zero.eval(3.7) == 0.0);

  CHECK_THROWS_AS(make_piecewise({-1, 1}, {0, -1, 0}, {-1, 0, 1}), error);
  try {
    make_piecewise({-1, 1}, {0, -1, 0}, {-1, 0, 1});
  } catch (const error& e) {
    CHECK(e.code() == errc::discontinuous_drift);
  }

  auto cl = clamp_drift();
  CHECK(cl.eval(-2.0) == 1.0);
  CHECK(cl.eval(0.25) == doctest::Approx(-0.25));
  CHECK(cl.eval(5.0) == -1.0);

  try {
    make_piecewise({1, -1}, {0, -1, 0}, {1, 0, -1});
    FAIL("expected throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::non_monotone_breakpoints);
  }
  try {
    make_piecewise({0.0}, {1.0, 0.0}, {0.0, 0.0});
    FAIL("expected throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::non_constant_tail);
  }
  CHECK_THROWS_AS(make_piecewise({0.0}, {0.0}, {0.0}), error);
}

TEST_CASE("segment lookup equals direct formula") {
  auto d = make_piecewise({-2, -0.5, 0.5, 2},
                          {0.0, 1.0, -2.0, 1.0, 0.0},
                          {1.0, 3.0, 1.5, 0.0, 2.0});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> xs(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    double x = xs(rng);
    std::size_t idx = d.segment_index(x);
    CHECK(d.eval(x) == d.slopes[idx] * x + d.intercepts[idx]);
    if (idx > 0) CHECK(x >= d.breakpoints[idx - 1]);
    if (idx < d.breakpoints.size()) CHECK(x <= d.breakpoints[idx]);
  }
}

TEST_CASE("linearize reproduces linear and constant drifts exactly") {
  auto identity = make_drift_function([](double x) { return x; }, -1, 1, 1, 1);
  auto lin = linearize(identity, -1, 1, 4);
  for (double x = -1.0; x <= 1.0; x += 1.0 / 64)
    CHECK(lin.eval(x) == doctest::Approx(x).epsilon(1e-14));
  CHECK(lin.eval(-9.0) == doctest::Approx(-1.0));
  CHECK(lin.eval(9.0) == doctest::Approx(1.0));

  auto constant = make_drift_function([](double) { return 0.7; }, -2, 2, 0.7, 0);
  auto c = linearize(constant, -2, 2, 3);
  for (double x : {-10.0, -1.3, 0.0, 2.0, 10.0})
    CHECK(c.eval(x) == doctest::Approx(0.7));
}

TEST_CASE("linearize sup error bound for tanh") {
  auto fn = make_drift_function([](double x) { return std::tanh(x); }, -4, 4,
                                1.0, 1.0);
  for (int n : {8, 16, 32}) {
    auto d = linearize(fn, -4, 4, n);
    CHECK(d.canonical());
    // continuity holds at every node
    for (std::size_t i = 0; i < d.breakpoints.size(); ++i) {
      double x = d.breakpoints[i];
      CHECK(d.slopes[i] * x + d.intercepts[i] ==
            doctest::Approx(d.slopes[i + 1] * x + d.intercepts[i + 1])
                .epsilon(1e-12));
    }
    double sup = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      double x = -4.0 + 8.0 * i / 10000;
      sup = std::max(sup, std::abs(d.eval(x) - std::tanh(x)));
    }
    CHECK(sup <= 1.0 / n + 1e-12);
  }
}

TEST_CASE("antiderivative_diff") {
  auto one = make_piecewise({}, {0.0}, {1.0});
  CHECK(antiderivative_diff(one, 0, 1) == doctest::Approx(1.0));

  auto minus_x = make_piecewise_unchecked({}, {-1.0}, {0.0});
  CHECK(antiderivative_diff(minus_x, 0, 1) == doctest::Approx(-0.5));

  auto zero = make_piecewise({}, {0.0}, {0.0});
  CHECK(antiderivative_diff(zero, -3.2, 7.9) == 0.0);

  auto cl = clamp_drift();
  double ab = antiderivative_diff(cl, -2.5, 0.3);
  double bc = antiderivative_diff(cl, 0.3, 1.8);
  double ac = antiderivative_diff(cl, -2.5, 1.8);
  CHECK(ab + bc == doctest::Approx(ac).epsilon(1e-12));
  CHECK(antiderivative_diff(cl, 1.8, -2.5) == doctest::Approx(-ac));
}

TEST_CASE("m_constant") {
  CHECK(m_constant(make_piecewise({}, {0.0}, {1.0})) == doctest::Approx(1.0));
  CHECK(m_constant(make_piecewise({}, {0.0}, {0.0})) == doctest::Approx(0.0));
  CHECK(m_constant(make_piecewise_unchecked({}, {-1.0}, {0.0})) ==
        doctest::Approx(-1.0 / 3));
  CHECK(m_constant(clamp_drift()) == doctest::Approx(-1.0 / 3));

  auto fn = make_drift_function([](double x) { return std::sin(x); }, -4, 4,
                                1.0, 1.0);
  for (int n : {4, 16}) {
    auto d = linearize(fn, -4, 4, n);
    double m2 = 0.0;
    for (double a : d.slopes) m2 = std::max(m2, std::abs(a));
    CHECK(m_constant(d) >= -m2 / 3 - 1e-12);
  }
}

TEST_CASE("extremes") {
  auto zero = make_piecewise({}, {0.0}, {0.0});
  CHECK(extremes(zero) == std::pair<double, double>{0.0, 0.0});
  auto cl = clamp_drift();
  auto [lo, hi] = extremes(cl);
  CHECK(lo == doctest::Approx(-1.0));
  CHECK(hi == doctest::Approx(1.0));
  auto two = make_piecewise({}, {0.0}, {2.0});
  CHECK(extremes(two).first == doctest::Approx(2.0));
  CHECK_THROWS_AS(extremes(make_piecewise_unchecked({}, {1.0}, {0.0})), error);
}

TEST_CASE("lamperti") {
  auto r1 = lamperti([](double) { return 0.0; }, [](double) { return 2.0; },
                     [](double) { return 0.0; }, 0.0, 1.0);
  CHECK(r1.f_value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r1.new_drift_value == doctest::Approx(0.0));

  auto r2 = lamperti([](double) { return 0.0; }, [](double y) { return y; },
                     [](double) { return 1.0; }, 1.0, std::exp(1.0));
  CHECK(r2.f_value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r2.new_drift_value == doctest::Approx(-0.5));

  auto r3 = lamperti([](double y) { return y; }, [](double) { return 1.0; },
                     [](double) { return 0.0; }, 0.0, 0.8);
  CHECK(r3.f_value == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(r3.new_drift_value == doctest::Approx(0.8));

  CHECK_THROWS_AS(lamperti([](double) { return 0.0; },
                           [](double y) { return y; },
                           [](double) { return 1.0; }, -1.0, 1.0),
                  error);
}

TEST_CASE("with_extra_breakpoints preserves the function") {
  auto cl = clamp_drift();
  auto split = with_extra_breakpoints(cl, {0.0, -1.0, 0.25});
  CHECK(split.breakpoints.size() == 4);
  for (double x : {-3.0, -1.0, -0.2, 0.0, 0.25, 0.9, 4.0})
    CHECK(split.eval(x) == doctest::Approx(cl.eval(x)).epsilon(1e-14));
}

TEST_CASE("make_drift_function estimates constants") {
  auto fn = make_drift_function([](double x) { return std::tanh(x); }, -4, 4);
  CHECK(fn.m1 >= std::tanh(4.0));
  CHECK(fn.m1 <= 1.2);
  CHECK(fn.m2 >= 0.9);
  CHECK(fn.m2 <= 1.2);
  CHECK_THROWS_AS(make_drift_function([](double) { return 1.0; }, 1, 1), error);
  CHECK_THROWS_AS(
      linearize(make_drift_function(
                    [](double x) {
                      return x < 0.5 ? 0.0
                                     : std::numeric_limits<double>::infinity();
                    },
                    -1, 0.4, 1, 1),
                -1, 1, 4),
      error);
}
