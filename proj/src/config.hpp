#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drift.hpp"
#include "invert.hpp"
#include "mc.hpp"

namespace fpt {

// A run configuration as loaded from the key-value config format (see the
// README for the grammar). Exactly one drift form is present: either an
// expression with a domain, or explicit piecewise lists.
struct RunConfig {
  // [drift]
  std::optional<std::string> expression;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  int resolution = 64;
  std::optional<double> m1;
  std::optional<double> m2;
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  std::vector<double> intercepts;
  bool has_piecewise = false;

  // [query]
  double x0 = 0.0;
  double barrier = 0.0;

  // [inversion]
  InversionConfig inversion;

  // [grid]
  double t_max = 2.0;
  int steps = 50;

  // [mc]
  bool has_mc = false;
  McConfig mc;

  // Canonical piecewise drift: the lists as given, or the linearized
  // expression at `resolution` nodes per unit over the domain.
  PiecewiseLinearDrift build_drift() const;

  // Evaluator plus (m1, m2) constants, for mc and the approximation budget.
  DriftFunction drift_function() const;

  // Uniform time grid: t_max * k / steps, k = 1..steps.
  std::vector<double> time_grid() const;
};

// Strict parse: unknown sections or keys are rejected, every value must have
// the right type, and cross-field constraints (x0 < barrier, exactly one
// drift form, positive grid) are enforced.
RunConfig load_config(const std::string& path);

}  // namespace fpt
