#pragma once

#include <cstdint>
#include <functional>

namespace fpt {

struct McConfig {
  std::uint64_t n_paths = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool bridge_correction = true;
  double horizon = 0.0;

  void validate() const;
};

struct McEstimate {
  double p_hat;
  double std_err;
  std::uint64_t n_paths;
};

// P(Brownian bridge from x_k to x_k1 over dt exceeds c), both endpoints
// strictly below c.
double bridge_crossing_prob(double x_k, double x_k1, double c, double dt);

// Euler scheme for dX = mu(X)dt + dW with optional per-step bridge crossing
// correction. Deterministic for a fixed seed: every normal and uniform draw
// comes from a counter-based stream indexed by (path, step), so the result
// does not depend on how paths are distributed over threads.
McEstimate estimate_crossing(const std::function<double(double)>& mu,
                             double x0, double c, const McConfig& cfg);

// Antithetic variant: paths come in (+Z, -Z) pairs, n_paths must be even,
// std_err is computed over pair averages.
McEstimate estimate_crossing_antithetic(const std::function<double(double)>& mu,
                                        double x0, double c,
                                        const McConfig& cfg);

}  // namespace fpt
