#pragma once

#include <stdexcept>
#include <string>

namespace fpt {

enum class errc {
  // drift
  non_monotone_breakpoints,
  discontinuous_drift,
  non_constant_tail,
  empty_domain,
  unbounded_value,
  sigma_vanishes,
  quadrature_fail,
  // specfun
  pole_at_nonpositive_integer,
  b_nonpositive_integer,
  series_diverged,
  // lapsolve
  nonpositive_lambda,
  degenerate_seed,
  singular_basis_matrix,
  overflow,
  barrier_not_above,
  too_close_to_breakpoint,
  step_underflow,
  // invert
  inversion_unstable,
  negative_density,
  monotonicity_violation,
  // mc
  invalid_config,
  // cli / config
  syntax_error,
  unknown_identifier,
  missing_field,
  unknown_field,
  type_mismatch,
  constraint_violation,
  io_error,
  invalid_argument,
};

class error : public std::runtime_error {
 public:
  error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

// True for the error classes that a front end should report as a usage or
// configuration problem (exit code 2) rather than a numerical failure.
inline bool is_usage_error(errc code) {
  switch (code) {
    case errc::non_monotone_breakpoints:
    case errc::discontinuous_drift:
    case errc::non_constant_tail:
    case errc::empty_domain:
    case errc::barrier_not_above:
    case errc::invalid_config:
    case errc::syntax_error:
    case errc::unknown_identifier:
    case errc::missing_field:
    case errc::unknown_field:
    case errc::type_mismatch:
    case errc::constraint_violation:
    case errc::io_error:
    case errc::invalid_argument:
      return true;
    default:
      return false;
  }
}

}  // namespace fpt
