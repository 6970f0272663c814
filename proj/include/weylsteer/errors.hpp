#pragma once

#include <stdexcept>
#include <string>

namespace weylsteer {

// Parameter combination that cannot produce the requested gate
// (negative radicand, violated constraint box, ...).
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown: non-convergence, reconstruction below tolerance,
// domain collapse of an integrand.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Steering system hit a degenerate denominator; carries the time at which
// the right-hand side could not be evaluated.
struct SingularStateError : NumericalError {
  SingularStateError(const std::string& what, double when)
      : NumericalError(what), t(when) {}
  double t;
};

}  // namespace weylsteer
