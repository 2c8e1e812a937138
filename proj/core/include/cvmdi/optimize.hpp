#pragma once

#include <functional>

#include "cvmdi/types.hpp"

namespace cvmdi {

struct Maximum {
  Real argmax = 0;
  Real value = 0;
  int evaluations = 0;
};

using Objective = std::function<Real(Real)>;

/// Golden-section search for the maximum of a unimodal function on
/// [lo, hi], stopping when the bracket is narrower than `tol`. The better
/// endpoint is returned if it beats the interior optimum.
Maximum golden_section_maximize(const Objective& f, Real lo, Real hi, Real tol);

/// Evaluates f on `points` equally spaced nodes of [lo, hi], then refines
/// with golden-section inside the bracket around the best node. Guards
/// against shallow secondary maxima that a bare golden-section search can
/// lock onto.
Maximum scan_then_golden(const Objective& f, Real lo, Real hi, int points,
                         Real tol);

/// Bisection for the last point where `positive` holds, given
/// positive(lo) && !positive(hi). Returns the lower end of the final bracket
/// of width <= tol.
Real bisect_last_positive(const std::function<bool(Real)>& positive, Real lo,
                          Real hi, Real tol);

}  // namespace cvmdi
