#include "cvmdi/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "cvmdi/errors.hpp"

namespace cvmdi {
namespace {

const Real kInvPhi = (std::sqrt(5.0L) - 1) / 2;

}  // namespace

Maximum golden_section_maximize(const Objective& f, Real lo, Real hi, Real tol) {
  if (!(hi >= lo)) throw InvalidArgument("golden_section: empty bracket");
  Maximum best;
  auto consider = [&](Real x, Real v) {
    ++best.evaluations;
    if (best.evaluations == 1 || v > best.value) {
      best.argmax = x;
      best.value = v;
    }
  };

  Real a = lo;
  Real b = hi;
  Real x1 = b - kInvPhi * (b - a);
  Real x2 = a + kInvPhi * (b - a);
  Real f1 = f(x1);
  Real f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
      consider(x2, f2);
    }
  }
  consider(lo, f(lo));
  consider(hi, f(hi));
  return best;
}

Maximum scan_then_golden(const Objective& f, Real lo, Real hi, int points,
                         Real tol) {
  if (points < 3) throw InvalidArgument("scan_then_golden: need >= 3 points");
  const Real step = (hi - lo) / (points - 1);
  int best_index = 0;
  Real best_value = 0;
  for (int i = 0; i < points; ++i) {
    const Real v = f(lo + step * i);
    if (i == 0 || v > best_value) {
      best_value = v;
      best_index = i;
    }
  }
  const Real a = lo + step * std::max(best_index - 1, 0);
  const Real b = lo + step * std::min(best_index + 1, points - 1);
  Maximum refined = golden_section_maximize(f, a, b, tol);
  refined.evaluations += points;
  if (best_value > refined.value) {
    refined.argmax = lo + step * best_index;
    refined.value = best_value;
  }
  return refined;
}

Real bisect_last_positive(const std::function<bool(Real)>& positive, Real lo,
                          Real hi, Real tol) {
  while (hi - lo > tol) {
    const Real mid = (lo + hi) / 2;
    if (positive(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace cvmdi
