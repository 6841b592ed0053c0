#include "rankopt/explorer/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "rankopt/util/check.hpp"

namespace rankopt {

namespace {

// floor/ceil of log_alpha(delta) with a snap-to-integer guard, so that e.g.
// log_10(100) cannot round to 2.0000000000000004 and widen the grid.
constexpr double kSnapEpsilon = 1e-9;

int snapped_floor(double x) {
  const double rounded = std::round(x);
  if (std::abs(x - rounded) < kSnapEpsilon) return static_cast<int>(rounded);
  return static_cast<int>(std::floor(x));
}

int snapped_ceil(double x) {
  const double rounded = std::round(x);
  if (std::abs(x - rounded) < kSnapEpsilon) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(x));
}

// alpha^|t| by repeated multiplication (exact for integral alpha in the
// usual ranges), inverted for negative t.
double integer_power(double alpha, int t) {
  double value = 1.0;
  for (int i = 0; i < std::abs(t); ++i) {
    value *= alpha;
  }
  return t >= 0 ? value : 1.0 / value;
}

}  // namespace

std::vector<double> ScalingFactorSet::sorted() const {
  auto copy = factors;
  std::sort(copy.begin(), copy.end());
  return copy;
}

ScalingFactorSet scaling_factors(double alpha, double delta) {
  check(alpha > 1.0, "scaling factors require alpha > 1");
  check(delta >= 1.0, "scaling factors require delta >= 1");

  const double log_delta = std::log(delta) / std::log(alpha);
  const int t_lo = snapped_floor(-log_delta);
  const int t_hi = snapped_ceil(log_delta);

  std::vector<int> exponents;
  for (int t = t_lo; t <= t_hi; ++t) {
    exponents.push_back(t);
  }
  // Priority order: increasing |t|, negative exponent (smaller factor) first.
  std::stable_sort(exponents.begin(), exponents.end(), [](int a, int b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });

  ScalingFactorSet set;
  set.alpha = alpha;
  set.delta = delta;
  set.factors.reserve(exponents.size());
  for (const int t : exponents) {
    set.factors.push_back(integer_power(alpha, t));
  }
  return set;
}

}  // namespace rankopt
