#pragma once

#include <vector>

namespace rankopt {

/// The geometric grid of cardinality multipliers {alpha^t} for integer t in
/// [floor(-log_alpha delta), ceil(log_alpha delta)]. `factors` is kept in
/// exploration priority order: increasing |log f|, smaller factor first on
/// ties, so it always starts with 1.
struct ScalingFactorSet {
  double alpha = 0.0;
  double delta = 0.0;
  std::vector<double> factors;

  /// The same factors sorted ascending.
  std::vector<double> sorted() const;
};

ScalingFactorSet scaling_factors(double alpha, double delta);

}  // namespace rankopt
