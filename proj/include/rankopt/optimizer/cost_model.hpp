#pragma once

#include "rankopt/engine/plan.hpp"
#include "rankopt/optimizer/cardinality.hpp"

namespace rankopt {

/// The "magic constants": one coefficient per operator work term.
struct CostCoefficients {
  double seq_scan = 1.0;
  double hash_join = 1.0;
  double merge_join = 1.0;
  double nested_loop_join = 1.0;
};

/// Mirror of the engine's work formulas evaluated on *estimated*
/// cardinalities. With unit coefficients and a perfect estimator the cost of
/// a plan equals its measured latency.
class CostModel {
 public:
  explicit CostModel(CostCoefficients coefficients = {}) : coefficients_(coefficients) {}

  double plan_cost(const PlanTree& plan, const CardinalityEstimator& estimator) const;

  /// Work term of a single join node given estimated input/output sizes.
  double join_cost(PlanOp op, double build, double probe, double out) const;
  double scan_cost(double base_rows) const { return coefficients_.seq_scan * base_rows; }

  /// Stamps est_rows / row_width annotations onto every node.
  void annotate(PlanTree& plan, const CardinalityEstimator& estimator,
                const Catalog& catalog) const;

  const CostCoefficients& coefficients() const { return coefficients_; }

 private:
  CostCoefficients coefficients_;
};

/// Total column count of the tables in `mask` (the engine's row width unit).
double subquery_row_width(const Query& query, uint32_t mask, const Catalog& catalog);

}  // namespace rankopt
