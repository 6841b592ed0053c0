#pragma once

#include "rankopt/optimizer/cost_model.hpp"

namespace rankopt {

struct EnumeratorConfig {
  int max_tables = 10;  // DP over 2^q sub-queries; hard error beyond this
};

/// Exact dynamic programming over connected sub-queries (bushy trees
/// allowed). For every connected mask the cheapest (left subset, operator)
/// combination under the estimator wins; exact cost ties break to the
/// lexicographically smallest (sorted left-subset table names, operator
/// name). Deterministic for a fixed estimator and query.
PlanTree enumerate_best_plan(const Query& query, const CardinalityEstimator& estimator,
                             const CostModel& cost_model, const EnumeratorConfig& config = {});

}  // namespace rankopt
