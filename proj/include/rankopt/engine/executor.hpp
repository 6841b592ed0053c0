#pragma once

#include <cstdint>

#include "rankopt/engine/catalog.hpp"
#include "rankopt/engine/plan.hpp"
#include "rankopt/engine/query.hpp"

namespace rankopt {

/// Multipliers applied to each operator's work term. Defaults of 1.0 keep
/// the latency oracle equal to the raw work formulas.
struct OperatorWeights {
  double seq_scan = 1.0;
  double hash_join = 1.0;
  double merge_join = 1.0;
  double nested_loop_join = 1.0;
};

struct LatencyMeasurement {
  double latency = 0.0;       // deterministic work units
  uint64_t output_rows = 0;   // true cardinality of the root
};

/// Deterministic latency oracle. Plans are evaluated against the stored data
/// with true intermediate sizes; the "latency" is a sum of per-operator work
/// terms rather than wall-clock time:
///   SeqScan          rows_in
///   HashJoin         build + probe + out
///   MergeJoin        build*log2(build) + probe*log2(probe) + (build+probe) + out
///   NestedLoopJoin   build * probe + out
/// where build/probe are the left/right child output sizes. Joins are always
/// evaluated with a hash table internally; the operator choice only selects
/// the work formula, so pathological plans stay cheap to measure.
class Executor {
 public:
  explicit Executor(const Database& db, OperatorWeights weights = {})
      : db_(&db), weights_(weights) {}

  LatencyMeasurement execute_plan(const PlanTree& plan) const;

  /// Exact row count of the induced join + filters, by actually joining.
  /// Rejects disconnected sub-queries.
  uint64_t true_cardinality(const SubQuery& sub) const;

  const OperatorWeights& weights() const { return weights_; }
  const Database& db() const { return *db_; }

 private:
  const Database* db_;
  OperatorWeights weights_;
};

}  // namespace rankopt
