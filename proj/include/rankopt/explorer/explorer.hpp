#pragma once

#include <string>
#include <vector>

#include "rankopt/explorer/scaling.hpp"
#include "rankopt/optimizer/enumerator.hpp"
#include "rankopt/util/rng.hpp"

namespace rankopt {

/// One structurally valid plan drawn uniformly over
/// (binary tree shape x leaf permutation x per-node join operator).
PlanTree sample_random_plan(const Query& query, Rng& rng);

enum class ExploreStrategy { kHeuristic, kBruteForce, kRandom };

const std::string& strategy_name(ExploreStrategy strategy);
ExploreStrategy strategy_from_name(const std::string& name);

struct PlanProvenance {
  ExploreStrategy strategy = ExploreStrategy::kHeuristic;
  bool native = false;       // produced with the unscaled estimator
  double factor = 1.0;       // scaling factor f (heuristic), 1 for native
  int subquery_size = 0;     // size k whose estimates were scaled, 0 if n/a

  std::string describe() const;
};

struct Candidate {
  PlanTree plan;
  PlanProvenance provenance;
};

struct CandidateList {
  std::string query_id;
  std::vector<Candidate> candidates;
  /// Number of optimizer invocations performed to produce the list (before
  /// dedup); tests pin the Proposition bounds on this.
  int generation_calls = 0;

  bool contains_structure(const PlanTree& plan) const;
};

struct ExplorerConfig {
  int max_candidates = 50;            // cap applied after dedup, priority order
  int bruteforce_max_subqueries = 12; // guard on the 2^q blow-up
  EnumeratorConfig enumerator;
};

/// Candidate-plan generation by cardinality tuning. All strategies
/// deduplicate structurally and never annotate beyond est_rows.
class PlanExplorer {
 public:
  PlanExplorer(const CardinalityEstimator& base, const CostModel& cost_model,
               ExplorerConfig config = {})
      : base_(&base), cost_model_(&cost_model), config_(config) {}

  /// Fig.-3-style sweep: factors in increasing |log f|, sizes k = 1..q inside;
  /// one optimizer call per (f, k). The native plan is always first.
  CandidateList explore_heuristic(const Query& query, double alpha, double delta) const;

  /// One optimizer call per assignment of a factor to every connected
  /// sub-query; |F|^(#connected sub-queries) calls. Errors out when the
  /// sub-query count exceeds the guard.
  CandidateList explore_bruteforce(const Query& query, double alpha, double delta) const;

  /// n structurally valid plans drawn uniformly over
  /// (tree shape x leaf permutation x per-node operator). The native plan is
  /// not automatically included.
  CandidateList explore_random(const Query& query, int n, uint64_t seed) const;

  const ExplorerConfig& config() const { return config_; }

 private:
  const CardinalityEstimator* base_;
  const CostModel* cost_model_;
  ExplorerConfig config_;
};

}  // namespace rankopt
