#include "rankopt/explorer/explorer.hpp"

#include <array>
#include <cmath>
#include <unordered_set>

#include "rankopt/util/rng.hpp"

namespace rankopt {

namespace {

const std::array<std::string, 3> kStrategyNames = {"heuristic", "bruteforce", "random"};

std::string format_factor(double factor) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", factor);
  return buffer;
}

// Deduplicating collector that preserves first-seen (priority) order and
// applies the candidate cap.
class CandidateCollector {
 public:
  CandidateCollector(std::string query_id, int cap) : cap_(cap) { list_.query_id = std::move(query_id); }

  void add(PlanTree plan, PlanProvenance provenance) {
    ++list_.generation_calls;
    if (static_cast<int>(list_.candidates.size()) >= cap_) return;
    if (!seen_.insert(plan.serialize()).second) return;
    list_.candidates.push_back({std::move(plan), provenance});
  }

  CandidateList take() { return std::move(list_); }

 private:
  CandidateList list_;
  std::unordered_set<std::string> seen_;
  int cap_;
};

// Number of binary tree shapes with n leaves is Catalan(n - 1).
std::vector<double> catalan_numbers(int n) {
  std::vector<double> catalan(n + 1, 0.0);
  catalan[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 0; j < i; ++j) {
      catalan[i] += catalan[j] * catalan[i - 1 - j];
    }
  }
  return catalan;
}

std::unique_ptr<PlanNode> random_tree(const Query& query, const std::vector<int>& leaves,
                                      size_t begin, size_t end, const std::vector<double>& catalan,
                                      Rng& rng) {
  const size_t n = end - begin;
  if (n == 1) {
    return make_scan(query, leaves[begin]);
  }
  // Left subtree size s with probability Catalan(s-1)*Catalan(n-s-1)/Catalan(n-1).
  std::vector<double> weights(n - 1);
  for (size_t s = 1; s < n; ++s) {
    weights[s - 1] = catalan[s - 1] * catalan[n - s - 1];
  }
  const size_t split = 1 + rng.next_weighted(weights);
  auto left = random_tree(query, leaves, begin, begin + split, catalan, rng);
  auto right = random_tree(query, leaves, begin + split, end, catalan, rng);
  constexpr std::array<PlanOp, 3> ops = {PlanOp::kHashJoin, PlanOp::kMergeJoin,
                                         PlanOp::kNestedLoopJoin};
  return make_join(ops[rng.next_below(3)], std::move(left), std::move(right));
}

}  // namespace

PlanTree sample_random_plan(const Query& query, Rng& rng) {
  const int q = query.table_count();
  const auto catalan = catalan_numbers(q);
  std::vector<int> leaves(q);
  for (int t = 0; t < q; ++t) leaves[t] = t;
  rng.shuffle(leaves);
  PlanTree plan(&query, random_tree(query, leaves, 0, leaves.size(), catalan, rng));
  plan.validate();
  return plan;
}

const std::string& strategy_name(ExploreStrategy strategy) {
  return kStrategyNames[static_cast<int>(strategy)];
}

ExploreStrategy strategy_from_name(const std::string& name) {
  for (size_t i = 0; i < kStrategyNames.size(); ++i) {
    if (kStrategyNames[i] == name) {
      return static_cast<ExploreStrategy>(i);
    }
  }
  fail("unknown exploration strategy '" + name + "'");
}

std::string PlanProvenance::describe() const {
  if (native) return "native";
  std::string text = strategy_name(strategy);
  if (strategy == ExploreStrategy::kHeuristic) {
    text += ":f=" + format_factor(factor) + ",k=" + std::to_string(subquery_size);
  }
  return text;
}

bool CandidateList::contains_structure(const PlanTree& plan) const {
  const auto key = plan.serialize();
  for (const auto& candidate : candidates) {
    if (candidate.plan.serialize() == key) {
      return true;
    }
  }
  return false;
}

CandidateList PlanExplorer::explore_heuristic(const Query& query, double alpha,
                                              double delta) const {
  const auto factors = scaling_factors(alpha, delta);
  const int q = query.table_count();
  CandidateCollector collector(query.id, config_.max_candidates);

  for (const double factor : factors.factors) {
    for (int k = 1; k <= q; ++k) {
      const TunedEstimator tuned(*base_, k, factor);
      PlanTree plan = enumerate_best_plan(query, tuned, *cost_model_, config_.enumerator);
      PlanProvenance provenance;
      provenance.strategy = ExploreStrategy::kHeuristic;
      provenance.native = factor == 1.0;
      provenance.factor = factor;
      provenance.subquery_size = k;
      collector.add(std::move(plan), provenance);
    }
  }
  return collector.take();
}

CandidateList PlanExplorer::explore_bruteforce(const Query& query, double alpha,
                                               double delta) const {
  const auto masks = connected_subquery_masks(query);
  check(static_cast<int>(masks.size()) <= config_.bruteforce_max_subqueries,
        "brute-force exploration guard exceeded (" + std::to_string(masks.size()) +
            " connected sub-queries); use the heuristic strategy");

  const auto factors = scaling_factors(alpha, delta);
  const size_t base = factors.factors.size();
  CandidateCollector collector(query.id, config_.max_candidates);

  // Odometer over factor assignments; digit i picks the factor of masks[i].
  // Starting at all-zero digits means the first assignment is all-ones
  // (factors.factors.front() == 1), i.e. the native plan.
  std::vector<size_t> digits(masks.size(), 0);
  while (true) {
    std::map<uint32_t, double> assignment;
    bool all_native = true;
    for (size_t i = 0; i < masks.size(); ++i) {
      const double factor = factors.factors[digits[i]];
      assignment[masks[i]] = factor;
      all_native &= factor == 1.0;
    }
    const AssignmentEstimator estimator(*base_, std::move(assignment));
    PlanTree plan = enumerate_best_plan(query, estimator, *cost_model_, config_.enumerator);
    PlanProvenance provenance;
    provenance.strategy = ExploreStrategy::kBruteForce;
    provenance.native = all_native;
    collector.add(std::move(plan), provenance);

    size_t i = 0;
    while (i < digits.size() && ++digits[i] == base) {
      digits[i] = 0;
      ++i;
    }
    if (i == digits.size()) break;
  }
  return collector.take();
}

CandidateList PlanExplorer::explore_random(const Query& query, int n, uint64_t seed) const {
  check(n >= 1, "random exploration needs n >= 1");
  Rng rng(seed);
  CandidateCollector collector(query.id, config_.max_candidates);
  for (int i = 0; i < n; ++i) {
    PlanProvenance provenance;
    provenance.strategy = ExploreStrategy::kRandom;
    collector.add(sample_random_plan(query, rng), provenance);
  }
  return collector.take();
}

}  // namespace rankopt
