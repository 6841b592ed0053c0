#include "rankopt/optimizer/enumerator.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <vector>

namespace rankopt {

namespace {

constexpr std::array<PlanOp, 3> kJoinOps = {PlanOp::kHashJoin, PlanOp::kMergeJoin,
                                            PlanOp::kNestedLoopJoin};

std::string sorted_table_key(const Query& query, uint32_t mask) {
  std::vector<std::string> names;
  for (int t = 0; t < query.table_count(); ++t) {
    if ((mask >> t) & 1u) {
      names.push_back(query.tables[t]);
    }
  }
  std::sort(names.begin(), names.end());
  std::string key;
  for (const auto& name : names) {
    key += name;
    key += ',';
  }
  return key;
}

struct DpEntry {
  bool valid = false;
  double cost = 0.0;
  std::unique_ptr<PlanNode> plan;
  std::string tie_key;  // (sorted left-subset names, operator) of the final join
};

}  // namespace

PlanTree enumerate_best_plan(const Query& query, const CardinalityEstimator& estimator,
                             const CostModel& cost_model, const EnumeratorConfig& config) {
  const int q = query.table_count();
  check(q >= 1, "query has no tables");
  check(q <= config.max_tables,
        "query exceeds the enumerator table limit (" + std::to_string(config.max_tables) + ")");
  check(induced_connected(query, query.full_mask()), "query join graph is not connected");

  const uint32_t full = query.full_mask();
  std::vector<DpEntry> dp(full + 1);

  for (uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) == 1) {
      const int table = std::countr_zero(mask);
      dp[mask].valid = true;
      dp[mask].cost =
          cost_model.scan_cost(estimator.base_rows(query, table));
      dp[mask].plan = make_scan(query, table);
      dp[mask].plan->est_rows = estimator.estimate({&query, mask});
      continue;
    }
    if (!induced_connected(query, mask)) {
      continue;
    }

    const double out_rows = estimator.estimate({&query, mask});
    DpEntry best;
    // Ordered partitions: every proper submask is a candidate left (build)
    // side, its complement the right (probe) side.
    for (uint32_t left = (mask - 1) & mask; left != 0; left = (left - 1) & mask) {
      const uint32_t right = mask ^ left;
      if (!dp[left].valid || !dp[right].valid) continue;
      const double build = estimator.estimate({&query, left});
      const double probe = estimator.estimate({&query, right});
      const double children_cost = dp[left].cost + dp[right].cost;
      for (const PlanOp op : kJoinOps) {
        const double cost = children_cost + cost_model.join_cost(op, build, probe, out_rows);
        bool take = false;
        if (!best.valid || cost < best.cost) {
          take = true;
        } else if (cost == best.cost) {
          const std::string key = sorted_table_key(query, left) + op_name(op);
          take = key < best.tie_key;
        }
        if (take) {
          best.valid = true;
          best.cost = cost;
          best.tie_key = sorted_table_key(query, left) + op_name(op);
          auto node = make_join(op, clone_subtree(*dp[left].plan), clone_subtree(*dp[right].plan));
          node->est_rows = out_rows;
          best.plan = std::move(node);
        }
      }
    }
    check(best.valid, "internal: connected mask without a valid partition");
    dp[mask] = std::move(best);
  }

  check(dp[full].valid, "internal: no plan for the full query");
  PlanTree plan(&query, std::move(dp[full].plan));
  plan.validate();
  return plan;
}

}  // namespace rankopt
