#include "rankopt/optimizer/cost_model.hpp"

#include <cmath>

namespace rankopt {

namespace {

double xlog2(double x) { return x > 1.0 ? x * std::log2(x) : 0.0; }

}  // namespace

double CostModel::join_cost(PlanOp op, double build, double probe, double out) const {
  switch (op) {
    case PlanOp::kHashJoin:
      return coefficients_.hash_join * (build + probe + out);
    case PlanOp::kMergeJoin:
      return coefficients_.merge_join * (xlog2(build) + xlog2(probe) + build + probe + out);
    case PlanOp::kNestedLoopJoin:
      return coefficients_.nested_loop_join * (build * probe + out);
    case PlanOp::kSeqScan:
      break;
  }
  fail("scan nodes have no join cost");
}

double CostModel::plan_cost(const PlanTree& plan, const CardinalityEstimator& estimator) const {
  check(plan.root != nullptr && plan.query != nullptr, "cannot cost an empty plan");
  const Query& query = *plan.query;

  auto walk = [&](auto&& self, const PlanNode& node) -> double {
    if (node.is_scan()) {
      return scan_cost(estimator.base_rows(query, node.table));
    }
    double cost = self(self, *node.left) + self(self, *node.right);
    const double build = estimator.estimate({&query, node.left->mask});
    const double probe = estimator.estimate({&query, node.right->mask});
    const double out = estimator.estimate({&query, node.mask});
    return cost + join_cost(node.op, build, probe, out);
  };
  return walk(walk, *plan.root);
}

void CostModel::annotate(PlanTree& plan, const CardinalityEstimator& estimator,
                         const Catalog& catalog) const {
  check(plan.root != nullptr && plan.query != nullptr, "cannot annotate an empty plan");
  const Query& query = *plan.query;
  auto walk = [&](auto&& self, PlanNode& node) -> void {
    node.est_rows = estimator.estimate({&query, node.mask});
    node.row_width = subquery_row_width(query, node.mask, catalog);
    if (node.left) self(self, *node.left);
    if (node.right) self(self, *node.right);
  };
  walk(walk, *plan.root);
}

double subquery_row_width(const Query& query, uint32_t mask, const Catalog& catalog) {
  double width = 0.0;
  for (int t = 0; t < query.table_count(); ++t) {
    if ((mask >> t) & 1u) {
      width += static_cast<double>(catalog.table(query.tables[t]).columns.size());
    }
  }
  return width;
}

}  // namespace rankopt
