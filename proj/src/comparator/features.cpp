#include "rankopt/comparator/features.hpp"

#include <algorithm>
#include <cmath>

#include "rankopt/optimizer/cost_model.hpp"

namespace rankopt {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double normalize(double value, double lo, double hi) {
  if (hi <= lo) {
    return 0.5;  // degenerate bounds: everything maps to the midpoint
  }
  return clamp01((value - lo) / (hi - lo));
}

}  // namespace

double FeatureBounds::normalize_log_card(double rows) const {
  return normalize(std::log(std::max(rows, 1.0)), log_card_min, log_card_max);
}

double FeatureBounds::normalize_width(double width) const {
  return normalize(width, width_min, width_max);
}

int feature_vector_width(const Catalog& catalog) {
  return kOperatorCount + 2 + static_cast<int>(catalog.tables.size());
}

FeatureTree featurize(const PlanTree& plan, const CardinalityEstimator& estimator,
                      const FeatureBounds& bounds, const Catalog& catalog) {
  check(plan.root != nullptr && plan.query != nullptr, "cannot featurize an empty plan");
  const Query& query = *plan.query;
  const int width = feature_vector_width(catalog);
  const int table_count = static_cast<int>(catalog.tables.size());

  FeatureTree tree;
  tree.nodes.reserve(plan.node_count());

  auto encode = [&](auto&& self, const PlanNode& node) -> int {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[index].x = Eigen::VectorXd::Zero(width);

    Eigen::VectorXd& x = tree.nodes[index].x;
    x[static_cast<int>(node.op)] = 1.0;
    x[kOperatorCount] = bounds.normalize_log_card(estimator.estimate({&query, node.mask}));
    x[kOperatorCount + 1] =
        bounds.normalize_width(subquery_row_width(query, node.mask, catalog));
    for (int t = 0; t < query.table_count(); ++t) {
      if ((node.mask >> t) & 1u) {
        const int catalog_index = catalog.table_index(query.tables[t]);
        check(catalog_index >= 0 && catalog_index < table_count,
              "plan references a table outside the catalog");
        x[kOperatorCount + 2 + catalog_index] = 1.0;
      }
    }

    if (node.left) {
      const int left = self(self, *node.left);
      const int right = self(self, *node.right);
      tree.nodes[index].left = left;
      tree.nodes[index].right = right;
    }
    return index;
  };
  encode(encode, *plan.root);
  return tree;
}

}  // namespace rankopt
