#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rankopt/engine/plan.hpp"
#include "rankopt/optimizer/cardinality.hpp"

namespace rankopt {

/// Min-max normalization ranges for the two numeric features. Frozen at
/// pre-training time and stored with the model; values outside clamp to the
/// boundary so unseen extremes stay in [0, 1].
struct FeatureBounds {
  double log_card_min = 0.0;
  double log_card_max = 1.0;
  double width_min = 0.0;
  double width_max = 1.0;

  double normalize_log_card(double rows) const;
  double normalize_width(double width) const;
};

/// A plan mirrored as a tree of fixed-width vectors:
///   one-hot operator (4) | normalized log-cardinality (1) |
///   normalized row width (1) | catalog table bitmap (table_count)
struct FeatureTree {
  struct Node {
    Eigen::VectorXd x;
    int left = -1;   // indices into `nodes`, -1 for absent children
    int right = -1;
  };
  std::vector<Node> nodes;  // node 0 is the root
  int root = 0;

  int vector_width() const { return nodes.empty() ? 0 : static_cast<int>(nodes[0].x.size()); }
};

int feature_vector_width(const Catalog& catalog);

/// Estimated cost is deliberately not part of the vector; the estimator only
/// supplies per-node cardinalities.
FeatureTree featurize(const PlanTree& plan, const CardinalityEstimator& estimator,
                      const FeatureBounds& bounds, const Catalog& catalog);

}  // namespace rankopt
