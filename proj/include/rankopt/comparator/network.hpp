#pragma once

#include <memory>
#include <span>

#include "rankopt/comparator/model.hpp"

namespace rankopt {

/// One pairwise training example; label is 1 iff plan_a was slower than
/// plan_b when the example was built.
struct PlanPairExample {
  std::shared_ptr<const FeatureTree> plan_a;
  std::shared_ptr<const FeatureTree> plan_b;
  int label = 0;
};

/// PlanEmb(P): tree convolutions, per-channel max pooling over nodes, then
/// the fully-connected stack.
Eigen::VectorXd embed(const FeatureTree& tree, const ComparatorModel& model);

/// CmpPlan(P1, P2) in (0, 1): sigmoid(e1 - e2) for d = 1, otherwise
/// sigmoid(w . [e1 (+) e2]). Values near 1 mean P2 is preferable.
double compare_plans(const FeatureTree& a, const FeatureTree& b, const ComparatorModel& model);

/// Mean cross-entropy over the batch, probabilities clamped to
/// [1e-7, 1 - 1e-7] before the logs.
double pairwise_loss(std::span<const PlanPairExample> batch, const ComparatorModel& model);

/// Exact backpropagation of pairwise_loss. Gradients of the two shared
/// towers are summed into the one parameter set; max pooling routes to the
/// per-channel argmax node (first index on ties).
ModelGradients pairwise_gradients(std::span<const PlanPairExample> batch,
                                  const ComparatorModel& model);

/// Squared-error regression head used by pre-training: loss (emb - target)^2
/// for a single tree, gradients accumulated into `out`. Returns the loss.
/// Only defined for embedding_dim == 1.
double regression_gradients(const FeatureTree& tree, double target, const ComparatorModel& model,
                            ModelGradients& out);

/// Index of the best plan among the candidates: argmin embedding for d = 1
/// (first index on ties); for d > 1 the argmax of the expected number of
/// pairwise wins, sum over j != i of CmpPlan(P_j, P_i).
size_t select_best_index(std::span<const FeatureTree> candidates, const ComparatorModel& model);

double sigmoid(double x);

}  // namespace rankopt
