#pragma once

#include <span>

#include "rankopt/comparator/network.hpp"

namespace rankopt {

/// One executed plan of a query, ready for pairing.
struct LabeledPlan {
  std::shared_ptr<const FeatureTree> tree;
  double latency = 0.0;
};

/// All ordered pairs (i, j), i != j, labelled 1 iff latency_i > latency_j.
/// An exact latency tie emits the ordered pair twice, once with each label,
/// which is order-independent and contributes a constant loss floor. Fewer
/// than two plans yield no pairs.
std::vector<PlanPairExample> build_pairs(std::span<const LabeledPlan> plans);

}  // namespace rankopt
