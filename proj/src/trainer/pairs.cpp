#include "rankopt/trainer/pairs.hpp"

namespace rankopt {

std::vector<PlanPairExample> build_pairs(std::span<const LabeledPlan> plans) {
  std::vector<PlanPairExample> pairs;
  if (plans.size() < 2) {
    return pairs;
  }
  for (size_t i = 0; i < plans.size(); ++i) {
    for (size_t j = 0; j < plans.size(); ++j) {
      if (i == j) continue;
      if (plans[i].latency > plans[j].latency) {
        pairs.push_back({plans[i].tree, plans[j].tree, 1});
      } else if (plans[i].latency < plans[j].latency) {
        pairs.push_back({plans[i].tree, plans[j].tree, 0});
      } else {
        pairs.push_back({plans[i].tree, plans[j].tree, 0});
        pairs.push_back({plans[i].tree, plans[j].tree, 1});
      }
    }
  }
  return pairs;
}

}  // namespace rankopt
