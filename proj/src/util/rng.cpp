#include "rankopt/util/rng.hpp"

#include <cmath>
#include <numeric>

namespace rankopt {

size_t Rng::next_weighted(const std::vector<double>& weights) {
  double total = 0.0;
  for (const double w : weights) {
    check(w >= 0.0, "rng: negative weight");
    total += w;
  }
  check(total > 0.0, "rng: all weights zero");
  const double target = next_double() * total;
  double cumulative = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (target < cumulative) {
      return i;
    }
  }
  return weights.size() - 1;
}

std::vector<uint64_t> apportion(uint64_t total, const std::vector<double>& weights) {
  check(!weights.empty(), "apportion: no cells");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  check(sum > 0.0, "apportion: weights sum to zero");

  std::vector<uint64_t> counts(weights.size());
  std::vector<std::pair<double, size_t>> remainders;
  remainders.reserve(weights.size());
  uint64_t assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / sum;
    counts[i] = static_cast<uint64_t>(quota);
    assigned += counts[i];
    remainders.emplace_back(quota - static_cast<double>(counts[i]), i);
  }
  // Hand out the rounding slack by largest remainder, lower index on ties.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t i = 0; assigned < total; ++i) {
    ++counts[remainders[i % remainders.size()].second];
    ++assigned;
  }
  return counts;
}

std::vector<double> zipf_weights(size_t n, double s) {
  check(n > 0, "zipf: empty domain");
  std::vector<double> weights(n);
  for (size_t i = 0; i < n; ++i) {
    weights[i] = std::pow(static_cast<double>(i + 1), -s);
  }
  return weights;
}

}  // namespace rankopt
