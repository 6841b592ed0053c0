#pragma once

#include <map>
#include <memory>

#include "rankopt/engine/query.hpp"
#include "rankopt/optimizer/statistics.hpp"

namespace rankopt {

/// Cardinality estimates, clamped to >= 1 so that logarithms and q-errors
/// stay defined. `base_rows` is the scan input size used by scan cost terms;
/// it is not a sub-query estimate and is never scaled.
class CardinalityEstimator {
 public:
  virtual ~CardinalityEstimator() = default;
  virtual double estimate(const SubQuery& sub) const = 0;
  virtual double base_rows(const Query& query, int table_position) const = 0;
};

/// Textbook estimator: histogram selectivities per table, independence across
/// predicates, join selectivity 1/max(distinct either side) per edge.
class NativeEstimator : public CardinalityEstimator {
 public:
  explicit NativeEstimator(std::shared_ptr<const StatisticsCatalog> stats)
      : stats_(std::move(stats)) {}

  double estimate(const SubQuery& sub) const override;
  double base_rows(const Query& query, int table_position) const override;

  const StatisticsCatalog& stats() const { return *stats_; }

 private:
  double single_table_estimate(const Query& query, int table_position) const;

  std::shared_ptr<const StatisticsCatalog> stats_;
};

/// The explorer's tuning hook: scales the base estimate by `factor` exactly
/// for sub-queries of `target_size` tables, and defers otherwise.
class TunedEstimator : public CardinalityEstimator {
 public:
  TunedEstimator(const CardinalityEstimator& base, int target_size, double factor)
      : base_(&base), target_size_(target_size), factor_(factor) {
    check(factor > 0.0, "scaling factor must be positive");
    check(target_size >= 1, "target sub-query size must be >= 1");
  }

  double estimate(const SubQuery& sub) const override {
    const double raw = base_->estimate(sub);
    return sub.size() == target_size_ ? std::max(1.0, factor_ * raw) : raw;
  }
  double base_rows(const Query& query, int table_position) const override {
    return base_->base_rows(query, table_position);
  }

 private:
  const CardinalityEstimator* base_;
  int target_size_;
  double factor_;
};

/// Per-mask scaling factors; the brute-force strategy enumerates these.
/// Masks without an assignment fall through to the base estimate.
class AssignmentEstimator : public CardinalityEstimator {
 public:
  AssignmentEstimator(const CardinalityEstimator& base, std::map<uint32_t, double> factors)
      : base_(&base), factors_(std::move(factors)) {}

  double estimate(const SubQuery& sub) const override {
    const double raw = base_->estimate(sub);
    const auto it = factors_.find(sub.mask);
    return it == factors_.end() ? raw : std::max(1.0, it->second * raw);
  }
  double base_rows(const Query& query, int table_position) const override {
    return base_->base_rows(query, table_position);
  }

 private:
  const CardinalityEstimator* base_;
  std::map<uint32_t, double> factors_;
};

/// Fully specified per-mask cardinalities with no statistics behind them;
/// pre-training uses this to pair random plan annotations with the exact
/// values the cost model sees.
class ForcedCardinalityEstimator : public CardinalityEstimator {
 public:
  explicit ForcedCardinalityEstimator(std::map<uint32_t, double> cards)
      : cards_(std::move(cards)) {}

  double estimate(const SubQuery& sub) const override {
    const auto it = cards_.find(sub.mask);
    check(it != cards_.end(), "no forced cardinality for this sub-query");
    return std::max(1.0, it->second);
  }
  double base_rows(const Query&, int table_position) const override {
    const auto it = cards_.find(uint32_t{1} << table_position);
    check(it != cards_.end(), "no forced cardinality for this table");
    return std::max(1.0, it->second);
  }

 private:
  std::map<uint32_t, double> cards_;
};

/// max(estimate/truth, truth/estimate); >= 1, equal to 1 iff exact.
double q_error(double estimate, double truth);

}  // namespace rankopt
