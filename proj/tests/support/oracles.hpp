#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "rankopt/comparator/network.hpp"
#include "rankopt/engine/catalog.hpp"
#include "rankopt/engine/query.hpp"
#include "rankopt/optimizer/cost_model.hpp"

// Independent test oracles. These deliberately avoid the library's join and
// enumeration machinery: plain nested loops and unpruned recursion, trusted
// because they are too simple to be wrong.
namespace rankopt::testing {

// Exact cardinality of the sub-query by literal nested loops over the cross
// product of the member tables. Exponential; fixture-sized inputs only.
inline uint64_t nested_loop_count(const Database& db, const Query& query, uint32_t mask) {
  std::vector<int> members;
  for (int t = 0; t < query.table_count(); ++t) {
    if ((mask >> t) & 1u) members.push_back(t);
  }

  struct Binding {
    const Relation* relation;
    uint64_t row = 0;
  };
  std::vector<Binding> bindings;
  for (const int t : members) {
    bindings.push_back({&db.relation(db.table_index(query.tables[t]))});
  }

  auto row_of = [&](int table_position) -> int {
    for (size_t i = 0; i < members.size(); ++i) {
      if (members[i] == table_position) return static_cast<int>(i);
    }
    return -1;
  };

  uint64_t count = 0;
  auto recurse = [&](auto&& self, size_t depth) -> void {
    if (depth == bindings.size()) {
      ++count;
      return;
    }
    const auto& relation = *bindings[depth].relation;
    for (uint64_t r = 0; r < relation.loaded_rows(); ++r) {
      bindings[depth].row = r;
      bool ok = true;
      // Filters on this table.
      for (const auto& filter : query.filters) {
        if (filter.table != query.tables[members[depth]]) continue;
        const int32_t v = relation.value(r, relation.def().column_index(filter.column));
        if (v < filter.lo || v > filter.hi) {
          ok = false;
          break;
        }
      }
      // Join predicates whose both sides are bound.
      if (ok) {
        for (const auto& join : query.joins) {
          const int lt = query.table_index(join.left_table);
          const int rt = query.table_index(join.right_table);
          const int li = row_of(lt);
          const int ri = row_of(rt);
          if (li < 0 || ri < 0 || li > static_cast<int>(depth) || ri > static_cast<int>(depth)) {
            continue;
          }
          const auto& lrel = *bindings[li].relation;
          const auto& rrel = *bindings[ri].relation;
          const int32_t lv = lrel.value(bindings[li].row, lrel.def().column_index(join.left_column));
          const int32_t rv = rrel.value(bindings[ri].row, rrel.def().column_index(join.right_column));
          if (lv != rv) {
            ok = false;
            break;
          }
        }
      }
      if (ok) self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  return count;
}

// Every valid plan of the query: all connected (left, right) partitions of
// every connected mask, every operator labeling. No pruning.
inline std::vector<PlanTree> enumerate_all_plans(const Query& query) {
  const uint32_t full = query.full_mask();
  std::vector<std::vector<std::unique_ptr<PlanNode>>> plans(full + 1);

  for (uint32_t mask = 1; mask <= full; ++mask) {
    if (!induced_connected(query, mask)) continue;
    if (std::popcount(mask) == 1) {
      plans[mask].push_back(make_scan(query, std::countr_zero(mask)));
      continue;
    }
    for (uint32_t left = (mask - 1) & mask; left != 0; left = (left - 1) & mask) {
      const uint32_t right = mask ^ left;
      if (plans[left].empty() || plans[right].empty()) continue;
      for (const auto& lp : plans[left]) {
        for (const auto& rp : plans[right]) {
          for (const PlanOp op :
               {PlanOp::kHashJoin, PlanOp::kMergeJoin, PlanOp::kNestedLoopJoin}) {
            plans[mask].push_back(make_join(op, clone_subtree(*lp), clone_subtree(*rp)));
          }
        }
      }
    }
  }

  std::vector<PlanTree> result;
  result.reserve(plans[full].size());
  for (auto& root : plans[full]) {
    result.emplace_back(&query, std::move(root));
  }
  return result;
}

// Spearman rank correlation with average ranks on ties.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    cov += (rx[i] - mean) * (ry[i] - mean);
    var_x += (rx[i] - mean) * (rx[i] - mean);
    var_y += (ry[i] - mean) * (ry[i] - mean);
  }
  return cov / std::sqrt(var_x * var_y);
}

// Central finite differences over every parameter; returns the maximum
// relative disagreement with the analytic gradients.
inline double max_gradient_error(const ComparatorModel& model,
                                 std::span<const PlanPairExample> batch, double step = 1e-4) {
  const std::vector<double> exact = pairwise_gradients(batch, model).flatten();

  double worst = 0.0;
  ComparatorModel probe = model;
  for (size_t p = 0; p < model.parameter_count(); ++p) {
    const double original = model.get_parameter(p);
    probe.set_parameter(p, original + step);
    const double up = pairwise_loss(batch, probe);
    probe.set_parameter(p, original - step);
    const double down = pairwise_loss(batch, probe);
    probe.set_parameter(p, original);

    const double numeric = (up - down) / (2.0 * step);
    const double scale = std::max({std::abs(numeric), std::abs(exact[p]), 1e-6});
    worst = std::max(worst, std::abs(numeric - exact[p]) / scale);
  }
  return worst;
}

}  // namespace rankopt::testing
