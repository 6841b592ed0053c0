#include "rankopt/optimizer/cardinality.hpp"

#include <algorithm>

namespace rankopt {

double NativeEstimator::estimate(const SubQuery& sub) const {
  check(sub.query != nullptr && sub.mask != 0, "empty sub-query");
  const Query& query = *sub.query;

  double rows = 1.0;
  for (int t = 0; t < query.table_count(); ++t) {
    if (!sub.contains(t)) continue;
    const auto& table = stats_->table(query.tables[t]);
    double table_rows = static_cast<double>(table.row_count);
    for (const auto& filter : query.filters) {
      if (filter.table != query.tables[t]) continue;
      table_rows *= table.column(filter.column).selectivity(filter.lo, filter.hi);
    }
    rows *= table_rows;
  }

  // Independence across edges: one 1/max(distinct) term per join inside the
  // mask. Disconnected masks simply get no edge terms (a cross product).
  for (const auto& join : query.joins) {
    const int lt = query.table_index(join.left_table);
    const int rt = query.table_index(join.right_table);
    if (!sub.contains(lt) || !sub.contains(rt)) continue;
    const uint64_t left_distinct =
        stats_->table(join.left_table).column(join.left_column).distinct_count;
    const uint64_t right_distinct =
        stats_->table(join.right_table).column(join.right_column).distinct_count;
    rows /= static_cast<double>(std::max<uint64_t>({left_distinct, right_distinct, 1}));
  }
  return std::max(1.0, rows);
}

double NativeEstimator::base_rows(const Query& query, int table_position) const {
  return static_cast<double>(stats_->table(query.tables[table_position]).row_count);
}

double q_error(double estimate, double truth) {
  check(estimate > 0.0 && truth > 0.0, "q-error requires positive inputs");
  return std::max(estimate / truth, truth / estimate);
}

}  // namespace rankopt
