#include "rankopt/engine/executor.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "rankopt/util/hash.hpp"

namespace rankopt {

namespace {

double xlog2(double x) { return x > 1.0 ? x * std::log2(x) : 0.0; }

// Materialized intermediate result. Columns are the concatenation of the
// source tables' columns in `table_order`.
struct Intermediate {
  std::vector<int> table_order;        // query table positions
  std::vector<size_t> table_offsets;   // column offset per entry of table_order
  size_t width = 0;
  std::vector<int32_t> values;         // row-major

  uint64_t rows() const { return width == 0 ? 0 : values.size() / width; }

  size_t column_offset(int table_position, int column) const {
    for (size_t i = 0; i < table_order.size(); ++i) {
      if (table_order[i] == table_position) {
        return table_offsets[i] + static_cast<size_t>(column);
      }
    }
    fail("internal: table not present in intermediate");
  }
};

struct JoinColumnPair {
  size_t left_offset;
  size_t right_offset;
};

class PlanRunner {
 public:
  PlanRunner(const Database& db, const Query& query) : db_(db), query_(query) {}

  Intermediate scan(int table_position) const {
    const auto& relation = db_.relation(db_.table_index(query_.tables[table_position]));
    Intermediate out;
    out.table_order = {table_position};
    out.table_offsets = {0};
    out.width = relation.width();

    // Collect this table's filters once; rows are checked value by value.
    std::vector<const FilterPredicate*> filters;
    for (const auto& filter : query_.filters) {
      if (filter.table == query_.tables[table_position]) {
        filters.push_back(&filter);
      }
    }
    std::vector<int> filter_columns;
    filter_columns.reserve(filters.size());
    for (const auto* filter : filters) {
      filter_columns.push_back(relation.def().column_index(filter->column));
    }

    for (uint64_t r = 0; r < relation.loaded_rows(); ++r) {
      const auto row = relation.row(r);
      bool keep = true;
      for (size_t f = 0; f < filters.size(); ++f) {
        const int32_t v = row[filter_columns[f]];
        if (v < filters[f]->lo || v > filters[f]->hi) {
          keep = false;
          break;
        }
      }
      if (keep) {
        out.values.insert(out.values.end(), row.begin(), row.end());
      }
    }
    return out;
  }

  // Equi-join on every query predicate crossing the two sides; a cross
  // product when none does. Always hash-based internally.
  Intermediate join(const Intermediate& left, const Intermediate& right) const {
    std::vector<JoinColumnPair> keys;
    for (const auto& predicate : query_.joins) {
      const int lt = query_.table_index(predicate.left_table);
      const int rt = query_.table_index(predicate.right_table);
      const uint32_t left_mask = side_mask(left);
      const bool l_in_left = (left_mask >> lt) & 1u;
      const bool r_in_left = (left_mask >> rt) & 1u;
      const uint32_t right_mask = side_mask(right);
      const bool l_in_right = (right_mask >> lt) & 1u;
      const bool r_in_right = (right_mask >> rt) & 1u;
      const auto& catalog_left = db_.relation(db_.table_index(predicate.left_table)).def();
      const auto& catalog_right = db_.relation(db_.table_index(predicate.right_table)).def();
      const int lc = catalog_left.column_index(predicate.left_column);
      const int rc = catalog_right.column_index(predicate.right_column);
      if (l_in_left && r_in_right) {
        keys.push_back({left.column_offset(lt, lc), right.column_offset(rt, rc)});
      } else if (r_in_left && l_in_right) {
        keys.push_back({left.column_offset(rt, rc), right.column_offset(lt, lc)});
      }
    }

    Intermediate out;
    out.table_order = left.table_order;
    out.table_offsets = left.table_offsets;
    for (size_t i = 0; i < right.table_order.size(); ++i) {
      out.table_order.push_back(right.table_order[i]);
      out.table_offsets.push_back(left.width + right.table_offsets[i]);
    }
    out.width = left.width + right.width;

    const uint64_t left_rows = left.rows();
    const uint64_t right_rows = right.rows();
    if (left_rows == 0 || right_rows == 0) {
      return out;
    }

    if (keys.empty()) {
      out.values.reserve(left_rows * right_rows * out.width);
      for (uint64_t l = 0; l < left_rows; ++l) {
        for (uint64_t r = 0; r < right_rows; ++r) {
          emit(out, left, l, right, r);
        }
      }
      return out;
    }

    std::unordered_multimap<uint64_t, uint64_t> table;
    table.reserve(left_rows);
    for (uint64_t l = 0; l < left_rows; ++l) {
      table.emplace(key_hash(left, l, keys, /*left_side=*/true), l);
    }
    for (uint64_t r = 0; r < right_rows; ++r) {
      const auto [begin, end] = table.equal_range(key_hash(right, r, keys, /*left_side=*/false));
      for (auto it = begin; it != end; ++it) {
        if (keys_equal(left, it->second, right, r, keys)) {
          emit(out, left, it->second, right, r);
        }
      }
    }
    return out;
  }

 private:
  uint32_t side_mask(const Intermediate& side) const {
    uint32_t mask = 0;
    for (const int t : side.table_order) {
      mask |= uint32_t{1} << t;
    }
    return mask;
  }

  static uint64_t key_hash(const Intermediate& side, uint64_t row,
                           const std::vector<JoinColumnPair>& keys, bool left_side) {
    uint64_t hash = kFnvOffset;
    for (const auto& key : keys) {
      const size_t offset = left_side ? key.left_offset : key.right_offset;
      hash = fnv1a64_mix(static_cast<uint64_t>(side.values[row * side.width + offset]), hash);
    }
    return hash;
  }

  static bool keys_equal(const Intermediate& left, uint64_t l, const Intermediate& right,
                         uint64_t r, const std::vector<JoinColumnPair>& keys) {
    for (const auto& key : keys) {
      if (left.values[l * left.width + key.left_offset] !=
          right.values[r * right.width + key.right_offset]) {
        return false;
      }
    }
    return true;
  }

  static void emit(Intermediate& out, const Intermediate& left, uint64_t l,
                   const Intermediate& right, uint64_t r) {
    const auto* lrow = left.values.data() + l * left.width;
    const auto* rrow = right.values.data() + r * right.width;
    out.values.insert(out.values.end(), lrow, lrow + left.width);
    out.values.insert(out.values.end(), rrow, rrow + right.width);
  }

  const Database& db_;
  const Query& query_;
};

}  // namespace

LatencyMeasurement Executor::execute_plan(const PlanTree& plan) const {
  plan.validate();
  PlanRunner runner(*db_, *plan.query);
  double work = 0.0;

  // Bottom-up evaluation; every node is charged its work term on the true
  // intermediate sizes observed while running.
  auto run = [&](auto&& self, const PlanNode& node) -> Intermediate {
    if (node.is_scan()) {
      auto result = runner.scan(node.table);
      const auto& relation = db_->relation(db_->table_index(plan.query->tables[node.table]));
      work += weights_.seq_scan * static_cast<double>(relation.loaded_rows());
      return result;
    }
    Intermediate left = self(self, *node.left);
    Intermediate right = self(self, *node.right);
    const auto build = static_cast<double>(left.rows());
    const auto probe = static_cast<double>(right.rows());
    Intermediate result = runner.join(left, right);
    const auto out = static_cast<double>(result.rows());
    switch (node.op) {
      case PlanOp::kHashJoin:
        work += weights_.hash_join * (build + probe + out);
        break;
      case PlanOp::kMergeJoin:
        work += weights_.merge_join * (xlog2(build) + xlog2(probe) + build + probe + out);
        break;
      case PlanOp::kNestedLoopJoin:
        work += weights_.nested_loop_join * (build * probe + out);
        break;
      case PlanOp::kSeqScan:
        fail("internal: scan handled above");
    }
    return result;
  };

  const Intermediate result = run(run, *plan.root);
  return {work, result.rows()};
}

uint64_t Executor::true_cardinality(const SubQuery& sub) const {
  check(sub.query != nullptr && sub.mask != 0, "empty sub-query");
  check(induced_connected(*sub.query, sub.mask), "sub-query is not connected");
  PlanRunner runner(*db_, *sub.query);

  // Greedy connected join order: start at the lowest table, repeatedly fold
  // in a joinable neighbor. The count is order-independent.
  std::vector<int> members;
  for (int t = 0; t < sub.query->table_count(); ++t) {
    if (sub.contains(t)) members.push_back(t);
  }
  const auto edges = sub.query->join_edges();

  Intermediate acc = runner.scan(members.front());
  uint32_t joined = uint32_t{1} << members.front();
  while (std::popcount(joined) < static_cast<int>(members.size())) {
    int next = -1;
    for (const auto& [a, b] : edges) {
      const bool a_in = (joined >> a) & 1u;
      const bool b_in = (joined >> b) & 1u;
      if (a_in && !b_in && sub.contains(b)) {
        next = b;
        break;
      }
      if (b_in && !a_in && sub.contains(a)) {
        next = a;
        break;
      }
    }
    check(next >= 0, "internal: connected sub-query has no joinable neighbor");
    acc = runner.join(acc, runner.scan(next));
    joined |= uint32_t{1} << next;
  }
  return acc.rows();
}

}  // namespace rankopt
