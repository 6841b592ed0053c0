#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "rankopt/engine/catalog.hpp"

namespace rankopt {

struct JoinPredicate {
  std::string left_table, left_column;
  std::string right_table, right_column;
};

struct FilterPredicate {
  std::string table, column;
  int32_t lo = 0, hi = 0;  // inclusive range
};

/// A select-project-join query: a connected equality join graph over a set of
/// tables plus per-table range filters.
struct Query {
  std::string id;
  std::vector<std::string> tables;  // ordered; positions index sub-query masks
  std::vector<JoinPredicate> joins;
  std::vector<FilterPredicate> filters;

  int table_count() const { return static_cast<int>(tables.size()); }
  uint32_t full_mask() const { return (uint32_t{1} << tables.size()) - 1; }
  int table_index(const std::string& table) const;

  /// Join edges as pairs of table positions.
  std::vector<std::pair<int, int>> join_edges() const;

  /// Checks connectivity, absence of self-joins, and column existence.
  void validate(const Catalog& catalog) const;
};

/// A subset of a query's tables, identified by a bitmask over the query's
/// table positions.
struct SubQuery {
  const Query* query = nullptr;
  uint32_t mask = 0;

  int size() const { return std::popcount(mask); }
  bool contains(int table_position) const { return (mask >> table_position) & 1u; }
  std::vector<std::string> table_names() const;
};

/// True iff the join graph induced by `mask` is connected (single tables are
/// connected; the empty mask is not).
bool induced_connected(const Query& query, uint32_t mask);

/// All connected sub-query masks of the query, ascending.
std::vector<uint32_t> connected_subquery_masks(const Query& query);

/// Workload line format:
///   TABLES a,b,c JOIN a.x=b.y,b.z=c.w FILTER a.v in [lo,hi],c.u in [lo,hi]
/// The FILTER clause is optional. `id` is assigned by the caller.
Query parse_query_line(const std::string& line, std::string id);
std::string format_query_line(const Query& query);

std::vector<Query> load_workload(const std::string& path);
void save_workload(const std::vector<Query>& workload, const std::string& path);

}  // namespace rankopt
