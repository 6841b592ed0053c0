#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rankopt/engine/catalog.hpp"

namespace rankopt {

/// Equi-width histogram plus a distinct-value count for one column.
/// Bucket counts sum to the table's row count as of the last refresh.
struct ColumnStats {
  std::string name;
  int32_t domain_size = 0;
  std::vector<uint64_t> bucket_counts;
  uint64_t distinct_count = 0;
  uint64_t total_rows = 0;

  /// Estimated fraction of rows with value in [lo, hi] (inclusive), assuming
  /// uniformity within buckets. Returns 0 for empty ranges or empty tables.
  double selectivity(int32_t lo, int32_t hi) const;
};

struct TableStats {
  std::string table;
  uint64_t row_count = 0;
  std::vector<ColumnStats> columns;

  const ColumnStats& column(const std::string& name) const;
};

/// Snapshot of per-table statistics. Estimators hold a shared_ptr to one
/// snapshot; refresh builds a new snapshot rather than mutating, so readers
/// never observe a half-updated state.
class StatisticsCatalog {
 public:
  static std::shared_ptr<const StatisticsCatalog> build(const Database& db, int bucket_count = 32);

  const TableStats& table(const std::string& name) const;
  const std::vector<TableStats>& tables() const { return tables_; }
  int bucket_count() const { return bucket_count_; }

 private:
  std::vector<TableStats> tables_;
  int bucket_count_ = 32;
};

}  // namespace rankopt
