#include "rankopt/optimizer/statistics.hpp"

#include <algorithm>
#include <unordered_set>

namespace rankopt {

double ColumnStats::selectivity(int32_t lo, int32_t hi) const {
  if (total_rows == 0 || hi < lo) {
    return 0.0;
  }
  const int32_t clamped_lo = std::max<int32_t>(lo, 0);
  const int32_t clamped_hi = std::min<int32_t>(hi, domain_size - 1);
  if (clamped_hi < clamped_lo) {
    return 0.0;
  }
  const auto buckets = static_cast<int32_t>(bucket_counts.size());
  const int32_t bucket_width = (domain_size + buckets - 1) / buckets;  // last bucket may be short
  double selected = 0.0;
  for (int32_t b = 0; b < buckets; ++b) {
    const int32_t b_lo = b * bucket_width;
    const int32_t b_hi = std::min(domain_size, (b + 1) * bucket_width) - 1;
    if (b_hi < b_lo) break;
    const int32_t overlap_lo = std::max(clamped_lo, b_lo);
    const int32_t overlap_hi = std::min(clamped_hi, b_hi);
    if (overlap_hi < overlap_lo) continue;
    const double fraction = static_cast<double>(overlap_hi - overlap_lo + 1) /
                            static_cast<double>(b_hi - b_lo + 1);
    selected += fraction * static_cast<double>(bucket_counts[b]);
  }
  return selected / static_cast<double>(total_rows);
}

std::shared_ptr<const StatisticsCatalog> StatisticsCatalog::build(const Database& db,
                                                                  int bucket_count) {
  check(bucket_count >= 1, "histogram needs at least one bucket");
  auto stats = std::make_shared<StatisticsCatalog>();
  stats->bucket_count_ = bucket_count;
  for (const auto& relation : db.relations()) {
    TableStats table;
    table.table = relation.def().name;
    table.row_count = relation.loaded_rows();
    for (size_t c = 0; c < relation.def().columns.size(); ++c) {
      const int32_t domain = relation.def().columns[c].domain_size;
      ColumnStats column;
      column.name = relation.def().columns[c].name;
      column.domain_size = domain;
      column.total_rows = table.row_count;
      const int32_t buckets = std::min<int32_t>(bucket_count, domain);
      const int32_t bucket_width = (domain + buckets - 1) / buckets;
      column.bucket_counts.assign(buckets, 0);
      std::unordered_set<int32_t> distinct;
      for (uint64_t r = 0; r < relation.loaded_rows(); ++r) {
        const int32_t value = relation.value(r, static_cast<int>(c));
        ++column.bucket_counts[value / bucket_width];
        distinct.insert(value);
      }
      column.distinct_count = distinct.size();
      table.columns.push_back(std::move(column));
    }
    stats->tables_.push_back(std::move(table));
  }
  return stats;
}

const ColumnStats& TableStats::column(const std::string& name) const {
  for (const auto& column : columns) {
    if (column.name == name) {
      return column;
    }
  }
  fail("no statistics for column '" + table + "." + name + "'");
}

const TableStats& StatisticsCatalog::table(const std::string& name) const {
  for (const auto& table : tables_) {
    if (table.table == name) {
      return table;
    }
  }
  fail("no statistics for table '" + name + "'");
}

}  // namespace rankopt
