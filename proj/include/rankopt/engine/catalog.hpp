#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rankopt/util/check.hpp"

namespace rankopt {

struct ColumnDef {
  std::string name;
  int32_t domain_size = 0;  // values lie in [0, domain_size)
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  uint64_t row_count = 0;

  int column_index(const std::string& column) const;
};

/// Immutable snapshot of table shapes and row counts. The table ordering is
/// the canonical one used for plan feature bitmaps.
struct Catalog {
  std::vector<TableDef> tables;

  int table_index(const std::string& table) const;
  const TableDef& table(const std::string& name) const { return tables[check_index(name)]; }

 private:
  int check_index(const std::string& name) const;
};

/// One stored table: schema plus row-major integer tuples. `loaded_rows`
/// tuples are visible; the remainder is the held-back growth pool, ordered by
/// synthetic timestamp (generation order).
class Relation {
 public:
  Relation(TableDef def, std::vector<int32_t> values);

  const TableDef& def() const { return def_; }
  size_t width() const { return def_.columns.size(); }
  uint64_t loaded_rows() const { return loaded_rows_; }
  uint64_t total_rows() const { return width() == 0 ? 0 : values_.size() / width(); }

  std::span<const int32_t> row(uint64_t index) const {
    return {values_.data() + index * width(), width()};
  }
  int32_t value(uint64_t row, int column) const { return values_[row * width() + column]; }

  /// Makes the next `count` pooled tuples visible.
  void grow(uint64_t count);
  void set_loaded(uint64_t count);

 private:
  TableDef def_;
  std::vector<int32_t> values_;  // row-major, full pool
  uint64_t loaded_rows_ = 0;
};

struct GrowthResult {
  uint64_t appended_rows = 0;
  bool saturated = false;  // growth requested beyond 100%: no-op warning
};

/// The stored database: relations plus the data-growth state machine.
/// Reads (scans, cardinalities) are const; growth is the only mutation and
/// must not overlap plan execution.
class Database {
 public:
  explicit Database(std::vector<Relation> relations);

  const std::vector<Relation>& relations() const { return relations_; }
  const Relation& relation(const std::string& table) const;
  const Relation& relation(int index) const { return relations_[index]; }
  int table_index(const std::string& table) const;
  size_t table_count() const { return relations_.size(); }

  /// Snapshot of schemas with current loaded row counts.
  Catalog catalog() const;

  /// Restricts every table to its first `fraction` of tuples (timestamp
  /// order); the rest become the growth pool.
  void load_fraction(double fraction);

  /// Appends the next `step` fraction of each table's full tuple pool.
  GrowthResult apply_data_growth(double step);

  /// Bumped on every growth step; lets callers key caches on data state.
  int data_version() const { return data_version_; }

  void save(const std::string& path) const;
  static Database load(const std::string& path);

 private:
  std::vector<Relation> relations_;
  int data_version_ = 0;
};

}  // namespace rankopt
