#include "rankopt/engine/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rankopt {

int TableDef::column_index(const std::string& column) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) {
      return static_cast<int>(i);
    }
  }
  fail("unknown column '" + column + "' in table '" + name + "'");
}

int Catalog::table_index(const std::string& table) const {
  for (size_t i = 0; i < tables.size(); ++i) {
    if (tables[i].name == table) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

int Catalog::check_index(const std::string& name) const {
  const int index = table_index(name);
  check(index >= 0, "unknown table '" + name + "'");
  return index;
}

Relation::Relation(TableDef def, std::vector<int32_t> values)
    : def_(std::move(def)), values_(std::move(values)) {
  check(!def_.columns.empty(), "relation needs at least one column");
  check(values_.size() % width() == 0, "tuple data not a multiple of the row width");
  loaded_rows_ = total_rows();
  def_.row_count = loaded_rows_;
}

void Relation::grow(uint64_t count) {
  loaded_rows_ = std::min<uint64_t>(loaded_rows_ + count, total_rows());
  def_.row_count = loaded_rows_;
}

void Relation::set_loaded(uint64_t count) {
  check(count <= total_rows(), "cannot load more tuples than generated");
  loaded_rows_ = count;
  def_.row_count = loaded_rows_;
}

Database::Database(std::vector<Relation> relations) : relations_(std::move(relations)) {
  check(!relations_.empty(), "database needs at least one table");
  for (size_t i = 0; i < relations_.size(); ++i) {
    for (size_t j = i + 1; j < relations_.size(); ++j) {
      check(relations_[i].def().name != relations_[j].def().name, "duplicate table name");
    }
  }
}

const Relation& Database::relation(const std::string& table) const {
  return relations_[table_index(table)];
}

int Database::table_index(const std::string& table) const {
  for (size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].def().name == table) {
      return static_cast<int>(i);
    }
  }
  fail("unknown table '" + table + "'");
}

Catalog Database::catalog() const {
  Catalog catalog;
  catalog.tables.reserve(relations_.size());
  for (const auto& relation : relations_) {
    catalog.tables.push_back(relation.def());
  }
  return catalog;
}

void Database::load_fraction(double fraction) {
  check(fraction >= 0.0 && fraction <= 1.0, "load fraction must be in [0,1]");
  for (auto& relation : relations_) {
    const auto rows = static_cast<uint64_t>(
        std::llround(fraction * static_cast<double>(relation.total_rows())));
    relation.set_loaded(rows);
  }
  ++data_version_;
}

GrowthResult Database::apply_data_growth(double step) {
  check(step >= 0.0, "growth step must be non-negative");
  GrowthResult result;
  if (step == 0.0) {
    return result;
  }
  bool any_remaining = false;
  for (const auto& relation : relations_) {
    any_remaining |= relation.loaded_rows() < relation.total_rows();
  }
  if (!any_remaining) {
    result.saturated = true;  // beyond 100%: no-op with warning
    return result;
  }
  for (auto& relation : relations_) {
    const auto slice = static_cast<uint64_t>(
        std::llround(step * static_cast<double>(relation.total_rows())));
    const uint64_t before = relation.loaded_rows();
    relation.grow(slice);
    result.appended_rows += relation.loaded_rows() - before;
  }
  ++data_version_;
  return result;
}

void Database::save(const std::string& path) const {
  std::ofstream out(path);
  check(out.good(), "cannot write '" + path + "'");
  for (const auto& relation : relations_) {
    out << "table " << relation.def().name;
    for (const auto& column : relation.def().columns) {
      out << ' ' << column.name << ':' << column.domain_size;
    }
    out << '\n';
    // All tuples, timestamp order; the loaded prefix is a load-time choice.
    for (uint64_t r = 0; r < relation.total_rows(); ++r) {
      const auto row = relation.row(r);
      for (size_t c = 0; c < row.size(); ++c) {
        if (c != 0) out << ',';
        out << row[c];
      }
      out << '\n';
    }
  }
  check(out.good(), "write failed for '" + path + "'");
}

Database Database::load(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "cannot read '" + path + "'");
  std::vector<Relation> relations;
  TableDef def;
  std::vector<int32_t> values;
  auto flush_table = [&] {
    if (!def.name.empty()) {
      relations.emplace_back(std::move(def), std::move(values));
      def = {};
      values.clear();
    }
  };
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("table ", 0) == 0) {
      flush_table();
      std::istringstream header(line.substr(6));
      header >> def.name;
      std::string col;
      while (header >> col) {
        const auto sep = col.find(':');
        check(sep != std::string::npos, "malformed column spec '" + col + "'");
        def.columns.push_back({col.substr(0, sep), std::stoi(col.substr(sep + 1))});
      }
      check(!def.columns.empty(), "table header without columns");
    } else {
      check(!def.name.empty(), "tuple row before any table header");
      size_t start = 0;
      size_t fields = 0;
      while (start <= line.size()) {
        const auto end = line.find(',', start);
        const auto token = line.substr(start, end == std::string::npos ? end : end - start);
        values.push_back(std::stoi(token));
        ++fields;
        if (end == std::string::npos) break;
        start = end + 1;
      }
      check(fields == def.columns.size(), "tuple width mismatch in '" + def.name + "'");
    }
  }
  flush_table();
  return Database(std::move(relations));
}

}  // namespace rankopt
