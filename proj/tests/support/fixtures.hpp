#pragma once

#include <memory>

#include "rankopt/engine/data_generator.hpp"
#include "rankopt/engine/executor.hpp"
#include "rankopt/optimizer/enumerator.hpp"

namespace rankopt::testing {

// The frozen correlated fixture used across the suites: heavy join-key skew
// so the independence-assuming estimator is badly wrong on multi-table
// sub-queries. Values were fixed once the derived properties held and are
// asserted by the tests, so regenerating is safe but retuning is not.
inline CatalogSpec correlated_spec() {
  CatalogSpec spec;
  spec.num_tables = 5;
  spec.rows_per_table = 150;
  spec.join_domain = 100;
  spec.filter_domain = 100;
  spec.correlation = 0.9;
  return spec;
}

inline constexpr uint64_t kCorrelatedSeed = 1;

// A uniform (correlation = 0) counterpart with the same shape.
inline CatalogSpec uniform_spec() {
  CatalogSpec spec = correlated_spec();
  spec.correlation = 0.0;
  return spec;
}

struct EngineFixture {
  Database db;
  Executor executor;
  CostModel cost_model;
  std::shared_ptr<const StatisticsCatalog> stats;
  std::shared_ptr<NativeEstimator> estimator;
  Catalog catalog;

  explicit EngineFixture(const CatalogSpec& spec, uint64_t seed = kCorrelatedSeed)
      : db(generate_database(seed, spec)),
        executor(db),
        stats(StatisticsCatalog::build(db)),
        estimator(std::make_shared<NativeEstimator>(stats)),
        catalog(db.catalog()) {}

  void refresh() {
    stats = StatisticsCatalog::build(db);
    estimator = std::make_shared<NativeEstimator>(stats);
  }
};

// Chain query t0 - t1 - ... - t{n-1} over the generated catalog.
inline Query chain_query(int tables, std::string id = "chain") {
  Query query;
  query.id = std::move(id);
  for (int i = 0; i < tables; ++i) {
    query.tables.push_back("t" + std::to_string(i));
  }
  for (int i = 0; i + 1 < tables; ++i) {
    query.joins.push_back({query.tables[i], "jk1", query.tables[i + 1], "jk0"});
  }
  return query;
}

inline Query star_query(int arms, std::string id = "star") {
  Query query;
  query.id = std::move(id);
  for (int i = 0; i <= arms; ++i) {
    query.tables.push_back("t" + std::to_string(i));
  }
  for (int i = 1; i <= arms; ++i) {
    query.joins.push_back({query.tables[0], "jk0", query.tables[i], "jk0"});
  }
  return query;
}

}  // namespace rankopt::testing
