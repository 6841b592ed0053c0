#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "rankopt/explorer/scaling.hpp"
#include "rankopt/util/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rankopt;
using namespace rankopt::testing;

namespace {

// Estimator backed by the engine's exact cardinalities; the "perfect
// estimates" oracle for cost/latency alignment checks.
class TrueCardinalityEstimator : public CardinalityEstimator {
 public:
  TrueCardinalityEstimator(const Database& db, const Executor& executor)
      : db_(&db), executor_(&executor) {}

  double estimate(const SubQuery& sub) const override {
    return std::max(1.0, static_cast<double>(executor_->true_cardinality(sub)));
  }
  double base_rows(const Query& query, int table_position) const override {
    return static_cast<double>(
        db_->relation(db_->table_index(query.tables[table_position])).loaded_rows());
  }

 private:
  const Database* db_;
  const Executor* executor_;
};

}  // namespace

TEST_CASE("q-error basics") {
  CHECK(q_error(10, 10) == doctest::Approx(1.0));
  CHECK(q_error(2, 8) == doctest::Approx(4.0));
  CHECK(q_error(8, 2) == doctest::Approx(4.0));
  CHECK_THROWS_AS(q_error(0, 1), RankoptError);
  CHECK_THROWS_AS(q_error(1, -2), RankoptError);
}

TEST_CASE("refreshed statistics reproduce exact single-table counts") {
  EngineFixture fx(uniform_spec());
  const Query query = chain_query(2);
  // Unfiltered estimate equals the row count (histogram totals).
  CHECK(fx.estimator->estimate({&query, 0b01}) ==
        doctest::Approx(static_cast<double>(fx.db.relation(0).loaded_rows())));

  SUBCASE("full-domain filter changes nothing") {
    Query filtered = chain_query(2);
    filtered.filters.push_back({"t0", "val", 0, 99});
    CHECK(fx.estimator->estimate({&filtered, 0b01}) ==
          doctest::Approx(static_cast<double>(fx.db.relation(0).loaded_rows())));
  }
}

TEST_CASE("statistics are stale until refreshed, and refresh is idempotent") {
  Database db = generate_database(kCorrelatedSeed, correlated_spec());
  db.load_fraction(0.5);
  auto stats = StatisticsCatalog::build(db);
  const NativeEstimator estimator(stats);
  const Query query = chain_query(2);

  const double before_growth = estimator.estimate({&query, 0b01});
  db.apply_data_growth(0.25);
  // Same snapshot: estimate unchanged even though the data grew.
  CHECK(estimator.estimate({&query, 0b01}) == doctest::Approx(before_growth));

  auto refreshed = StatisticsCatalog::build(db);
  const NativeEstimator fresh(refreshed);
  CHECK(fresh.estimate({&query, 0b01}) >
        before_growth);

  auto again = StatisticsCatalog::build(db);
  for (size_t t = 0; t < refreshed->tables().size(); ++t) {
    CHECK(refreshed->tables()[t].row_count == again->tables()[t].row_count);
    for (size_t c = 0; c < refreshed->tables()[t].columns.size(); ++c) {
      CHECK(refreshed->tables()[t].columns[c].bucket_counts ==
            again->tables()[t].columns[c].bucket_counts);
      CHECK(refreshed->tables()[t].columns[c].distinct_count ==
            again->tables()[t].columns[c].distinct_count);
    }
  }
}

TEST_CASE("histogram bucket counts sum to the table row count") {
  EngineFixture fx(correlated_spec());
  for (const auto& table : fx.stats->tables()) {
    for (const auto& column : table.columns) {
      uint64_t total = 0;
      for (const auto count : column.bucket_counts) total += count;
      CHECK(total == table.row_count);
    }
  }
}

TEST_CASE("join estimate applies one selectivity term per edge") {
  // Two 1000-row tables, join column distinct=100 both sides -> 10000.
  TableDef a{"a", {{"jk", 100}}, 0};
  TableDef b{"b", {{"jk", 100}}, 0};
  std::vector<int32_t> values;
  for (int32_t i = 0; i < 1000; ++i) values.push_back(i % 100);
  std::vector<Relation> relations;
  relations.emplace_back(a, values);
  relations.emplace_back(b, values);
  const Database db{std::move(relations)};
  const NativeEstimator estimator(StatisticsCatalog::build(db));

  Query query;
  query.id = "ab";
  query.tables = {"a", "b"};
  query.joins = {{"a", "jk", "b", "jk"}};
  CHECK(estimator.estimate({&query, 0b11}) == doctest::Approx(1000.0 * 1000.0 / 100.0));
}

TEST_CASE("estimates are clamped at one") {
  EngineFixture fx(uniform_spec());
  Query query = chain_query(2);
  query.filters.push_back({"t0", "val", 7, 6});  // empty range
  CHECK(fx.estimator->estimate({&query, 0b01}) == doctest::Approx(1.0));
}

TEST_CASE("the correlated fixture produces a size-3 sub-query with q-error >= 5") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(5);
  query.validate(fx.catalog);
  double worst = 0.0;
  for (const uint32_t mask : connected_subquery_masks(query)) {
    if (std::popcount(mask) != 3) continue;
    const double estimate = fx.estimator->estimate({&query, mask});
    const double truth = std::max(1.0, double(fx.executor.true_cardinality({&query, mask})));
    worst = std::max(worst, q_error(estimate, truth));
  }
  CHECK(worst >= 5.0);
}

TEST_CASE("scan-only plans cost the scan coefficient times the estimate") {
  EngineFixture fx(uniform_spec());
  Query query;
  query.id = "one";
  query.tables = {"t0"};
  PlanTree plan(&query, make_scan(query, 0));
  CostModel unit;
  CHECK(unit.plan_cost(plan, *fx.estimator) ==
        doctest::Approx(static_cast<double>(fx.db.relation(0).loaded_rows())));

  CostCoefficients coefficients;
  coefficients.seq_scan = 2.5;
  const CostModel scaled(coefficients);
  CHECK(scaled.plan_cost(plan, *fx.estimator) ==
        doctest::Approx(2.5 * static_cast<double>(fx.db.relation(0).loaded_rows())));
}

TEST_CASE("cost is monotone in any node estimate") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(3);
  query.validate(fx.catalog);
  const CostModel cost_model;
  PlanTree plan = enumerate_best_plan(query, *fx.estimator, cost_model);
  const double base_cost = cost_model.plan_cost(plan, *fx.estimator);
  // Doubling the size-2 sub-query estimates can only increase the cost.
  const TunedEstimator doubled(*fx.estimator, 2, 2.0);
  CHECK(cost_model.plan_cost(plan, doubled) >= base_cost);
}

TEST_CASE("with unit coefficients and true cardinalities cost equals latency") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(3);
  query.filters.push_back({"t0", "val", 0, 59});
  query.validate(fx.catalog);
  const TrueCardinalityEstimator oracle(fx.db, fx.executor);
  const CostModel unit;
  for (const auto& plan : enumerate_all_plans(query)) {
    CHECK(unit.plan_cost(plan, oracle) ==
          doctest::Approx(fx.executor.execute_plan(plan).latency));
  }
}

TEST_CASE("under truth the cost argmin is the latency argmin") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(3);
  query.filters.push_back({"t1", "val", 20, 79});
  query.validate(fx.catalog);
  const TrueCardinalityEstimator oracle(fx.db, fx.executor);
  const CostModel unit;

  const auto plans = enumerate_all_plans(query);
  size_t best_cost = 0, best_latency = 0;
  double min_cost = std::numeric_limits<double>::max();
  double min_latency = std::numeric_limits<double>::max();
  for (size_t i = 0; i < plans.size(); ++i) {
    const double cost = unit.plan_cost(plans[i], oracle);
    const double latency = fx.executor.execute_plan(plans[i]).latency;
    if (cost < min_cost) {
      min_cost = cost;
      best_cost = i;
    }
    if (latency < min_latency) {
      min_latency = latency;
      best_latency = i;
    }
  }
  CHECK(plans[best_cost].serialize() == plans[best_latency].serialize());
}

TEST_CASE("single-table queries enumerate to a scan leaf") {
  EngineFixture fx(uniform_spec());
  Query query;
  query.id = "one";
  query.tables = {"t1"};
  const PlanTree plan = enumerate_best_plan(query, *fx.estimator, fx.cost_model);
  CHECK(plan.serialize() == "SeqScan(t1)");
}

TEST_CASE("two-table queries pick the cheapest operator pairing") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(2);
  query.validate(fx.catalog);
  const CostModel cost_model;
  const PlanTree plan = enumerate_best_plan(query, *fx.estimator, cost_model);

  double best = std::numeric_limits<double>::max();
  std::string best_plan;
  for (const auto& candidate : enumerate_all_plans(query)) {
    const double cost = cost_model.plan_cost(candidate, *fx.estimator);
    if (cost < best) {
      best = cost;
      best_plan = candidate.serialize();
    }
  }
  CHECK(cost_model.plan_cost(plan, *fx.estimator) == doctest::Approx(best));
}

TEST_CASE("dynamic programming matches exhaustive enumeration for q <= 4") {
  EngineFixture fx(correlated_spec());
  Rng rng(99);
  const CostModel cost_model;

  for (int trial = 0; trial < 12; ++trial) {
    Query query = trial % 2 == 0 ? chain_query(2 + trial % 3, "dp" + std::to_string(trial))
                                 : star_query(2 + trial % 2, "dp" + std::to_string(trial));
    // Random filters vary the estimates between trials.
    const int table = rng.next_int(0, query.table_count() - 1);
    const auto lo = static_cast<int32_t>(rng.next_below(80));
    query.filters.push_back({query.tables[table], "val", lo,
                             lo + static_cast<int32_t>(rng.next_below(20))});
    query.validate(fx.catalog);

    const PlanTree dp_plan = enumerate_best_plan(query, *fx.estimator, cost_model);
    const double dp_cost = cost_model.plan_cost(dp_plan, *fx.estimator);
    double exhaustive = std::numeric_limits<double>::max();
    for (const auto& plan : enumerate_all_plans(query)) {
      exhaustive = std::min(exhaustive, cost_model.plan_cost(plan, *fx.estimator));
    }
    CHECK(dp_cost == exhaustive);  // exact equality, both sides share the cost model
  }
}

TEST_CASE("identity-tuned estimators reproduce the native plan") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(4);
  query.validate(fx.catalog);
  const PlanTree native = enumerate_best_plan(query, *fx.estimator, fx.cost_model);
  for (int k = 1; k <= 4; ++k) {
    const TunedEstimator identity(*fx.estimator, k, 1.0);
    const PlanTree tuned = enumerate_best_plan(query, identity, fx.cost_model);
    CHECK(tuned.serialize() == native.serialize());
  }
}

TEST_CASE("some scaling factor changes the chosen plan on the correlated fixture") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(4);
  query.validate(fx.catalog);
  const PlanTree native = enumerate_best_plan(query, *fx.estimator, fx.cost_model);

  bool any_different = false;
  for (const double factor : scaling_factors(10, 100).factors) {
    for (int k = 1; k <= 4 && !any_different; ++k) {
      const TunedEstimator tuned(*fx.estimator, k, factor);
      any_different |=
          enumerate_best_plan(query, tuned, fx.cost_model).serialize() != native.serialize();
    }
  }
  CHECK(any_different);
}

TEST_CASE("the enumerator rejects oversized queries") {
  EngineFixture fx(uniform_spec());
  Query query = chain_query(3);
  EnumeratorConfig config;
  config.max_tables = 2;
  CHECK_THROWS_WITH_AS(
      static_cast<void>(enumerate_best_plan(query, *fx.estimator, fx.cost_model, config)),
      doctest::Contains("table limit"), RankoptError);
}
