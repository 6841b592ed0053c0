#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "rankopt/explorer/explorer.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rankopt;
using namespace rankopt::testing;

TEST_CASE("scaling factor grids") {
  SUBCASE("alpha 10, delta 100") {
    const auto set = scaling_factors(10, 100);
    CHECK(set.sorted() == std::vector<double>{0.01, 0.1, 1.0, 10.0, 100.0});
    CHECK(set.factors == std::vector<double>{1.0, 0.1, 10.0, 0.01, 100.0});
  }
  SUBCASE("delta 1 collapses to the identity") {
    const auto set = scaling_factors(10, 1);
    CHECK(set.factors == std::vector<double>{1.0});
  }
  SUBCASE("grid size matches the exponent range") {
    const auto set = scaling_factors(2, 5);
    // floor(-log2 5) = -3, ceil(log2 5) = 3
    CHECK(set.factors.size() == 7);
    CHECK(set.sorted().front() == doctest::Approx(0.125));
    CHECK(set.sorted().back() == doctest::Approx(8.0));
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(scaling_factors(1.0, 10), RankoptError);
    CHECK_THROWS_AS(scaling_factors(10, 0.5), RankoptError);
  }
}

TEST_CASE("priority order is non-decreasing in |log f|, smaller factor first on ties") {
  const auto set = scaling_factors(10, 1000);
  double previous = -1.0;
  for (size_t i = 0; i < set.factors.size(); ++i) {
    const double magnitude = std::abs(std::log(set.factors[i]));
    CHECK(magnitude >= previous - 1e-12);
    if (i > 0 && std::abs(magnitude - previous) < 1e-12) {
      CHECK(set.factors[i] > set.factors[i - 1]);
    }
    previous = magnitude;
  }
}

TEST_CASE("heuristic exploration makes exactly q times |F| generation calls") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(4);
  query.validate(fx.catalog);
  const PlanExplorer explorer(*fx.estimator, fx.cost_model);
  const auto list = explorer.explore_heuristic(query, 10, 100);

  CHECK(list.generation_calls == 4 * 5);
  CHECK(list.candidates.size() <= 20);
  CHECK(list.query_id == query.id);
}

TEST_CASE("the native plan is always present and first in heuristic lists") {
  EngineFixture fx(correlated_spec());
  for (int tables = 2; tables <= 5; ++tables) {
    Query query = chain_query(tables);
    query.validate(fx.catalog);
    const PlanExplorer explorer(*fx.estimator, fx.cost_model);
    const auto list = explorer.explore_heuristic(query, 10, 100);
    const PlanTree native = enumerate_best_plan(query, *fx.estimator, fx.cost_model);

    REQUIRE(!list.candidates.empty());
    CHECK(list.candidates.front().plan.serialize() == native.serialize());
    CHECK(list.candidates.front().provenance.native);
    // Exactly one candidate carries the native provenance after dedup.
    int native_count = 0;
    for (const auto& candidate : list.candidates) {
      native_count += candidate.provenance.native ? 1 : 0;
    }
    CHECK(native_count == 1);
  }
}

TEST_CASE("heuristic lists are structurally deduplicated and priority-ordered") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(4);
  query.validate(fx.catalog);
  const PlanExplorer explorer(*fx.estimator, fx.cost_model);
  const auto list = explorer.explore_heuristic(query, 10, 100);

  std::set<std::string> seen;
  double previous_priority = 0.0;
  for (const auto& candidate : list.candidates) {
    CHECK(seen.insert(candidate.plan.serialize()).second);
    const double priority = std::abs(std::log(candidate.provenance.factor));
    CHECK(priority >= previous_priority - 1e-12);
    previous_priority = priority;
  }
}

TEST_CASE("heuristic exploration finds a faster-than-native plan on the fixture") {
  EngineFixture fx(correlated_spec());
  // Frozen workload query (template chain t1..t4, generator seed 1).
  Query query = parse_query_line(
      "TABLES t1,t2,t3,t4 JOIN t1.jk1=t2.jk0,t2.jk1=t3.jk0,t3.jk1=t4.jk0 "
      "FILTER t1.jk1 in [26,78],t2.jk0 in [0,79],t4.jk0 in [4,73]",
      "frozen");
  query.validate(fx.catalog);

  const PlanExplorer explorer(*fx.estimator, fx.cost_model);
  const auto list = explorer.explore_heuristic(query, 10, 100);
  const double native_latency = fx.executor.execute_plan(list.candidates.front().plan).latency;

  double best = native_latency;
  for (const auto& candidate : list.candidates) {
    best = std::min(best, fx.executor.execute_plan(candidate.plan).latency);
  }
  CHECK(best < native_latency);
}

TEST_CASE("brute force enumerates every factor assignment") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(2);
  query.validate(fx.catalog);
  const PlanExplorer explorer(*fx.estimator, fx.cost_model);
  // Sub-queries {t0}, {t1}, {t0 t1}; |F| = 3 for delta = 10.
  const auto list = explorer.explore_bruteforce(query, 10, 10);
  CHECK(list.generation_calls == 27);
  CHECK(!list.candidates.empty());
  CHECK(list.candidates.front().provenance.native);

  const PlanTree native = enumerate_best_plan(query, *fx.estimator, fx.cost_model);
  CHECK(list.contains_structure(native));
}

TEST_CASE("the brute-force guard rejects blow-ups and names the fallback") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(5);
  query.validate(fx.catalog);
  ExplorerConfig config;
  config.bruteforce_max_subqueries = 12;
  const PlanExplorer explorer(*fx.estimator, fx.cost_model, config);
  // A 5-chain has 15 connected sub-queries.
  CHECK_THROWS_WITH_AS(static_cast<void>(explorer.explore_bruteforce(query, 10, 100)),
                       doctest::Contains("heuristic"), RankoptError);
}

TEST_CASE("brute force with enough delta reaches the q-error <= alpha premise") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(3);
  query.validate(fx.catalog);

  const double alpha = 10.0;
  // Observed worst q-error of the native estimator on this query.
  double worst = 1.0;
  const auto masks = connected_subquery_masks(query);
  for (const uint32_t mask : masks) {
    const double estimate = fx.estimator->estimate({&query, mask});
    const double truth =
        std::max(1.0, static_cast<double>(fx.executor.true_cardinality({&query, mask})));
    worst = std::max(worst, q_error(estimate, truth));
  }
  const double delta = std::max(worst, 10.0);

  // At least one assignment of factors scales every sub-query to within
  // alpha of its true cardinality.
  const auto factors = scaling_factors(alpha, delta);
  bool some_assignment_good = true;
  for (const uint32_t mask : masks) {
    const double estimate = fx.estimator->estimate({&query, mask});
    const double truth =
        std::max(1.0, static_cast<double>(fx.executor.true_cardinality({&query, mask})));
    bool mask_covered = false;
    for (const double f : factors.factors) {
      mask_covered |= q_error(std::max(1.0, f * estimate), truth) <= alpha;
    }
    some_assignment_good &= mask_covered;
  }
  CHECK(some_assignment_good);
}

TEST_CASE("random exploration is seeded and structurally valid") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(4);
  query.validate(fx.catalog);
  const PlanExplorer explorer(*fx.estimator, fx.cost_model);

  const auto first = explorer.explore_random(query, 1, 42);
  const auto second = explorer.explore_random(query, 1, 42);
  REQUIRE(first.candidates.size() == 1);
  CHECK(first.candidates.front().plan.serialize() == second.candidates.front().plan.serialize());

  const auto many = explorer.explore_random(query, 25, 7);
  for (const auto& candidate : many.candidates) {
    CHECK_NOTHROW(candidate.plan.validate());
  }
  // Dedup keeps the list at or below the draw count.
  CHECK(many.candidates.size() <= 25);
}

TEST_CASE("random candidates execute slower than heuristic candidates on average") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(4);
  query.filters.push_back({"t1", "val", 10, 69});
  query.validate(fx.catalog);
  const PlanExplorer explorer(*fx.estimator, fx.cost_model);

  const auto heuristic = explorer.explore_heuristic(query, 10, 100);
  const auto random = explorer.explore_random(query, 20, 3);

  auto mean_latency = [&](const CandidateList& list) {
    double total = 0.0;
    for (const auto& candidate : list.candidates) {
      total += fx.executor.execute_plan(candidate.plan).latency;
    }
    return total / static_cast<double>(list.candidates.size());
  };
  CHECK(mean_latency(random) > mean_latency(heuristic));
}

TEST_CASE("the candidate cap truncates in priority order") {
  EngineFixture fx(correlated_spec());
  Query query = chain_query(4);
  query.validate(fx.catalog);
  ExplorerConfig config;
  config.max_candidates = 3;
  const PlanExplorer capped(*fx.estimator, fx.cost_model, config);
  const PlanExplorer uncapped(*fx.estimator, fx.cost_model);

  const auto full = uncapped.explore_heuristic(query, 10, 100);
  const auto truncated = capped.explore_heuristic(query, 10, 100);
  REQUIRE(truncated.candidates.size() == std::min<size_t>(3, full.candidates.size()));
  for (size_t i = 0; i < truncated.candidates.size(); ++i) {
    CHECK(truncated.candidates[i].plan.serialize() == full.candidates[i].plan.serialize());
  }
  // Call counting is unaffected by the cap.
  CHECK(truncated.generation_calls == full.generation_calls);
}
