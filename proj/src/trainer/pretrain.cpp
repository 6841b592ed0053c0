#include "rankopt/trainer/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rankopt/comparator/network.hpp"
#include "rankopt/explorer/explorer.hpp"

namespace rankopt {

namespace {

// Chain query over a random subset of catalog tables; predicates are only
// needed to make the query well-formed, the forced cardinalities carry the
// signal.
std::unique_ptr<Query> synthetic_query(const Catalog& catalog, int table_count, int index,
                                       Rng& rng) {
  auto query = std::make_unique<Query>();
  query->id = "pretrain" + std::to_string(index);
  std::vector<int> tables(catalog.tables.size());
  for (size_t t = 0; t < tables.size(); ++t) tables[t] = static_cast<int>(t);
  rng.shuffle(tables);
  tables.resize(table_count);
  for (const int t : tables) {
    query->tables.push_back(catalog.tables[t].name);
  }
  for (int i = 0; i + 1 < table_count; ++i) {
    query->joins.push_back({query->tables[i], catalog.tables[tables[i]].columns.front().name,
                            query->tables[i + 1],
                            catalog.tables[tables[i + 1]].columns.front().name});
  }
  return query;
}

}  // namespace

SyntheticPlanCorpus generate_synthetic_plans(const Catalog& catalog, int n_plans, uint64_t seed,
                                             const PretrainConfig& config) {
  check(n_plans >= 0, "corpus size must be non-negative");
  const int max_tables =
      std::min<int>(config.max_join_tables, static_cast<int>(catalog.tables.size()));
  const double log_lo = std::log(config.card_min);
  const double log_hi = std::log(config.card_max);

  SyntheticPlanCorpus corpus;
  Rng rng(seed);
  for (int i = 0; i < n_plans; ++i) {
    auto query = synthetic_query(catalog, rng.next_int(1, max_tables), i, rng);
    PlanTree plan = sample_random_plan(*query, rng);

    std::map<uint32_t, double> cards;
    auto assign = [&](auto&& self, const PlanNode& node) -> void {
      cards[node.mask] = std::exp(rng.next_double(log_lo, log_hi));
      if (node.left) self(self, *node.left);
      if (node.right) self(self, *node.right);
    };
    assign(assign, *plan.root);

    corpus.queries.push_back(std::move(query));
    corpus.plans.push_back(std::move(plan));
    corpus.node_cards.push_back(std::move(cards));
  }
  return corpus;
}

ComparatorModel pretrain(ComparatorModel model, const Catalog& catalog,
                         const CostModel& native_cost, int n_plans, uint64_t seed,
                         const PretrainConfig& config) {
  check(model.embedding_dim == 1, "pre-training is defined for 1-dim embeddings only");
  if (n_plans == 0) {
    return model;
  }

  const SyntheticPlanCorpus corpus = generate_synthetic_plans(catalog, n_plans, seed, config);

  // Freeze normalization bounds from this corpus: the cardinality sampling
  // range and the observed node widths.
  model.bounds.log_card_min = std::log(config.card_min);
  model.bounds.log_card_max = std::log(config.card_max);
  double width_min = std::numeric_limits<double>::max();
  double width_max = std::numeric_limits<double>::lowest();
  for (size_t i = 0; i < corpus.plans.size(); ++i) {
    auto walk = [&](auto&& self, const PlanNode& node) -> void {
      const double width = subquery_row_width(*corpus.plans[i].query, node.mask, catalog);
      width_min = std::min(width_min, width);
      width_max = std::max(width_max, width);
      if (node.left) self(self, *node.left);
      if (node.right) self(self, *node.right);
    };
    walk(walk, *corpus.plans[i].root);
  }
  model.bounds.width_min = width_min;
  model.bounds.width_max = width_max;

  // Featurize and label. Labels are min-max-normalized log costs.
  std::vector<FeatureTree> trees;
  std::vector<double> log_costs;
  trees.reserve(corpus.plans.size());
  for (size_t i = 0; i < corpus.plans.size(); ++i) {
    const ForcedCardinalityEstimator forced(corpus.node_cards[i]);
    trees.push_back(featurize(corpus.plans[i], forced, model.bounds, catalog));
    log_costs.push_back(std::log(native_cost.plan_cost(corpus.plans[i], forced)));
  }
  const auto [lo_it, hi_it] = std::minmax_element(log_costs.begin(), log_costs.end());
  const double label_lo = *lo_it;
  const double label_range = std::max(*hi_it - label_lo, 1e-12);
  std::vector<double> targets(log_costs.size());
  for (size_t i = 0; i < log_costs.size(); ++i) {
    targets[i] = (log_costs[i] - label_lo) / label_range;
  }

  Rng shuffle_rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<size_t> order(trees.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    size_t cursor = 0;
    while (cursor < order.size()) {
      const size_t batch_end = std::min(cursor + config.batch_size, order.size());
      ModelGradients grads = ModelGradients::zeros_like(model);
      for (size_t b = cursor; b < batch_end; ++b) {
        regression_gradients(trees[order[b]], targets[order[b]], model, grads);
      }
      grads.scale(1.0 / static_cast<double>(batch_end - cursor));
      apply_gradients(model, grads, config.learning_rate);
      cursor = batch_end;
    }
  }
  return model;
}

}  // namespace rankopt
