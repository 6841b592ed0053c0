#pragma once

#include <map>
#include <memory>

#include "rankopt/comparator/model.hpp"
#include "rankopt/optimizer/cost_model.hpp"

namespace rankopt {

struct PretrainConfig {
  double learning_rate = 0.1;
  int batch_size = 64;
  int epochs = 200;
  double card_min = 1.0;    // per-node random cardinality range (log-uniform)
  double card_max = 1e6;
  int max_join_tables = 6;  // synthetic plans span 1..min(this, catalog size) tables
};

/// Synthetic plans over the catalog with random join orders, operators, and
/// per-node cardinality annotations. Queries live alongside the plans that
/// reference them.
struct SyntheticPlanCorpus {
  std::vector<std::unique_ptr<Query>> queries;
  std::vector<PlanTree> plans;
  std::vector<std::map<uint32_t, double>> node_cards;  // mask -> forced cardinality
};

SyntheticPlanCorpus generate_synthetic_plans(const Catalog& catalog, int n_plans, uint64_t seed,
                                             const PretrainConfig& config = {});

/// Fits the 1-dim embedding to the min-max-normalized log of the native plan
/// cost by squared-error regression over a synthetic corpus, without
/// executing anything. Freezes the model's normalization bounds from the
/// corpus. n_plans == 0 leaves the model untouched; d != 1 is an error.
ComparatorModel pretrain(ComparatorModel model, const Catalog& catalog,
                         const CostModel& native_cost, int n_plans, uint64_t seed,
                         const PretrainConfig& config = {});

}  // namespace rankopt
