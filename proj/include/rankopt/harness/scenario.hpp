#pragma once

#include "rankopt/engine/data_generator.hpp"
#include "rankopt/harness/config.hpp"
#include "rankopt/harness/report.hpp"
#include "rankopt/trainer/pretrain.hpp"

namespace rankopt {

/// Resolved scenario parameters. Everything an evaluation run depends on is
/// in here; runs are pure functions of this struct.
struct ScenarioConfig {
  std::string scenario = "curve";  // curve | stable | dynamic | ablation-*

  uint64_t catalog_seed = 1;
  CatalogSpec catalog_spec;

  uint64_t workload_seed = 1;
  int workload_count = 400;
  int split_point = 300;  // stable: train on [1, T], evaluate the tail
  std::string templates_file;  // empty: default templates over the catalog

  std::string strategy = "heuristic";
  double alpha = 10.0;
  double delta = 100.0;
  int max_candidates = 50;
  int random_candidates = 10;
  int enumerator_max_tables = 10;
  int bruteforce_max_subqueries = 12;

  TrainingSchedule schedule;
  bool cold_start = false;
  uint64_t model_seed = 7;
  int model_dim = 1;
  int pretrain_plans = 1500;
  uint64_t pretrain_seed = 11;
  PretrainConfig pretrain_config;

  double initial_fraction = 1.0;  // dynamic scenario loads less up front
  int growth_every = 200;
  double growth_step = 0.125;

  int histogram_buckets = 32;
  double regression_threshold = 0.0;
  OperatorWeights weights;
  CostCoefficients coefficients;

  static ScenarioConfig from_config(const Config& config);
  /// Canonical key=value echo of the resolved values (byte-stable).
  std::string echo() const;
};

struct ScenarioResult {
  EvaluationReport report;
  std::vector<DecisionRecord> decisions;
  ComparatorModel final_model;
  uint64_t catalog_fingerprint = 0;   // hash of the loaded tuples
  std::vector<std::string> workload_lines;  // formatted queries, for isolation checks
  int updates_performed = 0;
  std::vector<uint64_t> update_training_horizons;
  std::vector<uint64_t> update_sequences;
  size_t repository_records = 0;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Content hash of every loaded tuple, for scenario-isolation assertions.
uint64_t database_fingerprint(const Database& db);

}  // namespace rankopt
