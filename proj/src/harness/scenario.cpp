#include "rankopt/harness/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <limits>
#include <sstream>

#include "rankopt/harness/workload.hpp"
#include "rankopt/util/hash.hpp"

namespace rankopt {

namespace {

const std::vector<std::string> kScenarioNames = {
    "curve",          "stable",           "dynamic",      "ablation-pretrain",
    "ablation-strategy", "ablation-idle", "ablation-dim"};

std::string format_value(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_config(const Config& config) {
  ScenarioConfig sc;
  sc.scenario = config.get("scenario", sc.scenario);
  bool known = false;
  for (const auto& name : kScenarioNames) known |= name == sc.scenario;
  check(known, "unknown scenario '" + sc.scenario + "'");

  sc.catalog_seed = config.get_u64("catalog_seed", sc.catalog_seed);
  sc.catalog_spec.num_tables = config.get_int("num_tables", sc.catalog_spec.num_tables);
  sc.catalog_spec.rows_per_table =
      config.get_u64("rows_per_table", sc.catalog_spec.rows_per_table);
  sc.catalog_spec.join_domain = config.get_int("join_domain", sc.catalog_spec.join_domain);
  sc.catalog_spec.filter_domain = config.get_int("filter_domain", sc.catalog_spec.filter_domain);
  sc.catalog_spec.correlation = config.get_double("correlation", sc.catalog_spec.correlation);

  sc.workload_seed = config.get_u64("workload_seed", sc.workload_seed);
  sc.workload_count = config.get_int("workload_count", sc.workload_count);
  sc.split_point = config.get_int("split_point", sc.split_point);
  sc.templates_file = config.get("templates_file", sc.templates_file);

  sc.strategy = config.get("strategy", sc.strategy);
  sc.alpha = config.get_double("alpha", sc.alpha);
  sc.delta = config.get_double("delta", sc.delta);
  sc.max_candidates = config.get_int("max_candidates", sc.max_candidates);
  sc.random_candidates = config.get_int("random_candidates", sc.random_candidates);
  sc.enumerator_max_tables = config.get_int("enumerator_max_tables", sc.enumerator_max_tables);
  sc.bruteforce_max_subqueries =
      config.get_int("bruteforce_max_subqueries", sc.bruteforce_max_subqueries);

  sc.schedule.update_every = config.get_int("update_every", sc.schedule.update_every);
  sc.schedule.idle_fraction = config.get_double("idle_fraction", sc.schedule.idle_fraction);
  sc.schedule.steps_per_update = config.get_int("steps_per_update", sc.schedule.steps_per_update);
  sc.schedule.seed = config.get_u64("train_seed", sc.schedule.seed);
  sc.schedule.prefix_idle_rule = config.get("idle_rule", "hash") == "prefix";
  sc.schedule.learning_rate = config.get_double("learning_rate", sc.schedule.learning_rate);
  sc.schedule.batch_size = config.get_int("batch_size", sc.schedule.batch_size);

  sc.cold_start = config.get_bool("cold_start", sc.cold_start);
  sc.model_seed = config.get_u64("model_seed", sc.model_seed);
  sc.model_dim = config.get_int("model_dim", sc.model_dim);
  sc.pretrain_plans = config.get_int("pretrain_plans", sc.pretrain_plans);
  sc.pretrain_seed = config.get_u64("pretrain_seed", sc.pretrain_seed);
  sc.pretrain_config.epochs = config.get_int("pretrain_epochs", sc.pretrain_config.epochs);
  sc.pretrain_config.learning_rate =
      config.get_double("pretrain_lr", sc.pretrain_config.learning_rate);

  sc.initial_fraction = config.get_double("initial_fraction", sc.initial_fraction);
  sc.growth_every = config.get_int("growth_every", sc.growth_every);
  sc.growth_step = config.get_double("growth_step", sc.growth_step);

  sc.histogram_buckets = config.get_int("histogram_buckets", sc.histogram_buckets);
  sc.regression_threshold = config.get_double("regression_threshold", sc.regression_threshold);

  sc.weights.seq_scan = config.get_double("weight_seq_scan", sc.weights.seq_scan);
  sc.weights.hash_join = config.get_double("weight_hash_join", sc.weights.hash_join);
  sc.weights.merge_join = config.get_double("weight_merge_join", sc.weights.merge_join);
  sc.weights.nested_loop_join =
      config.get_double("weight_nested_loop_join", sc.weights.nested_loop_join);
  sc.coefficients.seq_scan = config.get_double("cost_seq_scan", sc.coefficients.seq_scan);
  sc.coefficients.hash_join = config.get_double("cost_hash_join", sc.coefficients.hash_join);
  sc.coefficients.merge_join = config.get_double("cost_merge_join", sc.coefficients.merge_join);
  sc.coefficients.nested_loop_join =
      config.get_double("cost_nested_loop_join", sc.coefficients.nested_loop_join);

  if (sc.scenario == "stable") {
    check(sc.split_point < sc.workload_count, "stable scenario needs split_point < workload size");
  }
  if (sc.scenario == "dynamic") {
    check(sc.initial_fraction > 0.0 && sc.initial_fraction <= 1.0,
          "dynamic scenario needs initial_fraction in (0,1]");
  }
  return sc;
}

std::string ScenarioConfig::echo() const {
  Config canonical;
  canonical.set("scenario", scenario);
  canonical.set("catalog_seed", std::to_string(catalog_seed));
  canonical.set("num_tables", std::to_string(catalog_spec.num_tables));
  canonical.set("rows_per_table", std::to_string(catalog_spec.rows_per_table));
  canonical.set("join_domain", std::to_string(catalog_spec.join_domain));
  canonical.set("filter_domain", std::to_string(catalog_spec.filter_domain));
  canonical.set("correlation", format_value(catalog_spec.correlation));
  canonical.set("workload_seed", std::to_string(workload_seed));
  canonical.set("workload_count", std::to_string(workload_count));
  canonical.set("split_point", std::to_string(split_point));
  canonical.set("templates_file", templates_file);
  canonical.set("strategy", strategy);
  canonical.set("alpha", format_value(alpha));
  canonical.set("delta", format_value(delta));
  canonical.set("max_candidates", std::to_string(max_candidates));
  canonical.set("random_candidates", std::to_string(random_candidates));
  canonical.set("update_every", std::to_string(schedule.update_every));
  canonical.set("idle_fraction", format_value(schedule.idle_fraction));
  canonical.set("idle_rule", schedule.prefix_idle_rule ? "prefix" : "hash");
  canonical.set("steps_per_update", std::to_string(schedule.steps_per_update));
  canonical.set("train_seed", std::to_string(schedule.seed));
  canonical.set("learning_rate", format_value(schedule.learning_rate));
  canonical.set("batch_size", std::to_string(schedule.batch_size));
  canonical.set("cold_start", cold_start ? "true" : "false");
  canonical.set("model_seed", std::to_string(model_seed));
  canonical.set("model_dim", std::to_string(model_dim));
  canonical.set("pretrain_plans", std::to_string(pretrain_plans));
  canonical.set("pretrain_seed", std::to_string(pretrain_seed));
  canonical.set("initial_fraction", format_value(initial_fraction));
  canonical.set("growth_every", std::to_string(growth_every));
  canonical.set("growth_step", format_value(growth_step));
  canonical.set("histogram_buckets", std::to_string(histogram_buckets));
  canonical.set("regression_threshold", format_value(regression_threshold));
  return canonical.echo();
}

uint64_t database_fingerprint(const Database& db) {
  uint64_t hash = kFnvOffset;
  for (const auto& relation : db.relations()) {
    hash = fnv1a64(relation.def().name, hash);
    hash = fnv1a64_mix(relation.loaded_rows(), hash);
    for (uint64_t r = 0; r < relation.loaded_rows(); ++r) {
      for (const int32_t v : relation.row(r)) {
        hash = fnv1a64_mix(static_cast<uint64_t>(static_cast<int64_t>(v)), hash);
      }
    }
  }
  return hash;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  // Engine and workload. All randomness flows from named seeds.
  Database db = generate_database(config.catalog_seed, config.catalog_spec);
  if (config.scenario == "dynamic") {
    db.load_fraction(config.initial_fraction);
  }
  const Executor executor(db, config.weights);
  const CostModel cost_model(config.coefficients);
  const Catalog catalog = db.catalog();

  std::vector<Query> templates;
  if (config.templates_file.empty()) {
    templates = default_templates(catalog);
  } else {
    templates = load_workload(config.templates_file);
  }
  std::vector<Query> workload =
      generate_workload(templates, config.workload_count, config.workload_seed, catalog);

  // Model: pre-trained unless the ablation asks for a cold start, which is a
  // zero-initialized model (ties resolve to the native-first candidate).
  // Pre-training only exists for the scalar embedding; d > 1 starts random.
  ModelConfig model_config;
  model_config.embedding_dim = config.model_dim;
  ComparatorModel model = ComparatorModel::zero_initialized(catalog, model_config);
  if (!config.cold_start) {
    model = ComparatorModel::random_initialized(catalog, config.model_seed, model_config);
    if (config.model_dim == 1) {
      model = pretrain(std::move(model), catalog, cost_model, config.pretrain_plans,
                       config.pretrain_seed, config.pretrain_config);
    }
  }

  OnlineSystem system;
  system.db = &db;
  system.executor = &executor;
  system.cost_model = &cost_model;
  system.explorer_config.max_candidates = config.max_candidates;
  system.explorer_config.bruteforce_max_subqueries = config.bruteforce_max_subqueries;
  system.explorer_config.enumerator.max_tables = config.enumerator_max_tables;
  system.strategy = strategy_from_name(config.strategy);
  system.alpha = config.alpha;
  system.delta = config.delta;
  system.random_candidates = config.random_candidates;
  system.explore_seed = config.workload_seed ^ 0x5bd1e995u;
  system.histogram_buckets = config.histogram_buckets;
  system.refresh_statistics();

  RuntimeStatsRepository repository;

  ScenarioResult result;
  result.catalog_fingerprint = database_fingerprint(db);
  for (const auto& query : workload) {
    result.workload_lines.push_back(format_query_line(query));
  }

  std::function<void(uint64_t)> before_query;
  if (config.scenario == "dynamic" && config.growth_every > 0) {
    before_query = [&](uint64_t sequence) {
      if (sequence > static_cast<uint64_t>(config.growth_every) &&
          (sequence - 1) % static_cast<uint64_t>(config.growth_every) == 0) {
        db.apply_data_growth(config.growth_step);
        system.refresh_statistics();
      }
    };
  }

  if (config.scenario == "stable") {
    // Train on the prefix, freeze, then evaluate the tail with full candidate
    // execution so rank metrics are defined.
    std::vector<Query> prefix(workload.begin(), workload.begin() + config.split_point);
    std::vector<Query> tail(workload.begin() + config.split_point, workload.end());

    OnlineResult training =
        run_online_loop(prefix, config.schedule, system, std::move(model), repository);

    TrainingSchedule frozen = config.schedule;
    frozen.update_every = std::numeric_limits<int>::max();
    frozen.idle_fraction = 1.0;
    frozen.prefix_idle_rule = false;
    OnlineResult evaluation =
        run_online_loop(tail, frozen, system, std::move(training.final_model), repository);

    result.decisions = std::move(evaluation.decisions);
    result.final_model = std::move(evaluation.final_model);
    result.updates_performed = training.updates_performed;
    result.update_training_horizons = std::move(training.update_training_horizons);
    result.update_sequences = std::move(training.update_sequences);
  } else {
    OnlineResult online = run_online_loop(workload, config.schedule, system, std::move(model),
                                          repository, before_query);
    result.decisions = std::move(online.decisions);
    result.final_model = std::move(online.final_model);
    result.updates_performed = online.updates_performed;
    result.update_training_horizons = std::move(online.update_training_horizons);
    result.update_sequences = std::move(online.update_sequences);
  }

  result.repository_records = repository.records().size();
  result.report = build_report(result.decisions, config.regression_threshold, config.echo());
  return result;
}

}  // namespace rankopt
