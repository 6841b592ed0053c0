#pragma once

#include <functional>
#include <memory>

#include "rankopt/engine/executor.hpp"
#include "rankopt/explorer/explorer.hpp"
#include "rankopt/trainer/pairs.hpp"
#include "rankopt/trainer/repository.hpp"

namespace rankopt {

struct TrainingSchedule {
  int update_every = 100;        // queries between model updates
  double idle_fraction = 1.0;    // rho: fraction of queries whose candidates all run
  int steps_per_update = 0;      // SGD batches per update; 0 = one full pass
  uint64_t seed = 0;             // shuffling and the idle-fraction hash
  bool prefix_idle_rule = false; // fidelity switch: idle = first rho of the stream
  double learning_rate = 1e-3;
  int batch_size = 64;
};

/// Everything the loop consults per query. `stats` is replaced wholesale by
/// refresh_statistics so estimates always come from one coherent snapshot.
struct OnlineSystem {
  const Database* db = nullptr;
  const Executor* executor = nullptr;
  const CostModel* cost_model = nullptr;
  ExplorerConfig explorer_config;
  ExploreStrategy strategy = ExploreStrategy::kHeuristic;
  double alpha = 10.0;
  double delta = 100.0;
  int random_candidates = 10;  // plans drawn per query by the random strategy
  uint64_t explore_seed = 0;
  int histogram_buckets = 32;
  std::shared_ptr<const StatisticsCatalog> stats;

  void refresh_statistics();
};

struct DecisionRecord {
  uint64_t sequence = 0;
  std::string query_id;
  std::string chosen_plan;
  std::string provenance;
  double chosen_latency = 0.0;
  double native_latency = 0.0;
  /// Minimum latency over executed candidates; equals chosen_latency when
  /// only the chosen plan ran.
  double fastest_latency = 0.0;
  bool all_candidates_executed = false;
  int chosen_rank = -1;  // candidates strictly faster than the choice; -1 if unknown
  int unique_candidates = 0;
  int generation_calls = 0;
  bool explorer_fallback = false;  // brute-force guard tripped, heuristic used
};

struct OnlineResult {
  std::vector<DecisionRecord> decisions;
  ComparatorModel final_model;
  int updates_performed = 0;
  /// Instrumentation for the temporal-hygiene invariant: the largest record
  /// sequence ever fed into training, per update.
  std::vector<uint64_t> update_training_horizons;
  std::vector<uint64_t> update_sequences;
};

/// The serving-plus-background-training loop. For each query: explore
/// candidates, select with the currently published model, execute and record
/// the choice; on idle-eligible queries execute and record every candidate.
/// After each `update_every` block, train on all pairs buildable from the
/// repository and atomically publish the new model. The model that selects
/// for query t+1 has only seen records with sequence <= t.
OnlineResult run_online_loop(const std::vector<Query>& stream, const TrainingSchedule& schedule,
                             OnlineSystem& system, ComparatorModel model,
                             RuntimeStatsRepository& repository,
                             const std::function<void(uint64_t)>& before_query = {});

/// True iff the query participates in full candidate execution under rho.
bool idle_selected(const std::string& query_id, uint64_t position, size_t stream_size,
                   const TrainingSchedule& schedule);

}  // namespace rankopt
