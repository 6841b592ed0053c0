#include "rankopt/trainer/online.hpp"

#include <algorithm>
#include <map>

#include "rankopt/util/hash.hpp"

namespace rankopt {

void OnlineSystem::refresh_statistics() { stats = StatisticsCatalog::build(*db, histogram_buckets); }

bool idle_selected(const std::string& query_id, uint64_t position, size_t stream_size,
                   const TrainingSchedule& schedule) {
  if (schedule.prefix_idle_rule) {
    return static_cast<double>(position) <=
           schedule.idle_fraction * static_cast<double>(stream_size);
  }
  return hash_to_unit(query_id, schedule.seed) < schedule.idle_fraction;
}

OnlineResult run_online_loop(const std::vector<Query>& stream, const TrainingSchedule& schedule,
                             OnlineSystem& system, ComparatorModel model,
                             RuntimeStatsRepository& repository,
                             const std::function<void(uint64_t)>& before_query) {
  check(schedule.update_every >= 1, "update_every must be >= 1");
  check(schedule.idle_fraction > 0.0 && schedule.idle_fraction <= 1.0,
        "idle fraction must be in (0, 1]");
  check(system.db != nullptr && system.executor != nullptr && system.cost_model != nullptr,
        "online loop is missing its engine wiring");
  check(system.stats != nullptr, "online loop needs a statistics snapshot");

  OnlineResult result;
  auto published = std::make_shared<const ComparatorModel>(std::move(model));

  // The trainer needs the Query objects to re-featurize repository plans;
  // index the stream (and keep prior queries visible across updates).
  std::map<std::string, const Query*> query_index;
  for (const auto& query : stream) {
    query_index[query.id] = &query;
  }

  auto run_training = [&](uint64_t horizon_sequence) {
    const Catalog catalog = system.db->catalog();
    const NativeEstimator estimator(system.stats);

    std::map<std::string, std::vector<const RuntimeStatsRecord*>> by_query;
    uint64_t max_sequence = 0;
    for (const auto& record : repository.records()) {
      check(record.sequence <= horizon_sequence,
            "temporal hygiene violated: record from the future");
      max_sequence = std::max(max_sequence, record.sequence);
      by_query[record.query_id].push_back(&record);
    }

    std::vector<PlanPairExample> pairs;
    for (const auto& [query_id, records] : by_query) {
      if (records.size() < 2) continue;
      const auto it = query_index.find(query_id);
      if (it == query_index.end()) continue;  // foreign records; cannot featurize
      std::vector<LabeledPlan> group;
      group.reserve(records.size());
      for (const auto* record : records) {
        const PlanTree plan = parse_plan(*it->second, record->plan);
        group.push_back({std::make_shared<FeatureTree>(
                             featurize(plan, estimator, published->bounds, catalog)),
                         record->latency});
      }
      auto group_pairs = build_pairs(group);
      pairs.insert(pairs.end(), std::make_move_iterator(group_pairs.begin()),
                   std::make_move_iterator(group_pairs.end()));
    }
    if (pairs.empty()) {
      return;
    }

    Rng rng(fnv1a64_mix(schedule.seed, kFnvOffset) ^ (result.updates_performed + 1));
    rng.shuffle(pairs);

    const size_t batch = static_cast<size_t>(schedule.batch_size);
    const size_t full_pass_steps = (pairs.size() + batch - 1) / batch;
    const size_t steps =
        schedule.steps_per_update > 0 ? static_cast<size_t>(schedule.steps_per_update)
                                      : full_pass_steps;

    ComparatorModel next = *published;
    size_t cursor = 0;
    for (size_t step = 0; step < steps; ++step) {
      if (cursor >= pairs.size()) {
        cursor = 0;
        rng.shuffle(pairs);
      }
      const size_t end = std::min(cursor + batch, pairs.size());
      const std::span<const PlanPairExample> span(pairs.data() + cursor, end - cursor);
      const ModelGradients grads = pairwise_gradients(span, next);
      apply_gradients(next, grads, schedule.learning_rate);
      cursor = end;
    }

    // Atomic snapshot swap: in-flight selections keep their shared_ptr.
    published = std::make_shared<const ComparatorModel>(std::move(next));
    ++result.updates_performed;
    result.update_training_horizons.push_back(max_sequence);
    result.update_sequences.push_back(horizon_sequence);
    repository.sync();
  };

  for (size_t index = 0; index < stream.size(); ++index) {
    const Query& query = stream[index];
    const uint64_t sequence = index + 1;
    if (before_query) {
      before_query(sequence);
    }

    const NativeEstimator estimator(system.stats);
    const PlanExplorer explorer(estimator, *system.cost_model, system.explorer_config);

    DecisionRecord decision;
    decision.sequence = sequence;
    decision.query_id = query.id;

    CandidateList candidates;
    switch (system.strategy) {
      case ExploreStrategy::kHeuristic:
        candidates = explorer.explore_heuristic(query, system.alpha, system.delta);
        break;
      case ExploreStrategy::kBruteForce:
        try {
          candidates = explorer.explore_bruteforce(query, system.alpha, system.delta);
        } catch (const RankoptError&) {
          candidates = explorer.explore_heuristic(query, system.alpha, system.delta);
          decision.explorer_fallback = true;
        }
        break;
      case ExploreStrategy::kRandom:
        candidates = explorer.explore_random(
            query, system.random_candidates,
            fnv1a64_mix(system.explore_seed, fnv1a64(query.id)));
        break;
    }
    check(!candidates.candidates.empty(), "explorer produced no candidates");
    decision.unique_candidates = static_cast<int>(candidates.candidates.size());
    decision.generation_calls = candidates.generation_calls;

    const Catalog catalog = system.db->catalog();
    std::vector<FeatureTree> features;
    features.reserve(candidates.candidates.size());
    for (const auto& candidate : candidates.candidates) {
      features.push_back(featurize(candidate.plan, estimator, published->bounds, catalog));
    }
    const size_t best = select_best_index(features, *published);

    const auto& chosen = candidates.candidates[best];
    const LatencyMeasurement chosen_run = system.executor->execute_plan(chosen.plan);
    decision.chosen_plan = chosen.plan.serialize();
    decision.provenance = chosen.provenance.describe();
    decision.chosen_latency = chosen_run.latency;
    repository.record_execution({query.id, decision.chosen_plan,
                                 chosen.provenance.describe(), chosen_run.latency, sequence});

    // The native plan is the yardstick for every query, so measure it even
    // when it is not among the executed candidates (random strategy).
    PlanTree native_plan =
        enumerate_best_plan(query, estimator, *system.cost_model, system.explorer_config.enumerator);
    decision.native_latency = system.executor->execute_plan(native_plan).latency;

    decision.fastest_latency = chosen_run.latency;
    if (idle_selected(query.id, sequence, stream.size(), schedule)) {
      decision.all_candidates_executed = true;
      decision.chosen_rank = 0;
      for (size_t c = 0; c < candidates.candidates.size(); ++c) {
        double latency = chosen_run.latency;
        if (c != best) {
          const LatencyMeasurement run = system.executor->execute_plan(candidates.candidates[c].plan);
          latency = run.latency;
          repository.record_execution({query.id, candidates.candidates[c].plan.serialize(),
                                       candidates.candidates[c].provenance.describe(), latency,
                                       sequence});
        }
        decision.fastest_latency = std::min(decision.fastest_latency, latency);
        if (latency < chosen_run.latency) {
          ++decision.chosen_rank;
        }
      }
    }

    result.decisions.push_back(std::move(decision));

    if (sequence % static_cast<uint64_t>(schedule.update_every) == 0) {
      run_training(sequence);
    }
  }

  repository.sync();
  result.final_model = *published;
  return result;
}

}  // namespace rankopt
