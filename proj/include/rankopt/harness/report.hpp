#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankopt/trainer/online.hpp"

namespace rankopt {

struct RankMetrics {
  double p1_fraction = 0.0;  // chosen plan was the true fastest candidate
  double p5_fraction = 0.0;  // chosen plan within the top 5 by true latency
};

struct EvaluationReport {
  struct Row {
    uint64_t sequence = 0;
    std::string query_id;
    double learned = 0.0;   // latency of the selected plan
    double native = 0.0;    // latency of the native optimizer's plan
    double fastest = 0.0;   // min over executed candidates
    bool fastest_exact = false;  // all candidates were executed
    int unique_candidates = 0;
    int chosen_rank = -1;
    bool explorer_fallback = false;
  };

  std::vector<Row> rows;
  std::vector<double> accumulated_learned;
  std::vector<double> accumulated_native;
  std::vector<double> accumulated_fastest;

  std::optional<RankMetrics> rank_metrics;  // absent unless every row ran all candidates
  double regression_threshold = 0.0;
  int regressions = 0;   // learned - native > threshold
  int improvements = 0;  // native - learned > threshold
  double mean_candidates = 0.0;
  int min_candidates = 0;
  int max_candidates = 0;
  int explorer_fallbacks = 0;
  std::string config_echo;

  double total_learned() const;
  double total_native() const;
  double total_fastest() const;
};

/// Fraction of decisions whose chosen plan lies within the true top-k of the
/// executed candidates. Requires full candidate execution (rho = 1) on every
/// decision; otherwise the metric is unavailable.
std::optional<RankMetrics> compute_rank_metrics(std::span<const DecisionRecord> decisions);

EvaluationReport build_report(std::span<const DecisionRecord> decisions,
                              double regression_threshold, std::string config_echo);

/// Writes per_query.csv, accumulated.csv, and summary.txt. Byte-stable for
/// identical inputs.
void emit_report(const EvaluationReport& report, const std::string& directory);

}  // namespace rankopt
