#include "rankopt/harness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace rankopt {

namespace {

std::string format_units(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

}  // namespace

double EvaluationReport::total_learned() const {
  return accumulated_learned.empty() ? 0.0 : accumulated_learned.back();
}
double EvaluationReport::total_native() const {
  return accumulated_native.empty() ? 0.0 : accumulated_native.back();
}
double EvaluationReport::total_fastest() const {
  return accumulated_fastest.empty() ? 0.0 : accumulated_fastest.back();
}

std::optional<RankMetrics> compute_rank_metrics(std::span<const DecisionRecord> decisions) {
  if (decisions.empty()) {
    return std::nullopt;
  }
  RankMetrics metrics;
  for (const auto& decision : decisions) {
    if (!decision.all_candidates_executed || decision.chosen_rank < 0) {
      return std::nullopt;  // needs rho = 1 over the whole segment
    }
    metrics.p1_fraction += decision.chosen_rank < 1 ? 1.0 : 0.0;
    metrics.p5_fraction += decision.chosen_rank < 5 ? 1.0 : 0.0;
  }
  metrics.p1_fraction /= static_cast<double>(decisions.size());
  metrics.p5_fraction /= static_cast<double>(decisions.size());
  return metrics;
}

EvaluationReport build_report(std::span<const DecisionRecord> decisions,
                              double regression_threshold, std::string config_echo) {
  EvaluationReport report;
  report.regression_threshold = regression_threshold;
  report.config_echo = std::move(config_echo);

  double learned = 0.0, native = 0.0, fastest = 0.0;
  double candidate_sum = 0.0;
  report.min_candidates = decisions.empty() ? 0 : decisions.front().unique_candidates;
  for (const auto& decision : decisions) {
    EvaluationReport::Row row;
    row.sequence = decision.sequence;
    row.query_id = decision.query_id;
    row.learned = decision.chosen_latency;
    row.native = decision.native_latency;
    row.fastest = decision.fastest_latency;
    row.fastest_exact = decision.all_candidates_executed;
    row.unique_candidates = decision.unique_candidates;
    row.chosen_rank = decision.chosen_rank;
    row.explorer_fallback = decision.explorer_fallback;

    learned += row.learned;
    native += row.native;
    fastest += row.fastest;
    report.accumulated_learned.push_back(learned);
    report.accumulated_native.push_back(native);
    report.accumulated_fastest.push_back(fastest);

    if (row.learned - row.native > regression_threshold) ++report.regressions;
    if (row.native - row.learned > regression_threshold) ++report.improvements;
    candidate_sum += row.unique_candidates;
    report.min_candidates = std::min(report.min_candidates, row.unique_candidates);
    report.max_candidates = std::max(report.max_candidates, row.unique_candidates);
    report.explorer_fallbacks += row.explorer_fallback ? 1 : 0;

    report.rows.push_back(std::move(row));
  }
  if (!decisions.empty()) {
    report.mean_candidates = candidate_sum / static_cast<double>(decisions.size());
  }
  report.rank_metrics = compute_rank_metrics(decisions);
  return report;
}

void emit_report(const EvaluationReport& report, const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  check(!ec, "cannot create report directory '" + directory + "'");

  {
    std::ofstream out(directory + "/per_query.csv");
    check(out.good(), "cannot write per_query.csv");
    out << "sequence,query_id,learned,native,fastest,fastest_exact,candidates,chosen_rank,"
           "fallback\n";
    for (const auto& row : report.rows) {
      out << row.sequence << ',' << row.query_id << ',' << format_units(row.learned) << ','
          << format_units(row.native) << ',' << format_units(row.fastest) << ','
          << (row.fastest_exact ? 1 : 0) << ',' << row.unique_candidates << ',' << row.chosen_rank
          << ',' << (row.explorer_fallback ? 1 : 0) << '\n';
    }
    check(out.good(), "write failed for per_query.csv");
  }
  {
    std::ofstream out(directory + "/accumulated.csv");
    check(out.good(), "cannot write accumulated.csv");
    out << "sequence,learned,native,fastest\n";
    for (size_t i = 0; i < report.rows.size(); ++i) {
      out << report.rows[i].sequence << ',' << format_units(report.accumulated_learned[i]) << ','
          << format_units(report.accumulated_native[i]) << ','
          << format_units(report.accumulated_fastest[i]) << '\n';
    }
    check(out.good(), "write failed for accumulated.csv");
  }
  {
    std::ofstream out(directory + "/summary.txt");
    check(out.good(), "cannot write summary.txt");
    out << "# configuration\n" << report.config_echo << '\n';
    out << "# totals (work units)\n";
    out << "queries = " << report.rows.size() << '\n';
    out << "learned_total = " << format_units(report.total_learned()) << '\n';
    out << "native_total = " << format_units(report.total_native()) << '\n';
    out << "fastest_total = " << format_units(report.total_fastest()) << '\n';
    out << "\n# rank metrics (require full candidate execution)\n";
    if (report.rank_metrics.has_value()) {
      char buffer[64];
      std::snprintf(buffer, sizeof(buffer), "%.4f", report.rank_metrics->p1_fraction);
      out << "p1_fraction = " << buffer << '\n';
      std::snprintf(buffer, sizeof(buffer), "%.4f", report.rank_metrics->p5_fraction);
      out << "p5_fraction = " << buffer << '\n';
    } else {
      out << "p1_fraction = unavailable\np5_fraction = unavailable\n";
    }
    out << "\n# per-query regressions/improvements vs native\n";
    out << "regression_threshold = " << format_units(report.regression_threshold) << '\n';
    out << "regressions = " << report.regressions << '\n';
    out << "improvements = " << report.improvements << '\n';
    out << "\n# candidates\n";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3f", report.mean_candidates);
    out << "mean_unique_candidates = " << buffer << '\n';
    out << "min_unique_candidates = " << report.min_candidates << '\n';
    out << "max_unique_candidates = " << report.max_candidates << '\n';
    out << "explorer_fallbacks = " << report.explorer_fallbacks << '\n';
    check(out.good(), "write failed for summary.txt");
  }
}

}  // namespace rankopt
