#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <unordered_set>
#include <vector>

#include "rankopt/util/check.hpp"

namespace rankopt {

struct RuntimeStatsRecord {
  std::string query_id;
  std::string plan;        // serialized plan text
  std::string provenance;
  double latency = 0.0;    // engine work units
  uint64_t sequence = 0;   // position of the query in the workload stream
};

/// Append-only log of executed (plan, latency) observations. Appends of an
/// already-seen (query id, plan) pair are ignored, so re-executions are
/// idempotent. Optionally file-backed: records survive a restart and `sync`
/// flushes through to disk on update boundaries.
class RuntimeStatsRepository {
 public:
  RuntimeStatsRepository() = default;
  ~RuntimeStatsRepository();

  RuntimeStatsRepository(const RuntimeStatsRepository&) = delete;
  RuntimeStatsRepository& operator=(const RuntimeStatsRepository&) = delete;
  RuntimeStatsRepository(RuntimeStatsRepository&& other) noexcept;
  RuntimeStatsRepository& operator=(RuntimeStatsRepository&& other) noexcept;

  /// Opens (or creates) a file-backed repository, loading existing records.
  static RuntimeStatsRepository open(const std::string& path);

  /// Returns false when the (query id, plan) pair is already present.
  bool record_execution(const RuntimeStatsRecord& record);

  const std::vector<RuntimeStatsRecord>& records() const { return records_; }
  std::vector<const RuntimeStatsRecord*> records_for_query(const std::string& query_id) const;

  /// Flush and fsync the backing file, when there is one.
  void sync();

 private:
  std::vector<RuntimeStatsRecord> records_;
  std::unordered_set<uint64_t> keys_;
  std::FILE* file_ = nullptr;
};

}  // namespace rankopt
