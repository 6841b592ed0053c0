#include "rankopt/trainer/repository.hpp"

#include <unistd.h>

#include <cinttypes>
#include <fstream>
#include <sstream>

#include "rankopt/util/hash.hpp"

namespace rankopt {

namespace {

uint64_t record_key(const std::string& query_id, const std::string& plan) {
  return fnv1a64(plan, fnv1a64(query_id));
}

}  // namespace

RuntimeStatsRepository::~RuntimeStatsRepository() {
  if (file_ != nullptr) {
    std::fclose(file_);
  }
}

RuntimeStatsRepository::RuntimeStatsRepository(RuntimeStatsRepository&& other) noexcept
    : records_(std::move(other.records_)), keys_(std::move(other.keys_)), file_(other.file_) {
  other.file_ = nullptr;
}

RuntimeStatsRepository& RuntimeStatsRepository::operator=(RuntimeStatsRepository&& other) noexcept {
  if (this != &other) {
    if (file_ != nullptr) std::fclose(file_);
    records_ = std::move(other.records_);
    keys_ = std::move(other.keys_);
    file_ = other.file_;
    other.file_ = nullptr;
  }
  return *this;
}

RuntimeStatsRepository RuntimeStatsRepository::open(const std::string& path) {
  RuntimeStatsRepository repo;
  std::ifstream in(path);
  if (in.good()) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream fields(line);
      RuntimeStatsRecord record;
      std::string latency;
      check(static_cast<bool>(std::getline(fields, record.query_id, '\t') &&
                              std::getline(fields, record.plan, '\t') &&
                              std::getline(fields, record.provenance, '\t') &&
                              std::getline(fields, latency, '\t') && (fields >> record.sequence)),
            "malformed repository line: " + line);
      record.latency = std::strtod(latency.c_str(), nullptr);
      repo.keys_.insert(record_key(record.query_id, record.plan));
      repo.records_.push_back(std::move(record));
    }
  }
  repo.file_ = std::fopen(path.c_str(), "a");
  check(repo.file_ != nullptr, "cannot open repository file '" + path + "'");
  return repo;
}

bool RuntimeStatsRepository::record_execution(const RuntimeStatsRecord& record) {
  if (!keys_.insert(record_key(record.query_id, record.plan)).second) {
    return false;
  }
  records_.push_back(record);
  if (file_ != nullptr) {
    std::fprintf(file_, "%s\t%s\t%s\t%.17g\t%" PRIu64 "\n", record.query_id.c_str(),
                 record.plan.c_str(), record.provenance.c_str(), record.latency, record.sequence);
  }
  return true;
}

std::vector<const RuntimeStatsRecord*> RuntimeStatsRepository::records_for_query(
    const std::string& query_id) const {
  std::vector<const RuntimeStatsRecord*> result;
  for (const auto& record : records_) {
    if (record.query_id == query_id) {
      result.push_back(&record);
    }
  }
  return result;
}

void RuntimeStatsRepository::sync() {
  if (file_ != nullptr) {
    std::fflush(file_);
    ::fsync(fileno(file_));
  }
}

}  // namespace rankopt
