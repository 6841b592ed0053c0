#pragma once

#include <map>
#include <string>

#include "rankopt/util/check.hpp"

namespace rankopt {

/// Flat `key = value` configuration. Lines starting with '#' are comments.
/// Unknown keys are kept (and echoed) rather than rejected.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  uint64_t get_u64(const std::string& key, uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Canonical sorted `key = value` lines, used in report summaries.
  std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rankopt
