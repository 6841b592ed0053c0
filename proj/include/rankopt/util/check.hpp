#pragma once

#include <stdexcept>
#include <string>

namespace rankopt {

// Thrown on violated preconditions and malformed inputs. Tests match on the
// message prefix, so keep messages short and stable.
class RankoptError : public std::runtime_error {
 public:
  explicit RankoptError(const std::string& message) : std::runtime_error(message) {}
};

[[noreturn]] inline void fail(const std::string& message) {
  throw RankoptError(message);
}

inline void check(bool condition, const std::string& message) {
  if (!condition) {
    fail(message);
  }
}

}  // namespace rankopt
