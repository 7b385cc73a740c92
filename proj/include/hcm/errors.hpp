#pragma once

#include <stdexcept>
#include <string>

namespace hcm {

// Raised when an internal consistency check fails during a run. The CLI maps
// it to exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Bad or missing configuration. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantViolation(what);
}

}  // namespace hcm
