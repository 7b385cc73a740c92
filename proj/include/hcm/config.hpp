#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "hcm/experiments.hpp"

namespace hcm {

// Flat "key = value" text. Blank lines and lines starting with '#' are
// ignored; lists are comma separated. Parse and lookup failures throw
// ConfigError.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& key) const;

  // Sorted "key=value\n" lines.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(const std::string& bytes);

// Everything a run can be configured with; experiment-specific keys are
// ignored by experiments that do not use them.
struct RunConfig {
  ExperimentConfig experiment;
  std::string mode = "dynamic";      // percolate: dynamic | modified | coupled
  double time = -1.0;                // percolate / mcmw; negative: derive from mu
  std::vector<double> masses;        // mcmw
  std::vector<double> weights;       // mcmw
  std::string coupling = "bernoulli";  // mcmw: bernoulli | clocks
  double grid_step = 0.01;           // levy export grid
  bool dump_graph = false;
  bool dump_trace = false;
  std::int64_t trace_stride = 1;
  bool dump_limit_path = false;
};

// Throws ConfigError on unknown keys or invalid values.
RunConfig run_config_from(const KeyValueConfig& kv);

}  // namespace hcm
