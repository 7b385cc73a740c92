#include "hcm/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "hcm/errors.hpp"

namespace hcm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list entry in '" + s + "'");
    out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError("key '" + key + "': not a number: " + v);
  return x;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  // Accept integral values written in floating notation, e.g. 1e4.
  const double x = to_double(key, v);
  if (x != static_cast<double>(static_cast<std::int64_t>(x))) {
    throw ConfigError("key '" + key + "': not an integer: " + v);
  }
  return static_cast<std::int64_t>(x);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment", "n_grid",     "tau",         "L",         "lambda",    "mu",
      "gamma",      "replicates", "limit_replicates", "seed", "hub_count", "theta_scale",
      "beta_scale", "rho",        "top_j",       "horizon",   "threads",   "output",
      "mode",       "time",       "masses",      "weights",   "coupling",  "grid_step",
      "dump_graph", "dump_trace", "trace_stride", "dump_limit_path", "hub_min_degree"};
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (cfg.has(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.set(key, value);
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in);
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(key, it->second);
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_int(key, it->second);
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError("key '" + key + "': not an unsigned integer: " + v);
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': out of range: " + v);
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  for (const auto& item : split_list(it->second)) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::int64_t> KeyValueConfig::get_ints(const std::string& key) const {
  std::vector<std::int64_t> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  for (const auto& item : split_list(it->second)) out.push_back(to_int(key, item));
  return out;
}

std::string KeyValueConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig run_config_from(const KeyValueConfig& kv) {
  for (const auto& [k, v] : kv.values()) {
    if (!known_keys().count(k)) throw ConfigError("unknown key '" + k + "'");
  }
  RunConfig rc;
  ExperimentConfig& e = rc.experiment;
  e.experiment = kv.get_string("experiment", e.experiment);
  if (kv.has("n_grid")) e.n_grid = kv.get_ints("n_grid");
  e.tau = kv.get_double("tau", e.tau);
  e.L = kv.get_double("L", e.L);
  e.lambda = kv.get_double("lambda", e.lambda);
  e.mu = kv.get_double("mu", e.mu);
  e.gamma = kv.get_double("gamma", e.gamma);
  const auto non_negative = [&](const std::string& key, std::int64_t fallback) {
    const auto v = kv.get_int(key, fallback);
    if (v < 0) throw ConfigError("key '" + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
  };
  e.replicates = non_negative("replicates", static_cast<std::int64_t>(e.replicates));
  e.limit_replicates = non_negative("limit_replicates", static_cast<std::int64_t>(e.limit_replicates));
  e.seed = kv.get_uint("seed", e.seed);
  e.hub_count = non_negative("hub_count", static_cast<std::int64_t>(e.hub_count));
  e.hub_min_degree = static_cast<int>(kv.get_int("hub_min_degree", e.hub_min_degree));
  e.theta_scale = kv.get_double("theta_scale", e.theta_scale);
  e.beta_scale = kv.get_double("beta_scale", e.beta_scale);
  e.rho = kv.get_double("rho", e.rho);
  e.top_j = non_negative("top_j", static_cast<std::int64_t>(e.top_j));
  e.horizon = kv.get_double("horizon", e.horizon);
  e.threads = static_cast<unsigned>(non_negative("threads", e.threads));
  e.output = kv.get_string("output", e.output);

  rc.mode = kv.get_string("mode", rc.mode);
  rc.time = kv.get_double("time", rc.time);
  rc.masses = kv.get_doubles("masses");
  rc.weights = kv.get_doubles("weights");
  rc.coupling = kv.get_string("coupling", rc.coupling);
  rc.grid_step = kv.get_double("grid_step", rc.grid_step);
  rc.dump_graph = kv.get_bool("dump_graph", rc.dump_graph);
  rc.dump_trace = kv.get_bool("dump_trace", rc.dump_trace);
  rc.trace_stride = kv.get_int("trace_stride", rc.trace_stride);
  rc.dump_limit_path = kv.get_bool("dump_limit_path", rc.dump_limit_path);

  static const std::set<std::string> experiments{"component-limit", "percolation-limit", "mcmw",
                                                 "percolate",       "levy",              "explore",
                                                 "validate-degrees"};
  if (!experiments.count(e.experiment)) throw ConfigError("unknown experiment '" + e.experiment + "'");
  if (rc.mode != "dynamic" && rc.mode != "modified" && rc.mode != "coupled") {
    throw ConfigError("mode must be dynamic, modified or coupled");
  }
  if (rc.coupling != "bernoulli" && rc.coupling != "clocks") throw ConfigError("coupling must be bernoulli or clocks");
  if (!(rc.grid_step > 0.0)) throw ConfigError("grid_step must be positive");
  if (rc.trace_stride < 1) throw ConfigError("trace_stride must be >= 1");
  e.validate();
  return rc;
}

}  // namespace hcm
