#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "hcm/cli.hpp"
#include "hcm/config.hpp"
#include "hcm/errors.hpp"
#include "hcm/experiments.hpp"
#include "hcm/rng.hpp"

using namespace hcm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hcm_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto path = dir / "run.cfg";
  std::ofstream(path) << text;
  return path;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

KeyValueConfig parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValueConfig::parse(in);
}

}  // namespace

TEST_CASE("seed streams") {
  CHECK(seed_stream(42, 0) != seed_stream(42, 1));
  CHECK(seed_stream(42, 0) == 0x4579b960bb007f46ULL);
  CHECK(seed_stream(42, 1) == 0xdb6685c74bcff7fdULL);
}

TEST_CASE("a million derived seeds do not collide") {
  std::vector<std::uint64_t> seeds(1000000);
  for (std::uint64_t i = 0; i < seeds.size(); ++i) seeds[i] = seed_stream(7, i);
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("uniform draws stay in the open unit interval") {
  CHECK(word_to_open_unit(0) > 0.0);
  CHECK(word_to_open_unit(~std::uint64_t{0}) < 1.0);
  CHECK(word_to_open_unit(~std::uint64_t{0}) == 1.0 - 0x1.0p-53);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(uniform_index(rng, 7) < 7);
}

TEST_CASE("key value parsing") {
  const auto kv = parse("# comment\n\nexperiment = mcmw\nmasses = 1, 2.5,3\nn_grid = 1e3,100\nseed=9\n");
  CHECK(kv.get_string("experiment", "") == "mcmw");
  CHECK(kv.get_doubles("masses") == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(kv.get_ints("n_grid") == std::vector<std::int64_t>{1000, 100});
  CHECK(kv.get_uint("seed", 0) == 9);
  CHECK(kv.get_double("missing", 4.0) == 4.0);
  CHECK(kv.canonical() == "experiment=mcmw\nmasses=1, 2.5,3\nn_grid=1e3,100\nseed=9\n");
}

TEST_CASE("key value errors") {
  CHECK_THROWS_AS(parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse("n = 1.5\n").get_int("n", 0), ConfigError);
  CHECK_THROWS_AS(parse("s = -1\n").get_uint("s", 0), ConfigError);
  CHECK_THROWS_AS(parse("b = maybe\n").get_bool("b", false), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("run config validation") {
  CHECK_THROWS_AS(run_config_from(parse("colour = blue\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(parse("experiment = unknown-limit\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(parse("tau = 4.5\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(parse("mode = sideways\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(parse("hub_min_degree = 2\n")), ConfigError);
  const auto rc = run_config_from(parse("experiment = percolate\nmode = coupled\nmu = 1\n"));
  CHECK(rc.mode == "coupled");
  CHECK(rc.experiment.mu == 1.0);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("missing config file exits with 2") {
  std::string err;
  CHECK(cli({"run", "--config", "/nonexistent/run.cfg"}, &err) == kExitConfig);
  CHECK(err.find("cannot open") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}) == kExitConfig);
  CHECK(cli({"run"}) == kExitConfig);
  CHECK(cli({"frobnicate"}) == kExitConfig);
  const auto dir = scratch("bad_key");
  CHECK(cli({"run", "--config", write_config(dir, "unknown_key = 1\n").string()}) == kExitConfig);
  CHECK(cli({"mcmw", "--masses", "1,2", "--time", "-1", "--out-dir", dir.string()}) == kExitConfig);
}

TEST_CASE("component-limit smoke run emits one record") {
  const auto dir = scratch("smoke");
  const auto cfg = write_config(dir, "experiment = component-limit\nn_grid = 1000\nreplicates = 1\nseed = 3\n");
  REQUIRE(cli({"run", "--config", cfg.string(), "--out-dir", (dir / "out").string()}) == kExitOk);
  const auto records = nlohmann::json::parse(slurp(dir / "out" / "results.json"));
  REQUIRE(records.is_array());
  REQUIRE(records.size() == 1);
  CHECK(records[0]["experiment"] == "component-limit");
  CHECK(records[0]["n"] == 1000);
  for (const char* key : {"statistic", "p_value", "tail_mass", "seed"}) CHECK(records[0].contains(key));
  const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest["master_seed"] == 3);
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest["modules"].size() == 9);
}

TEST_CASE("same seed gives identical bytes at 1 and 8 threads") {
  const auto dir = scratch("determinism");
  const auto cfg = write_config(dir, "experiment = percolation-limit\nn_grid = 1000,2000\nreplicates = 24\nmu = 1\n"
                                     "seed = 5\n");
  REQUIRE(cli({"run", "--config", cfg.string(), "--threads", "1", "--out-dir", (dir / "a").string()}) == kExitOk);
  REQUIRE(cli({"run", "--config", cfg.string(), "--threads", "8", "--out-dir", (dir / "b").string()}) == kExitOk);
  REQUIRE(cli({"run", "--config", cfg.string(), "--threads", "1", "--out-dir", (dir / "c").string()}) == kExitOk);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
    CHECK(slurp(entry.path()) == slurp(dir / "c" / name));
    ++compared;
  }
  CHECK(compared == 3);
}

TEST_CASE("subcommands write their artifacts") {
  const auto dir = scratch("subcommands");
  CHECK(cli({"mcmw", "--masses", "1,0.5,0.25", "--time", "1", "--reps", "10", "--out-dir", (dir / "m").string()}) ==
        kExitOk);
  CHECK(fs::exists(dir / "m" / "details.csv"));
  CHECK(cli({"percolate", "--n", "1000", "--mu", "1", "--reps", "3", "--mode", "coupled", "--dump-graph",
             "--out-dir", (dir / "p").string()}) == kExitOk);
  CHECK(fs::exists(dir / "p" / "events.csv"));
  CHECK(fs::exists(dir / "p" / "graph.csv"));
  CHECK(cli({"levy", "--horizon", "5", "--dump-limit-path", "--out-dir", (dir / "l").string()}) == kExitOk);
  CHECK(fs::exists(dir / "l" / "path.csv"));
  const auto levy = nlohmann::json::parse(slurp(dir / "l" / "results.json"));
  CHECK(levy["formula_residual"].get<double>() < 1e-9);
  CHECK(cli({"explore", "--n", "1000", "--dump-trace", "--stride", "10", "--out-dir", (dir / "e").string()}) ==
        kExitOk);
  CHECK(fs::exists(dir / "e" / "trace.csv"));
  CHECK(cli({"validate-degrees", "--out-dir", (dir / "d").string()}) == kExitOk);
  CHECK(fs::exists(dir / "d" / "degrees_100000.csv"));
}

TEST_CASE("experiment black and white laws") {
  ExperimentConfig cfg;
  const auto white = experiment_white_bulk(cfg);
  CHECK(white.pmf()[0] == 0.0);
  CHECK(white.pmf()[3] == doctest::Approx(0.05));
  const auto limits = experiment_limits(cfg);
  CHECK(limits.kappa > 0.0);
  CHECK(limits.gamma == doctest::Approx((1.0 - hub_profile(cfg).fraction) * experiment_black_bulk().mean()));
  CHECK(experiment_hub_count(cfg, make_scaling(1000, 3.5)) < experiment_hub_count(cfg, make_scaling(100000, 3.5)));
}

TEST_CASE("percolation at mu = 0 reproduces the component experiment") {
  ExperimentConfig cfg;
  cfg.n_grid = {1000, 2000};
  cfg.replicates = 30;
  const auto plain = component_limit_experiment(cfg);
  cfg.experiment = "percolation-limit";
  cfg.mu = 0.0;
  const auto perc = percolation_limit_experiment(cfg);
  REQUIRE(plain.finite_largest.size() == perc.finite_largest.size());
  for (std::size_t k = 0; k < plain.finite_largest.size(); ++k) CHECK(plain.finite_largest[k] == perc.finite_largest[k]);
}

TEST_CASE("subcritical tuning shrinks the largest component") {
  ExperimentConfig cfg;
  cfg.n_grid = {1000, 10000};
  cfg.replicates = 60;
  cfg.limit_replicates = 10;
  const auto critical = component_limit_experiment(cfg);
  cfg.lambda = -1.5;
  const auto sub = component_limit_experiment(cfg);
  for (std::size_t k = 0; k < 2; ++k) CHECK(sub.records[k].mean_largest < critical.records[k].mean_largest);
  CHECK(sub.records[1].mean_largest < sub.records[0].mean_largest);
}
