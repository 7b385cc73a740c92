#include "hcm/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcm/config.hpp"
#include "hcm/errors.hpp"
#include "hcm/excursions.hpp"
#include "hcm/experiments.hpp"
#include "hcm/exploration.hpp"
#include "hcm/graph.hpp"
#include "hcm/mcmw.hpp"
#include "hcm/parallel.hpp"
#include "hcm/percolation.hpp"
#include "hcm/stats.hpp"
#include "hcm/thinned_levy.hpp"

#ifndef HCM_VERSION
#define HCM_VERSION "0.0.0"
#endif

namespace hcm {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    f.precision(17);
    files_.push_back(name);
    return f;
  }
  void write(const std::string& name, const std::string& text) { open(name) << text; }
  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void run_limit_experiment(const RunConfig& rc, Outputs& out) {
  const auto& cfg = rc.experiment;
  const auto rep = cfg.experiment == "component-limit" ? component_limit_experiment(cfg)
                                                       : percolation_limit_experiment(cfg);
  out.write("results.json", records_json(rep.records));
  {
    auto f = out.open("details.csv");
    write_details_csv(f, rep);
  }
  Json summary;
  summary["experiment"] = rep.experiment;
  summary["comparisons"] = rep.comparisons;
  summary["non_increasing"] = rep.non_increasing;
  summary["trend_pass"] = rep.trend_pass;
  summary["tail_decreasing"] = rep.tail_decreasing;
  summary["limit_tail_mass"] = rep.limit_tail_mass;
  auto per_n = Json::array();
  for (const auto& r : rep.records) {
    Json j;
    j["n"] = r.n;
    j["statistic"] = r.statistic;
    if (r.statistic_y >= 0) j["statistic_y"] = r.statistic_y;
    j["mean_largest"] = r.mean_largest;
    j["limit_mean_largest"] = r.limit_mean_largest;
    j["tail_mass"] = r.tail_mass;
    per_n.push_back(j);
  }
  summary["per_n"] = per_n;
  out.write("summary.json", dump(summary));
}

void run_mcmw(const RunConfig& rc, Outputs& out) {
  const auto& cfg = rc.experiment;
  MassWeightVector xy{rc.masses, rc.weights.empty() ? rc.masses : rc.weights};
  if (xy.mass.empty()) throw ConfigError("mcmw needs masses");
  if (xy.mass.size() != xy.weight.size()) throw ConfigError("masses and weights differ in length");
  xy.validate();
  if (rc.time < 0.0) throw ConfigError("mcmw needs time >= 0");
  const auto rows = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t r) {
    const auto seed = seed_stream(cfg.seed, r);
    return rc.coupling == "clocks" ? mcmw_graphical(xy, rc.time, ClockTable(seed)).masses
                                   : mcmw_graphical(xy, rc.time, seed).masses;
  });
  auto f = out.open("details.csv");
  f << "replicate,blocks,largest,susceptibility,masses\n";
  double largest = 0, sus = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& m = rows[r];
    f << r << ',' << m.size() << ',' << m.front() << ',' << susceptibility(m) << ',';
    for (std::size_t i = 0; i < m.size(); ++i) f << (i ? ";" : "") << m[i];
    f << '\n';
    largest += m.front();
    sus += susceptibility(m);
  }
  const double R = static_cast<double>(rows.size());
  Json j;
  j["experiment"] = "mcmw";
  j["blocks"] = xy.size();
  j["time"] = rc.time;
  j["coupling"] = rc.coupling;
  j["replicates"] = rows.size();
  j["mean_largest"] = largest / R;
  j["mean_susceptibility"] = sus / R;
  j["seed"] = cfg.seed;
  out.write("results.json", dump(j));
}

void run_percolate(const RunConfig& rc, Outputs& out) {
  const auto& cfg = rc.experiment;
  const std::int64_t n = cfg.n_grid.front();
  const auto seq = experiment_sequence(cfg, n);
  const double gamma_n = cfg.gamma > 0.0 ? cfg.gamma : static_cast<double>(seq.black_total()) / static_cast<double>(n);
  const double s = rc.time >= 0.0 ? rc.time : cfg.mu * gamma_n / seq.scaling.c;
  struct Row {
    std::size_t events;
    std::int64_t largest;
    std::size_t components;
    std::size_t modified_events;
    std::int64_t modified_largest;
  };
  const auto rows = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t r) {
    const auto g = sample_white_matching(seq, seed_stream(cfg.seed, 2 * r));
    const auto seed = seed_stream(cfg.seed, 2 * r + 1);
    Row row{0, 0, 0, 0, 0};
    PercolationState st;
    if (rc.mode == "coupled") {
      const auto pair = run_coupled(g, s, seed);
      pair.dynamic_state.check();
      pair.modified_state.check();
      const auto mod = percolation_sizes(g, pair.modified_state);
      row.modified_events = pair.modified_state.events.size();
      row.modified_largest = mod.front();
      st = pair.dynamic_state;
    } else {
      st = rc.mode == "dynamic" ? run_dynamic(g, s, seed) : run_modified(g, s, seed);
      st.check();
    }
    const auto sizes = percolation_sizes(g, st);
    row.events = st.events.size();
    row.largest = sizes.front();
    row.components = sizes.size();
    return row;
  });
  {
    auto f = out.open("details.csv");
    f << "replicate,events,largest,components";
    if (rc.mode == "coupled") f << ",modified_events,modified_largest";
    f << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
      f << r << ',' << rows[r].events << ',' << rows[r].largest << ',' << rows[r].components;
      if (rc.mode == "coupled") f << ',' << rows[r].modified_events << ',' << rows[r].modified_largest;
      f << '\n';
    }
  }
  // Replicate 0 again, for the event log and optional graph dump.
  const auto g0 = sample_white_matching(seq, seed_stream(cfg.seed, 0));
  const auto seed0 = seed_stream(cfg.seed, 1);
  const auto st0 = rc.mode == "dynamic"    ? run_dynamic(g0, s, seed0)
                   : rc.mode == "modified" ? run_modified(g0, s, seed0)
                                           : run_coupled(g0, s, seed0).dynamic_state;
  {
    auto f = out.open("events.csv");
    write_event_csv(f, st0);
  }
  if (rc.dump_graph) {
    auto f = out.open("graph.csv");
    write_edge_csv(f, g0);
  }
  double events = 0, largest = 0;
  for (const auto& r : rows) {
    events += static_cast<double>(r.events);
    largest += static_cast<double>(r.largest);
  }
  const double R = static_cast<double>(rows.size());
  Json j;
  j["experiment"] = "percolate";
  j["mode"] = rc.mode;
  j["n"] = n;
  j["s"] = s;
  j["q0"] = seq.black_total() / 2;
  j["replicates"] = rows.size();
  j["mean_events"] = events / R;
  j["mean_largest"] = largest / R;
  j["seed"] = cfg.seed;
  out.write("results.json", dump(j));
}

void run_levy(const RunConfig& rc, Outputs& out) {
  const auto& cfg = rc.experiment;
  const auto params = experiment_limits(cfg);
  const auto path =
      sample_thinned_levy(params, params.theta.size(), cfg.horizon, rc.grid_step, seed_stream(cfg.seed, 0), HubClock::kKappaXi);
  const auto dec = decompose(path.X, &path.Y);
  ExcursionPointProcess pp;
  for (const auto& e : dec.intervals) pp.atoms.push_back({e.r, e.length, e.g_increment});
  {
    auto f = out.open("excursions.csv");
    write_point_process_csv(f, pp);
  }
  if (rc.dump_limit_path) {
    const auto surplus = sample_surplus_process(path.X, seed_stream(cfg.seed, 1));
    auto f = out.open("path.csv");
    write_path_csv(f, make_grid(cfg.horizon, rc.grid_step), path.X, path.Y, surplus);
  }
  double largest = 0;
  for (const auto& a : pp.atoms) largest = std::max(largest, a.x);
  Json j;
  j["experiment"] = "levy";
  j["horizon"] = cfg.horizon;
  j["hubs"] = params.theta.size();
  j["jumps"] = path.X.jumps().size();
  j["excursions"] = pp.atoms.size();
  j["largest_excursion"] = largest;
  j["formula_residual"] = max_formula_residual(path);
  j["seed"] = cfg.seed;
  out.write("results.json", dump(j));
}

void run_explore(const RunConfig& rc, Outputs& out) {
  const auto& cfg = rc.experiment;
  const std::int64_t n = cfg.n_grid.front();
  const auto seq = experiment_sequence(cfg, n);
  const auto g = sample_white_matching(seq, seed_stream(cfg.seed, 0));
  const auto tr = explore(g, seed_stream(cfg.seed, 1), PairingMode::kReplay);
  check_trace(tr, g);
  std::vector<std::int64_t> from_walk, from_graph;
  for (const auto& c : tr.components) from_walk.push_back(c.size);
  for (const auto& c : components(g)) from_graph.push_back(c.size);
  std::sort(from_walk.rbegin(), from_walk.rend());
  ensure(from_walk == from_graph, "exploration and union-find component sizes differ");
  {
    auto f = out.open("components.csv");
    f << "ordinal,tau,size,edges,black_half_edges,surplus\n";
    for (const auto& c : tr.components) {
      f << c.ordinal << ',' << tr.tau[c.ordinal] << ',' << c.size << ',' << c.edge_count << ','
        << c.black_half_edges << ',' << c.surplus << '\n';
    }
  }
  if (rc.dump_trace) {
    auto f = out.open("trace.csv");
    write_trace_csv(f, tr, rc.trace_stride);
  }
  if (rc.dump_graph) {
    auto f = out.open("graph.csv");
    write_edge_csv(f, g);
  }
  Json j;
  j["experiment"] = "explore";
  j["n"] = n;
  j["steps"] = tr.steps();
  j["components"] = tr.components.size();
  j["largest"] = from_graph.empty() ? 0 : from_graph.front();
  j["criticality"] = criticality(seq);
  j["seed"] = cfg.seed;
  out.write("results.json", dump(j));
}

void run_validate_degrees(const RunConfig& rc, Outputs& out) {
  const auto& cfg = rc.experiment;
  auto arr = Json::array();
  for (const std::int64_t n : cfg.n_grid) {
    const auto seq = experiment_sequence(cfg, n);
    const auto rep = validate_assumptions(seq, seq.hub_count, 0.25);
    Json j;
    j["n"] = n;
    j["tail_start"] = rep.tail_start;
    j["white_mean"] = rep.white_mean;
    j["white_second"] = rep.white_second;
    j["white_cubic_tail"] = rep.white_cubic_tail;
    j["black_square_tail"] = rep.black_square_tail;
    j["mixed_mean"] = rep.mixed_mean;
    j["black_mean"] = rep.black_mean;
    j["criticality"] = criticality(seq);
    j["lambda_n"] = rep.lambda_n;
    j["flags"] = rep.flags;
    arr.push_back(j);
    auto f = out.open("degrees_" + std::to_string(n) + ".csv");
    write_degree_csv(f, seq);
  }
  out.write("results.json", dump(arr));
}

void execute(const KeyValueConfig& kv, const std::string& out_dir) {
  const RunConfig rc = run_config_from(kv);
  Outputs out(out_dir.empty() ? rc.experiment.output : out_dir);
  const std::string started = utc_now();
  const auto& name = rc.experiment.experiment;
  if (name == "component-limit" || name == "percolation-limit") {
    run_limit_experiment(rc, out);
  } else if (name == "mcmw") {
    run_mcmw(rc, out);
  } else if (name == "percolate") {
    run_percolate(rc, out);
  } else if (name == "levy") {
    run_levy(rc, out);
  } else if (name == "explore") {
    run_explore(rc, out);
  } else {
    run_validate_degrees(rc, out);
  }
  Json m;
  m["config_hash"] = hex64(fnv1a64(kv.canonical()));
  m["master_seed"] = rc.experiment.seed;
  m["experiment"] = name;
  m["version"] = HCM_VERSION;
  Json modules;
  for (const char* mod : {"degree_model", "graph_sampler", "exploration", "thinned_levy", "excursions", "mcmw",
                          "percolation_dynamics", "stats_harness", "cli"}) {
    modules[mod] = HCM_VERSION;
  }
  m["modules"] = modules;
  m["threads"] = rc.experiment.threads;
  m["started_at"] = started;
  m["finished_at"] = utc_now();
  m["outputs"] = out.files();
  std::ofstream(out.dir() / "manifest.json", std::ios::binary) << dump(m);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for critical two-colour configuration models and their limits", "hcm_sim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HCM_VERSION));

  std::string config_path, out_dir;
  struct Binding {
    CLI::Option* option;
    std::string key;
    std::string* value;
  };
  std::vector<Binding> bindings;
  std::vector<std::unique_ptr<std::string>> storage;
  auto bind = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    storage.push_back(std::make_unique<std::string>());
    auto* opt = sub->add_option(flag, *storage.back(), help);
    bindings.push_back({opt, key, storage.back().get()});
    return opt;
  };
  auto bind_flag = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    auto* opt = sub->add_flag(flag, help);
    storage.push_back(std::make_unique<std::string>("true"));
    bindings.push_back({opt, key, storage.back().get()});
  };
  auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "key=value config file");
    if (config_required) c->required();
    bind(sub, "--seed", "seed", "master seed");
    bind(sub, "--threads", "threads", "worker threads");
    sub->add_option("--out-dir", out_dir, "output directory (overrides the output key)");
  };

  auto* run = app.add_subcommand("run", "run the experiment named in a config file");
  common(run, true);

  auto* mcmw = app.add_subcommand("mcmw", "multiplicative coalescent with mass and weight");
  common(mcmw, false);
  bind(mcmw, "--masses", "masses", "comma separated masses");
  bind(mcmw, "--weights", "weights", "comma separated weights (default: the masses)");
  bind(mcmw, "--time", "time", "coalescent time");
  bind(mcmw, "--reps", "replicates", "replicates");
  bind(mcmw, "--coupling", "coupling", "bernoulli | clocks");

  auto* perc = app.add_subcommand("percolate", "black-edge percolation dynamics");
  common(perc, false);
  bind(perc, "--mode", "mode", "dynamic | modified | coupled");
  bind(perc, "--time", "time", "percolation time s");
  bind(perc, "--mu", "mu", "sets s = mu gamma_n / c_n when --time is absent");
  bind(perc, "--reps", "replicates", "replicates");
  bind(perc, "--n", "n_grid", "number of vertices");
  bind_flag(perc, "--dump-graph", "dump_graph", "write the white graph of replicate 0");

  auto* levy = app.add_subcommand("levy", "thinned Levy process and its excursions");
  common(levy, false);
  bind(levy, "--horizon", "horizon", "path horizon");
  bind(levy, "--grid-step", "grid_step", "export grid step");
  bind_flag(levy, "--dump-limit-path", "dump_limit_path", "write X, Y and the surplus process on the grid");

  auto* expl = app.add_subcommand("explore", "breadth-first exploration of one sampled graph");
  common(expl, false);
  bind(expl, "--n", "n_grid", "number of vertices");
  bind_flag(expl, "--dump-graph", "dump_graph", "write the edge list");
  bind_flag(expl, "--dump-trace", "dump_trace", "write the exploration walks");
  bind(expl, "--stride", "trace_stride", "trace export stride");

  auto* deg = app.add_subcommand("validate-degrees", "build degree sequences and report their statistics");
  common(deg, false);
  bind(deg, "--n", "n_grid", "comma separated vertex counts");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << HCM_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    KeyValueConfig kv = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub != "run") kv.set("experiment", sub);
    for (const auto& b : bindings) {
      if (b.option->count() > 0) kv.set(b.key, *b.value);
    }
    execute(kv, out_dir);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace hcm
