#include "hcm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "hcm/errors.hpp"
#include "hcm/excursions.hpp"
#include "hcm/graph.hpp"
#include "hcm/mcmw.hpp"
#include "hcm/parallel.hpp"
#include "hcm/percolation.hpp"
#include "hcm/stats.hpp"
#include "hcm/thinned_levy.hpp"

namespace hcm {

namespace {

// Stream families under the master seed.
enum Family : std::uint64_t {
  kSequenceFamily = 1,
  kGraphFamily = 2,
  kDynamicFamily = 3,
  kLevyFamily = 4,
  kCoalescentFamily = 5,
};

// Excursions passed to the coalescent in the limit; the rest carry negligible mass.
constexpr std::size_t kLimitBlocks = 256;

std::uint64_t family_seed(std::uint64_t master, Family f, std::uint64_t a) {
  return seed_stream(seed_stream(master, f), a);
}

std::uint64_t family_seed(std::uint64_t master, Family f, std::uint64_t a, std::uint64_t b) {
  return seed_stream(family_seed(master, f, a), b);
}

struct LimitSample {
  std::vector<std::pair<double, double>> gamma;  // ordered (length, g-increment)
};

std::vector<LimitSample> sample_limit(const ExperimentConfig& cfg, const LimitParameters& params) {
  const std::size_t m = cfg.limit_replicates ? cfg.limit_replicates : cfg.replicates;
  return parallel_map(m, cfg.threads, [&](std::size_t r) {
    const auto path = sample_thinned_levy(params, params.theta.size(), cfg.horizon, cfg.horizon,
                                          family_seed(cfg.seed, kLevyFamily, r), HubClock::kKappaXi);
    return LimitSample{gamma_down(path.X, path.Y)};
  });
}

void finish(ExperimentReport& rep, const ExperimentConfig& cfg) {
  double limit_mean = 0;
  for (double v : rep.limit_largest) limit_mean += v;
  limit_mean /= static_cast<double>(std::max<std::size_t>(rep.limit_largest.size(), 1));
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    ExperimentRecord rec;
    rec.experiment = cfg.experiment;
    rec.n = cfg.n_grid[i];
    rec.seed = cfg.seed;
    const auto ks = ks_two_sample(rep.finite_largest[i], rep.limit_largest);
    rec.statistic = ks.statistic;
    rec.p_value = ks.p_value;
    rec.tail_mass = mean_se(rep.finite_tail[i]).mean;
    rec.mean_largest = mean_se(rep.finite_largest[i]).mean;
    rec.limit_mean_largest = limit_mean;
    rep.records.push_back(rec);
  }
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.records.size(); ++j) {
      ++rep.comparisons;
      const double later = rep.records[j].statistic;
      if (later <= rep.records[i].statistic && later < 1.0) ++rep.non_increasing;
    }
  }
  rep.trend_pass = rep.non_increasing >= rep.comparisons - rep.comparisons / 3;
  rep.tail_decreasing = true;
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    if (rep.records[i].tail_mass > rep.records[i - 1].tail_mass) rep.tail_decreasing = false;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("n_grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be increasing");
  }
  if (!(tau > 3.0 && tau < 4.0)) throw ConfigError("tau must lie in (3,4)");
  if (!(L > 0.0)) throw ConfigError("L must be positive");
  if (!(mu >= 0.0)) throw ConfigError("mu must be >= 0");
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (!(theta_scale > 0.0) || !(beta_scale >= 0.0) || !(rho > 0.0)) throw ConfigError("bad hub parameters");
  if (hub_count < 1) throw ConfigError("hub_count must be >= 1");
  if (hub_min_degree < 4) throw ConfigError("hub_min_degree must be >= 4 (bulk degrees reach 3)");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

HubProfile hub_profile(const ExperimentConfig& cfg) {
  const double e = cfg.tau - 1.0;
  const double k0 = cfg.hub_min_degree;
  auto level = [&](double k) { return std::pow(cfg.theta_scale / (k - 0.5), e); };  // P(d >= k) for hubs
  HubProfile p;
  p.fraction = level(k0);
  // Summation by parts: sum_k f(k) P(d = k) = f(k0) P(d >= k0) + sum_{k > k0} (f(k) - f(k-1)) P(d >= k).
  p.degree_sum = k0 * p.fraction;
  p.factorial_sum = k0 * (k0 - 1.0) * p.fraction;
  constexpr int kTerms = 100000;
  for (int k = cfg.hub_min_degree + 1; k <= kTerms; ++k) {
    p.degree_sum += level(k);
    p.factorial_sum += 2.0 * (k - 1.0) * level(k);
  }
  // Integral tails beyond kTerms.
  const double K = kTerms + 0.5, c = std::pow(cfg.theta_scale, e);
  p.degree_sum += c * std::pow(K - 0.5, 1.0 - e) / (e - 1.0);
  p.factorial_sum += 2.0 * c * std::pow(K - 0.5, 2.0 - e) / (e - 2.0);
  return p;
}

DiscreteLaw experiment_white_bulk(const ExperimentConfig& cfg) {
  const auto hubs = hub_profile(cfg);
  // Criticality: (1 - h)(E d(d-1) - E d) = degree_sum - factorial_sum, and for
  // a law on {1,2,3}, E d(d-1) - E d = 3 p3 - p1.
  const double p3 = 0.05;
  const double p1 = 3.0 * p3 - (hubs.degree_sum - hubs.factorial_sum) / (1.0 - hubs.fraction);
  if (!(p1 > 0.0) || p1 + p3 >= 1.0) throw ConfigError("hub parameters leave no feasible critical bulk law");
  return DiscreteLaw::from_pmf({0.0, p1, 1.0 - p1 - p3, p3});
}

DiscreteLaw experiment_black_bulk() { return DiscreteLaw::from_pmf({0.8, 0.2}); }

LimitParameters experiment_limits(const ExperimentConfig& cfg) {
  auto p = power_law_limits(cfg.tau, cfg.hub_count, cfg.theta_scale, cfg.beta_scale, cfg.rho);
  const auto hubs = hub_profile(cfg);
  const double w = experiment_white_bulk(cfg).mean();
  const double b = experiment_black_bulk().mean();
  const double bulk = 1.0 - hubs.fraction;
  p.kappa = bulk * w + hubs.degree_sum;
  // Hubs beyond the first few carry no black half-edges in the limit.
  p.alpha = bulk * w * b / p.kappa;
  p.gamma = bulk * b;
  p.lambda = cfg.lambda;
  p.validate();
  return p;
}

std::size_t experiment_hub_count(const ExperimentConfig& cfg, const ScalingConstants& scaling) {
  const auto limits = power_law_limits(cfg.tau, cfg.hub_count, cfg.theta_scale, cfg.beta_scale, cfg.rho);
  std::size_t h = 0;
  while (h < limits.theta.size() && std::round(limits.theta[h] * scaling.a) >= cfg.hub_min_degree) ++h;
  return std::min<std::size_t>(h, static_cast<std::size_t>(scaling.n));
}

DegreeSequence experiment_sequence(const ExperimentConfig& cfg, std::int64_t n) {
  const auto scaling = make_scaling(n, cfg.tau, cfg.L);
  auto seq = build_degree_sequence(scaling, experiment_limits(cfg), experiment_hub_count(cfg, scaling),
                                   experiment_white_bulk(cfg), experiment_black_bulk(),
                                   family_seed(cfg.seed, kSequenceFamily, static_cast<std::uint64_t>(n)));
  return tune_to_criticality(std::move(seq), cfg.lambda);
}

ExperimentReport component_limit_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.experiment = cfg.experiment;
  const auto limits = sample_limit(cfg, experiment_limits(cfg));
  std::vector<double> limit_y;
  for (const auto& s : limits) {
    rep.limit_largest.push_back(s.gamma.empty() ? 0.0 : s.gamma.front().first);
    limit_y.push_back(s.gamma.empty() ? 0.0 : s.gamma.front().second);
    for (std::size_t j = cfg.top_j; j < s.gamma.size(); ++j) {
      const auto& [x, y] = s.gamma[j];
      rep.limit_tail_mass += x * x + y * y;
    }
  }
  rep.limit_tail_mass /= static_cast<double>(std::max<std::size_t>(limits.size(), 1));
  for (const std::int64_t n : cfg.n_grid) {
    const auto seq = experiment_sequence(cfg, n);
    const double b = seq.scaling.b;
    struct Row {
      double x, y, tail;
    };
    const auto rows = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t r) {
      const auto g = sample_white_matching(seq, family_seed(cfg.seed, kGraphFamily, static_cast<std::uint64_t>(n), r));
      const auto comps = components(g);
      Row row{0, 0, 0};
      if (!comps.empty()) {
        row.x = static_cast<double>(comps.front().size) / b;
        row.y = static_cast<double>(comps.front().black_half_edges) / b;
      }
      for (std::size_t j = cfg.top_j; j < comps.size(); ++j) {
        const double x = static_cast<double>(comps[j].size) / b, y = static_cast<double>(comps[j].black_half_edges) / b;
        row.tail += x * x + y * y;
      }
      return row;
    });
    std::vector<double> xs, ys, tails;
    for (const auto& r : rows) {
      xs.push_back(r.x);
      ys.push_back(r.y);
      tails.push_back(r.tail);
    }
    rep.finite_largest.push_back(std::move(xs));
    rep.finite_largest_y.push_back(std::move(ys));
    rep.finite_tail.push_back(std::move(tails));
  }
  finish(rep, cfg);
  // Black coordinate of the largest component against the largest excursion's increment.
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    rep.records[i].statistic_y = ks_two_sample(rep.finite_largest_y[i], limit_y).statistic;
  }
  return rep;
}

ExperimentReport percolation_limit_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  rep.experiment = cfg.experiment;
  const auto limits = sample_limit(cfg, experiment_limits(cfg));
  const auto merged = parallel_map(limits.size(), cfg.threads, [&](std::size_t r) {
    MassWeightVector xy;
    const auto& gamma = limits[r].gamma;
    for (std::size_t j = 0; j < std::min(gamma.size(), kLimitBlocks); ++j) {
      const auto& [len, inc] = gamma[j];
      xy.mass.push_back(len);
      xy.weight.push_back(inc);
    }
    const auto res = mcmw_graphical(xy, cfg.mu, family_seed(cfg.seed, kCoalescentFamily, r));
    double tail = 0;
    for (std::size_t j = cfg.top_j; j < res.masses.size(); ++j) tail += res.masses[j] * res.masses[j];
    return std::pair<double, double>{res.masses.empty() ? 0.0 : res.masses.front(), tail};
  });
  for (const auto& [largest, tail] : merged) {
    rep.limit_largest.push_back(largest);
    rep.limit_tail_mass += tail;
  }
  rep.limit_tail_mass /= static_cast<double>(std::max<std::size_t>(merged.size(), 1));
  for (const std::int64_t n : cfg.n_grid) {
    const auto seq = experiment_sequence(cfg, n);
    const double b = seq.scaling.b;
    const double gamma_n = cfg.gamma > 0.0 ? cfg.gamma
                                           : static_cast<double>(seq.black_total()) / static_cast<double>(n);
    const double s = cfg.mu * gamma_n / seq.scaling.c;
    struct Row {
      double x, tail;
    };
    const auto rows = parallel_map(cfg.replicates, cfg.threads, [&](std::size_t r) {
      const auto un = static_cast<std::uint64_t>(n);
      const auto g = sample_white_matching(seq, family_seed(cfg.seed, kGraphFamily, un, r));
      const auto st = run_dynamic(g, s, family_seed(cfg.seed, kDynamicFamily, un, r));
      const auto sizes = percolation_sizes(g, st);
      Row row{0, 0};
      if (!sizes.empty()) row.x = static_cast<double>(sizes.front()) / b;
      for (std::size_t j = cfg.top_j; j < sizes.size(); ++j) {
        const double x = static_cast<double>(sizes[j]) / b;
        row.tail += x * x;
      }
      return row;
    });
    std::vector<double> xs, tails;
    for (const auto& r : rows) {
      xs.push_back(r.x);
      tails.push_back(r.tail);
    }
    rep.finite_largest.push_back(std::move(xs));
    rep.finite_largest_y.emplace_back();
    rep.finite_tail.push_back(std::move(tails));
  }
  finish(rep, cfg);
  return rep;
}

std::string records_json(const std::vector<ExperimentRecord>& records) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["n"] = r.n;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["tail_mass"] = r.tail_mass;
    j["seed"] = r.seed;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

void write_details_csv(std::ostream& out, const ExperimentReport& report) {
  const auto old = out.precision(17);
  out << "experiment,n,replicate,largest,largest_y,tail_mass\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& xs = report.finite_largest[i];
    const auto& ys = report.finite_largest_y[i];
    for (std::size_t r = 0; r < xs.size(); ++r) {
      out << report.experiment << ',' << report.records[i].n << ',' << r << ',' << xs[r] << ',';
      if (r < ys.size()) out << ys[r];
      out << ',' << report.finite_tail[i][r] << '\n';
    }
  }
  for (std::size_t r = 0; r < report.limit_largest.size(); ++r) {
    out << report.experiment << ",0," << r << ',' << report.limit_largest[r] << ",,\n";
  }
  out.precision(old);
}

}  // namespace hcm
