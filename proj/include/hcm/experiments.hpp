#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcm/degree_model.hpp"

namespace hcm {

struct ExperimentConfig {
  std::string experiment = "component-limit";
  std::vector<std::int64_t> n_grid{1000, 10000, 100000};
  double tau = 3.5;
  double L = 1.0;
  double lambda = 0.0;
  double mu = 0.0;
  double gamma = 0.0;  // 0: use the black half-edge density of each sequence
  std::size_t replicates = 400;
  std::size_t limit_replicates = 0;  // 0: same as replicates
  std::uint64_t seed = 1;
  std::size_t hub_count = 10000;  // hubs in the limit process
  int hub_min_degree = 4;         // finite-n hubs: i <= hub_count with round(theta_i a_n) >= this
  double theta_scale = 0.6;
  double beta_scale = 0.3;
  double rho = 2.0;
  std::size_t top_j = 20;
  double horizon = 50.0;  // limit path horizon
  unsigned threads = 1;
  std::string output = "out";

  // Throws ConfigError.
  void validate() const;
};

// Vertices i with round(theta_i a_n) >= hub_min_degree form a fraction
// h = (theta_scale / (hub_min_degree - 1/2))^{tau-1} of the graph. The white
// bulk on {1,2,3} has P(3) = 0.05 and P(1) chosen so that bulk plus hubs are
// critical in the limit; kappa, alpha and gamma follow from the same sums.
struct HubProfile {
  double fraction = 0;       // h
  double degree_sum = 0;     // lim n^-1 sum_hubs d
  double factorial_sum = 0;  // lim n^-1 sum_hubs d(d-1)
};
HubProfile hub_profile(const ExperimentConfig& cfg);
DiscreteLaw experiment_white_bulk(const ExperimentConfig& cfg);
// Sparse black bulk (P(1) = 0.2) keeps mu * sum Y^2 of the limit below 1 at mu = 1.
DiscreteLaw experiment_black_bulk();
LimitParameters experiment_limits(const ExperimentConfig& cfg);
std::size_t experiment_hub_count(const ExperimentConfig& cfg, const ScalingConstants& scaling);
// Critically tuned sequence for one n, seeded from the master seed.
DegreeSequence experiment_sequence(const ExperimentConfig& cfg, std::int64_t n);

struct ExperimentRecord {
  std::string experiment;
  std::int64_t n = 0;
  double statistic = 0;  // KS distance, largest rescaled size vs limit
  double p_value = 0;
  double tail_mass = 0;  // mean sum_{j > top_j} of squared rescaled entries
  std::uint64_t seed = 0;
  double statistic_y = -1;   // component-limit only: black coordinate of the largest component
  double mean_largest = 0;
  double limit_mean_largest = 0;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ExperimentRecord> records;  // one per n, in grid order
  std::vector<std::vector<double>> finite_largest;
  std::vector<std::vector<double>> finite_largest_y;
  std::vector<std::vector<double>> finite_tail;
  std::vector<double> limit_largest;
  double limit_tail_mass = 0;  // same tail sum over the limit sample
  std::size_t comparisons = 0;
  std::size_t non_increasing = 0;
  // A comparison counts when the later statistic is <= the earlier one and
  // below 1 (saturated statistics carry no trend information).
  bool trend_pass = false;  // at least 2/3 of the pairwise comparisons count
  bool tail_decreasing = false;
};

// Largest rescaled (size, black half-edges) per replicate against the largest
// excursion of the thinned Levy pair.
ExperimentReport component_limit_experiment(const ExperimentConfig& cfg);
// Black edges added dynamically up to s = mu gamma_n / c_n against the
// multiplicative coalescent run for time mu on the excursion lengths.
ExperimentReport percolation_limit_experiment(const ExperimentConfig& cfg);

// JSON array of {experiment, n, statistic, p_value, tail_mass, seed}.
std::string records_json(const std::vector<ExperimentRecord>& records);
// Long format: experiment, n, replicate, largest, largest_y, tail_mass; n = 0 rows are the limit sample.
void write_details_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace hcm
