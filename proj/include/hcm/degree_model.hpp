#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcm/rng.hpp"

namespace hcm {

struct ScalingConstants {
  std::int64_t n = 1;
  double tau = 3.5;
  double slowly_varying = 1.0;  // L(n)
  double a = 1.0;               // n^{1/(tau-1)} L
  double b = 1.0;               // n^{(tau-2)/(tau-1)} / L
  double c = 1.0;               // n^{(tau-3)/(tau-1)} / L^2
};

ScalingConstants make_scaling(std::int64_t n, double tau, double L = 1.0);

struct LimitParameters {
  std::vector<double> theta;  // non-increasing, positive
  std::vector<double> beta;   // non-negative, same length as theta
  double alpha = 0.0;
  double lambda = 0.0;
  double kappa = 1.0;
  double gamma = 1.0;

  void validate() const;
  double theta_sq_sum() const;
  double theta_cube_sum() const;
  double theta_beta() const;
};

// theta_i = theta_scale * i^{-1/(tau-1)}, beta_i = beta_scale * i^{-rho/(tau-1)}
// for i = 1..count. Scalar fields are left at their defaults.
LimitParameters power_law_limits(double tau, std::size_t count, double theta_scale,
                                 double beta_scale, double rho);

// Law on {0, 1, ..., pmf.size()-1}.
class DiscreteLaw {
 public:
  DiscreteLaw() = default;
  static DiscreteLaw from_pmf(std::vector<double> pmf);
  static DiscreteLaw point_mass(int k);
  // P(k) proportional to k^{-exponent} on 1..cap.
  static DiscreteLaw zeta(double exponent, int cap);

  const std::vector<double>& pmf() const { return pmf_; }
  double moment(int order) const;
  double mean() const { return moment(1); }
  int sample(Rng& rng) const;

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

// Critical white law on {1,2,3}: pmf (0.3, 0.6, 0.1).
DiscreteLaw default_white_bulk();
// Black bulk uniform on {0,1,2,3}.
DiscreteLaw default_black_bulk();

struct DegreeSequence {
  std::vector<int> white;
  std::vector<int> black;
  ScalingConstants scaling;
  LimitParameters limits;
  std::size_t hub_count = 0;  // hubs carry the largest arrangement keys

  std::size_t size() const { return white.size(); }
  std::int64_t white_total() const;
  std::int64_t black_total() const;
};

// Throws InvariantViolation on parity, arrangement or positivity failures.
void check_invariants(const DegreeSequence& seq);

DegreeSequence build_degree_sequence(const ScalingConstants& scaling, const LimitParameters& limits,
                                     std::size_t hub_count, const DiscreteLaw& white_bulk,
                                     const DiscreteLaw& black_bulk, std::uint64_t seed);

// Sorts vertices by d_w/a_n + d_b/b_n, non-increasing, stable.
void arrange(DegreeSequence& seq);

double criticality(const std::vector<int>& white);
inline double criticality(const DegreeSequence& seq) { return criticality(seq.white); }

// Swaps bulk white degrees 3 <-> 1 until nu_n is as close as one swap allows to
// 1 + lambda_target / c_n.
DegreeSequence tune_to_criticality(DegreeSequence seq, double lambda_target);

struct AssumptionReport {
  std::size_t tail_start = 0;
  double white_mean = 0;        // n^-1 sum d_w
  double white_second = 0;      // n^-1 sum d_w^2
  double white_cubic_tail = 0;  // a^-3 sum_{i>K} d_w^3
  double black_square_tail = 0; // b^-2 sum_{i>K} d_b^2
  double mixed_mean = 0;        // n^-1 sum d_w d_b
  double black_mean = 0;        // n^-1 sum d_b
  double lambda_n = 0;          // c_n (nu_n - 1)
  std::vector<std::string> flags;
};

AssumptionReport validate_assumptions(const DegreeSequence& seq, std::size_t tail_start,
                                      double tolerance);

void write_degree_csv(std::ostream& out, const DegreeSequence& seq);
DegreeSequence read_degree_csv(std::istream& in, double tau, double L = 1.0);

}  // namespace hcm
