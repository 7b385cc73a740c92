#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hcm/rng.hpp"

namespace hcm {

struct MassWeightVector {
  std::vector<double> mass;
  std::vector<double> weight;

  std::size_t size() const { return mass.size(); }
  void validate() const;  // equal lengths, finite non-negative entries
};

// Rate-1 exponential clock per unordered pair, generated on demand from
// (seed, i, j) so every input built on the same seed sees the same clocks.
class ClockTable {
 public:
  explicit ClockTable(std::uint64_t seed) : seed_(seed) {}
  double operator()(std::size_t i, std::size_t j) const;

 private:
  std::uint64_t seed_;
};

class BlockSystem {
 public:
  explicit BlockSystem(const MassWeightVector& init);

  std::size_t find(std::size_t i) const;
  // Returns false if i and j already share a block.
  bool merge(std::size_t i, std::size_t j);

  std::size_t block_count() const { return blocks_; }
  double total_mass() const;
  double total_weight() const;
  // Block masses sorted non-increasing.
  std::vector<double> ordered_masses() const;
  // (mass, weight) per block, sorted by mass non-increasing (stable by root).
  std::vector<std::pair<double, double>> ordered_blocks() const;
  double susceptibility() const;
  const std::vector<std::pair<std::size_t, std::size_t>>& history() const { return history_; }

 private:
  mutable std::vector<std::size_t> parent_;
  std::vector<double> mass_;
  std::vector<double> weight_;
  std::size_t blocks_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> history_;
};

struct McmwResult {
  std::vector<double> masses;  // ordered
  BlockSystem blocks;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j
};

// Independent Bernoulli(1 - exp(-y_i y_j t)) edges, one uniform per pair in
// lexicographic pair order.
McmwResult mcmw_graphical(const MassWeightVector& xy, double t, Rng& rng);
McmwResult mcmw_graphical(const MassWeightVector& xy, double t, std::uint64_t seed);
// Edge {i,j} iff xi_ij <= y_i y_j t.
McmwResult mcmw_graphical(const MassWeightVector& xy, double t, const ClockTable& clocks);

std::pair<McmwResult, McmwResult> mcmw_coupled_pair(const MassWeightVector& a, const MassWeightVector& b,
                                                    double t, std::uint64_t shared_seed);

std::vector<double> mc1(const std::vector<double>& x, double t, Rng& rng);

double susceptibility(const std::vector<double>& masses);

struct ScaledInputs {
  MassWeightVector inputs;  // (x, b sqrt(c) y)
  double mass_scale = 1.0;  // a
};

// MC2(a x, b y, c t) has the law of a * MC2(x, b sqrt(c) y, t).
ScaledInputs scaling_transform(const MassWeightVector& xy, double a, double b, double c);

struct FellerReport {
  std::size_t replicates = 0;
  double mean_sq_difference = 0;       // E ||MC2(x',y',t) - MC2(x,y,t)||^2
  std::size_t inclusion_violations = 0;
  std::size_t norm_violations = 0;     // ||a'-a||^2 <= ||a'||^2 - ||a||^2
  std::size_t chain_violations = 0;    // S(x,y) <= S(x+y,y) - c <= S(x+y,x+y) - c
  double tail_threshold = 0;           // s = 2 ||x+y||^2
  double tail_empirical = 0;           // P(S(x+y,x+y,t) > s)
  double tail_stderr = 0;
  double tail_bound = 0;               // t s ||x+y||^2 / (s - ||x+y||^2)
};

// Perturbs x and y by non-negative vectors of norm at most epsilon and runs
// both systems, plus the joint systems of the chain inequality, on shared clocks.
FellerReport feller_probe(const MassWeightVector& xy, double epsilon, double t, std::size_t replicates,
                          std::uint64_t seed);

struct BipartiteReport {
  std::size_t replicates = 0;
  double alpha1 = 0;
  double alpha2 = 0;
  double lhs = 0;  // eps * P(sum Z^2 > alpha1 + eps)
  double lhs_stderr = 0;
  double rhs = 0;
  bool holds = false;  // lhs <= rhs + 4 stderr
};

// Edges only between [0, m) and [m, n), present with probability
// 1 - exp(-t y_i y_j). Z are component masses.
BipartiteReport bipartite_bound_check(const MassWeightVector& xy, std::size_t m, double t, double epsilon,
                                      std::size_t replicates, std::uint64_t seed);

}  // namespace hcm
