#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "hcm/graph.hpp"

namespace hcm {

enum class PercolationMode { kDynamic, kModified };

struct PairingEvent {
  double time = 0;
  HalfEdgeId a = 0;  // a < b
  HalfEdgeId b = 0;
};

// Black pairing state on top of a fixed white graph (the graph itself is not
// copied; pass it alongside when components are needed).
struct PercolationState {
  PercolationMode mode = PercolationMode::kDynamic;
  std::int64_t q0 = 0;  // black half-edges / 2
  std::int64_t q = 0;   // unpaired pairs now (dynamic) or q0 (modified)
  double horizon = 0;
  std::vector<HalfEdgeId> unpaired;  // dynamic: unpaired black half-edges; modified: all of them
  std::vector<PairingEvent> events;  // strictly increasing times

  std::vector<std::pair<HalfEdgeId, HalfEdgeId>> black_edges() const;
  // Throws InvariantViolation on count or ordering failures.
  void check() const;
};

// Events at rate q(t); each pairs a uniform unordered pair of distinct
// unpaired black half-edges, which then leave the pool.
PercolationState run_dynamic(const ColoredMultigraph& g, double s_max, std::uint64_t seed);
// Events at the constant rate q0; the chosen half-edges stay available.
PercolationState run_modified(const ColoredMultigraph& g, double s_max, std::uint64_t seed);

struct CoupledPair {
  PercolationState dynamic_state;
  PercolationState modified_state;
};

// Modified events are generated first; the dynamic state accepts an event
// only when both half-edges are still unpaired there. Edge inclusion is
// asserted after every event. The accepted stream has rate
// q(2q - 1) / (2 q0 - 1) rather than q, so the dynamic side of this pair is the
// dynamic jump chain on a slowed clock, not run_dynamic.
CoupledPair run_coupled(const ColoredMultigraph& g, double s_max, std::uint64_t seed);

// Ordered component sizes after adding the state's black edges.
std::vector<std::int64_t> percolation_sizes(const ColoredMultigraph& g, const PercolationState& state);

struct QTrajectoryReport {
  std::int64_t n = 0;
  std::int64_t q0 = 0;
  double horizon = 0;      // T / c_n
  double delta = 0;        // threshold on sup |Q(t)/n - (Q(0)/n) e^{-t}|
  std::size_t replicates = 0;
  double mean_sup_deviation = 0;
  double exceedance_rate = 0;
  double exceedance_stderr = 0;
  double bound = 0;        // 2 gamma T / (delta^2 n c_n)
  double mean_at_one = 0;  // mean Q(1)/n
  double sd_at_one = 0;    // per-replicate sd of Q(1)/n
  double expected_at_one = 0;
  bool mean_ok = false;        // |mean - expected| <= 3 sd / sqrt(reps)
  bool exceedance_ok = false;  // rate <= bound + 4 stderr
};

// gamma is taken as the black half-edge density l_b / n.
QTrajectoryReport q_trajectory_check(const ColoredMultigraph& g, double c_n, double T, double delta,
                                     std::size_t replicates, std::uint64_t seed, unsigned threads = 1);

struct EdgeProbabilityEstimate {
  double estimate = 0;
  double stderr_ = 0;
  std::size_t replicates = 0;
};

// Frequency with which run_dynamic up to s creates a black edge with one end
// in each vertex set. Throws std::invalid_argument if the sets overlap.
EdgeProbabilityEstimate edge_probability_estimate(const ColoredMultigraph& g, const std::vector<VertexId>& first,
                                                  const std::vector<VertexId>& second, double s,
                                                  std::size_t replicates, std::uint64_t seed,
                                                  unsigned threads = 1);

// Columns time, half_edge_a, half_edge_b.
void write_event_csv(std::ostream& out, const PercolationState& state);

}  // namespace hcm
