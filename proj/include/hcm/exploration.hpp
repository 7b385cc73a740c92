#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hcm/cadlag_path.hpp"
#include "hcm/degree_model.hpp"
#include "hcm/graph.hpp"

namespace hcm {

struct DiscoveredComponent {
  std::size_t ordinal = 0;  // k, from 1
  std::int64_t edge_count = 0;
  std::int64_t size = 0;
  std::int64_t black_half_edges = 0;
  std::int64_t surplus = 0;
};

// Walks are kept as per-step increments; step t (1-based) is entry t-1.
struct ExplorationTrace {
  std::vector<std::int32_t> dx;
  std::vector<std::int32_t> dy;
  std::vector<std::uint8_t> dn;
  std::vector<std::int64_t> eta;  // discovery step per vertex, -1 if never discovered
  std::vector<std::int64_t> tau;  // tau[0] = 0, tau[k] = first t with X(t) = -2k
  std::vector<DiscoveredComponent> components;
  bool complete = false;

  std::int64_t steps() const { return static_cast<std::int64_t>(dx.size()); }
  // Cumulative walks of length steps()+1, starting at 0.
  std::vector<std::int64_t> X() const;
  std::vector<std::int64_t> Y() const;
  std::vector<std::int64_t> N() const;
};

enum class PairingMode {
  kFused,   // pair with a uniform alive half-edge as the walk proceeds
  kReplay,  // follow the white matching stored in the graph
};

// Breadth-first exploration. A new component starts at a vertex chosen with
// probability proportional to its white degree among undiscovered vertices;
// the oldest active vertex explores; new vertices join at the back.
// max_steps < 0 runs to completion.
ExplorationTrace explore(const ColoredMultigraph& g, std::uint64_t seed,
                         PairingMode mode = PairingMode::kReplay, std::int64_t max_steps = -1);

// Throws InvariantViolation if any walk or per-component identity fails.
void check_trace(const ExplorationTrace& tr, const ColoredMultigraph& g);

struct RescaledTrace {
  CadlagPath X;  // a^-1 X(floor(b t))
  CadlagPath Y;  // b^-1 Y(floor(b t))
  CadlagPath N;  // N(floor(b t))
};

RescaledTrace rescale_trace(const ExplorationTrace& tr, const ScalingConstants& scaling, double T);

// Rescaled atoms (tau_k / b, (tau_k - tau_{k-1}) / b, (Y(tau_k) - Y(tau_{k-1})) / b).
struct WalkAtom {
  double t;
  double x;
  double y;
};
std::vector<WalkAtom> walk_atoms(const ExplorationTrace& tr, double b);

struct DiscoveryRow {
  VertexId vertex = 0;
  int degree = 0;
  std::int64_t t = 0;
  double empirical = 0;
  double stderr_ = 0;
  double lower = 0;
  double upper = 0;
  bool within = false;  // lower - 4 se <= empirical <= upper + 4 se
};

// Empirical P(eta_v <= t) for the first hub_count vertices at each t in
// t_values, against the two-sided discovery bounds with T b_n = max t.
std::vector<DiscoveryRow> discovery_probability_check(const DegreeSequence& seq,
                                                      const std::vector<std::int64_t>& t_values,
                                                      std::size_t hub_count, std::size_t replicates,
                                                      std::uint64_t seed, unsigned threads = 1);

// Columns t, X, Y, N every stride steps (and the final step).
void write_trace_csv(std::ostream& out, const ExplorationTrace& tr, std::int64_t stride = 1);

}  // namespace hcm
