#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hcm/cadlag_path.hpp"
#include "hcm/degree_model.hpp"
#include "hcm/rng.hpp"

namespace hcm {

// Where hub i's jump lands given its clock xi_i ~ Exp(theta_i).
//   kXiOverKappa: indicator 1[xi_i <= kappa t], jump at xi_i / kappa.
//   kKappaXi:     indicator 1[xi_i <= t / kappa], jump at kappa * xi_i. This is
//                 the hazard theta_i / kappa that the exploration walk produces
//                 and the one whose compensator is theta_i^2 t / kappa.
enum class HubClock { kXiOverKappa, kKappaXi };

struct ThinnedLevyRealization {
  std::vector<double> xi;         // one clock per simulated hub
  std::vector<double> jump_time;  // clock mapped to path time
  CadlagPath X;
  CadlagPath Y;
  LimitParameters params;
  std::size_t k_max = 0;
  HubClock clock = HubClock::kXiOverKappa;
  double grid_step = 0.0;  // export density only
};

double hub_jump_time(double xi, double kappa, HubClock clock);

// Hubs beyond k_max are treated as never discovered: their compensator stays
// in the drift of X and they contribute nothing to Y. Clocks are drawn in
// index order from one stream, so runs with different k_max share a prefix.
ThinnedLevyRealization sample_thinned_levy(const LimitParameters& params, std::size_t k_max, double T,
                                           double grid_step, std::uint64_t seed,
                                           HubClock clock = HubClock::kXiOverKappa);

// Direct evaluation of the defining sums at t for a given realization.
double levy_x_formula(const ThinnedLevyRealization& r, double t);
double levy_y_formula(const ThinnedLevyRealization& r, double t);
// Max over the export grid of |path - formula| for X and Y.
double max_formula_residual(const ThinnedLevyRealization& r);

double expected_y(const LimitParameters& params, double t, HubClock clock);
// Expectation of X(t) when only the first k_max hubs can jump.
double expected_x(const LimitParameters& params, std::size_t k_max, double t, HubClock clock);
// Bound on |X_K(t) - X_K'(t)| for K < K': sum_{K<i<=K'} theta_i (1 + theta_i t / kappa).
double truncation_bound(const LimitParameters& params, std::size_t k_small, std::size_t k_large, double t);

// x minus its running infimum.
CadlagPath reflected(const CadlagPath& x);
// Counting path with intensity reflected(x)(t) dt.
CadlagPath sample_surplus_process(const CadlagPath& x, std::uint64_t seed);
// Counting path with intensity r(t) dt for a given non-negative r.
CadlagPath sample_surplus_from_reflected(const CadlagPath& r, Rng& rng);

// Columns t, X, Y, N evaluated on the grid.
void write_path_csv(std::ostream& out, const std::vector<double>& grid, const CadlagPath& X,
                    const CadlagPath& Y, const CadlagPath& N);

}  // namespace hcm
