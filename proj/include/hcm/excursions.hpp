#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "hcm/cadlag_path.hpp"

namespace hcm {

struct ExcursionInterval {
  double l = 0;
  double r = 0;
  double length = 0;
  double g_increment = 0;  // g(r) - g(l-)
};

struct Decomposition {
  std::vector<ExcursionInterval> intervals;  // closed excursions, in time order
  std::optional<double> open_start;          // excursion still running at the horizon
  double last_right = 0;                     // sup of right endpoints (0 if none)
  double complement_measure = 0;             // |[0, last_right] minus excursions|
};

// Excursions of f above its running infimum. f must have no negative jumps.
// When g is given, each interval carries g(r) - g(l-).
Decomposition decompose(const CadlagPath& f, const CadlagPath* g = nullptr);
std::vector<ExcursionInterval> excursion_decompose(const CadlagPath& f);

// (length, g-increment) sorted by decreasing length, ties by appearance.
std::vector<std::pair<double, double>> gamma_down(const CadlagPath& f, const CadlagPath& g);

struct GoodnessReport {
  bool isolated_points_checkable = false;  // a finite realization cannot decide this
  double complement_measure = 0;
  bool complement_flag = false;
  std::size_t local_minimum_flags = 0;
  bool open_excursion = false;
  std::vector<std::pair<double, std::size_t>> excursions_longer_than;  // (eps, count), dyadic eps
  bool flagged() const { return complement_flag || local_minimum_flags > 0; }
};

// epsilon_window: one-sided window for the local-minimum check at right
// endpoints; tolerance: allowed complement measure.
GoodnessReport check_good(const CadlagPath& f, double epsilon_window, double tolerance = 1e-9,
                          std::size_t dyadic_levels = 10);

struct Atom {
  double t = 0;
  double x = 0;  // length
  double y = 0;  // g-increment
};

struct ExcursionPointProcess {
  std::vector<Atom> atoms;  // time order
  // Atoms sorted by decreasing x, ties by smaller t.
  std::vector<Atom> ranked() const;
};

// Atoms (t_i, t_i - t_{i-1}, g(t_i) - g(t_{i-1})) with t_0 = 0. Each t_i must
// satisfy f(t_i) <= inf_{s<=t_i} f(s) + tolerance.
ExcursionPointProcess point_process_from_hitting_times(const CadlagPath& f, const CadlagPath& g,
                                                       const std::vector<double>& t_list,
                                                       double tolerance = 1e-12);

struct Window {
  double t_max;
  double x_min;
};

// Greedy matching distance between atoms with t <= t_max and x >= x_min.
double vague_distance(const ExcursionPointProcess& a, const ExcursionPointProcess& b, const Window& w);

void write_point_process_csv(std::ostream& out, const ExcursionPointProcess& p);

}  // namespace hcm
