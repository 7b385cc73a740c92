#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hcm {

struct Jump {
  double time;
  double size;
};

// Piece k covers [start_k, start_{k+1}) (the last one [start, horizon]) and is
// linear there: value + slope * (t - start). A jump at start_k is
// value_k minus the left limit of piece k-1.
struct PathPiece {
  double start;
  double value;
  double slope;
};

class CadlagPath {
 public:
  CadlagPath() = default;
  CadlagPath(double horizon, std::vector<PathPiece> pieces);

  static CadlagPath constant(double horizon, double value);
  // Constant drift plus jumps; jump times must be sorted and lie in (0, horizon].
  // Equal times are merged.
  static CadlagPath drift_with_jumps(double horizon, double initial, double slope,
                                     std::span<const Jump> jumps);
  // values[k] on [k*dt, (k+1)*dt), truncated at horizon.
  static CadlagPath step(double horizon, double dt, std::span<const double> values);

  double horizon() const { return horizon_; }
  const std::vector<PathPiece>& pieces() const { return pieces_; }
  std::size_t piece_index(double t) const;
  // End of piece k (next start or the horizon).
  double piece_end(std::size_t k) const;
  // Left limit at the end of piece k.
  double end_value(std::size_t k) const;

  double value(double t) const;
  double operator()(double t) const { return value(t); }
  double left_limit(double t) const;
  // inf over s <= t of f(s) and f(s-).
  double infimum(double t) const;

  // Discontinuities with nonzero size, in time order.
  std::vector<Jump> jumps() const;
  bool has_negative_jump() const;
  bool is_nondecreasing() const;

  std::vector<double> sample(std::span<const double> grid) const;

 private:
  double horizon_ = 0.0;
  std::vector<PathPiece> pieces_;
};

// 0, step, 2*step, ..., up to and including horizon.
std::vector<double> make_grid(double horizon, double step);

}  // namespace hcm
