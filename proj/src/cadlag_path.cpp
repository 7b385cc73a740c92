#include "hcm/cadlag_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcm {

CadlagPath::CadlagPath(double horizon, std::vector<PathPiece> pieces)
    : horizon_(horizon), pieces_(std::move(pieces)) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("path horizon must be >= 0");
  if (pieces_.empty() || pieces_.front().start != 0.0) throw std::invalid_argument("path must start at 0");
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    if (!(pieces_[k].start > pieces_[k - 1].start)) throw std::invalid_argument("piece starts must increase");
  }
  if (pieces_.back().start > horizon) throw std::invalid_argument("piece starts beyond horizon");
}

CadlagPath CadlagPath::constant(double horizon, double value) {
  return CadlagPath(horizon, {{0.0, value, 0.0}});
}

CadlagPath CadlagPath::drift_with_jumps(double horizon, double initial, double slope,
                                        std::span<const Jump> jumps) {
  std::vector<PathPiece> pieces{{0.0, initial, slope}};
  for (const Jump& j : jumps) {
    if (!(j.time > 0.0) || j.time > horizon) throw std::invalid_argument("jump time outside (0, horizon]");
    PathPiece& last = pieces.back();
    if (j.time < last.start) throw std::invalid_argument("jump times must be sorted");
    if (j.time == last.start) {
      last.value += j.size;
      continue;
    }
    const double left = last.value + last.slope * (j.time - last.start);
    pieces.push_back({j.time, left + j.size, slope});
  }
  return CadlagPath(horizon, std::move(pieces));
}

CadlagPath CadlagPath::step(double horizon, double dt, std::span<const double> values) {
  if (!(dt > 0.0)) throw std::invalid_argument("step width must be positive");
  if (values.empty()) throw std::invalid_argument("step path needs values");
  std::vector<PathPiece> pieces;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double start = static_cast<double>(k) * dt;
    if (start > horizon) break;
    pieces.push_back({start, values[k], 0.0});
  }
  return CadlagPath(horizon, std::move(pieces));
}

std::size_t CadlagPath::piece_index(double t) const {
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                   [](double x, const PathPiece& p) { return x < p.start; });
  return it == pieces_.begin() ? 0 : static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

double CadlagPath::piece_end(std::size_t k) const {
  return k + 1 < pieces_.size() ? pieces_[k + 1].start : horizon_;
}

double CadlagPath::end_value(std::size_t k) const {
  const PathPiece& p = pieces_[k];
  return p.value + p.slope * (piece_end(k) - p.start);
}

double CadlagPath::value(double t) const {
  const PathPiece& p = pieces_[piece_index(t)];
  return p.value + p.slope * (t - p.start);
}

double CadlagPath::left_limit(double t) const {
  const std::size_t k = piece_index(t);
  if (k > 0 && pieces_[k].start == t) return end_value(k - 1);
  return value(t);
}

double CadlagPath::infimum(double t) const {
  double m = pieces_.front().value;
  const std::size_t last = piece_index(t);
  for (std::size_t k = 0; k <= last; ++k) {
    const PathPiece& p = pieces_[k];
    m = std::min(m, p.value);
    const double stop = k == last ? t : piece_end(k);
    m = std::min(m, p.value + p.slope * (stop - p.start));
  }
  return m;
}

std::vector<Jump> CadlagPath::jumps() const {
  std::vector<Jump> out;
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    const double size = pieces_[k].value - end_value(k - 1);
    if (size != 0.0) out.push_back({pieces_[k].start, size});
  }
  return out;
}

bool CadlagPath::has_negative_jump() const {
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    if (pieces_[k].value < end_value(k - 1)) return true;
  }
  return false;
}

bool CadlagPath::is_nondecreasing() const {
  for (const PathPiece& p : pieces_) {
    if (p.slope < 0.0) return false;
  }
  return !has_negative_jump();
}

std::vector<double> CadlagPath::sample(std::span<const double> grid) const {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(value(t));
  return out;
}

std::vector<double> make_grid(double horizon, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor(horizon / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) grid.push_back(std::min(horizon, static_cast<double>(k) * step));
  if (grid.back() < horizon) grid.push_back(horizon);
  return grid;
}

}  // namespace hcm
