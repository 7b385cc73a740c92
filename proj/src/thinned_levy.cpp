#include "hcm/thinned_levy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hcm/errors.hpp"

namespace hcm {

double hub_jump_time(double xi, double kappa, HubClock clock) {
  return clock == HubClock::kXiOverKappa ? xi / kappa : kappa * xi;
}

namespace {

double hub_probability(double theta, double kappa, double t, HubClock clock) {
  // P(jump time <= t) for xi ~ Exp(theta).
  const double rate = clock == HubClock::kXiOverKappa ? theta * kappa : theta / kappa;
  return -std::expm1(-rate * t);
}

double x_slope(const LimitParameters& p) { return p.lambda - p.theta_sq_sum() / p.kappa; }

}  // namespace

ThinnedLevyRealization sample_thinned_levy(const LimitParameters& params, std::size_t k_max, double T,
                                           double grid_step, std::uint64_t seed, HubClock clock) {
  params.validate();
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  const std::size_t K = std::min(k_max, params.theta.size());

  ThinnedLevyRealization r;
  r.params = params;
  r.k_max = K;
  r.clock = clock;
  r.grid_step = grid_step;
  r.xi.resize(K);
  r.jump_time.resize(K);
  Rng rng(seed);
  for (std::size_t i = 0; i < K; ++i) {
    r.xi[i] = exponential(rng, params.theta[i]);
    r.jump_time[i] = hub_jump_time(r.xi[i], params.kappa, clock);
  }

  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.jump_time[a] < r.jump_time[b]; });
  std::vector<Jump> xj, yj;
  for (std::size_t i : order) {
    if (r.jump_time[i] > T) break;
    xj.push_back({r.jump_time[i], params.theta[i]});
    if (params.beta[i] > 0.0) yj.push_back({r.jump_time[i], params.beta[i]});
  }
  r.X = CadlagPath::drift_with_jumps(T, 0.0, x_slope(params), xj);
  r.Y = CadlagPath::drift_with_jumps(T, 0.0, params.alpha, yj);
  return r;
}

double levy_x_formula(const ThinnedLevyRealization& r, double t) {
  const auto& p = r.params;
  double x = p.lambda * t;
  for (std::size_t i = 0; i < p.theta.size(); ++i) {
    const bool found = i < r.k_max && r.jump_time[i] <= t;
    x += p.theta[i] * ((found ? 1.0 : 0.0) - p.theta[i] * t / p.kappa);
  }
  return x;
}

double levy_y_formula(const ThinnedLevyRealization& r, double t) {
  const auto& p = r.params;
  double y = p.alpha * t;
  for (std::size_t i = 0; i < r.k_max; ++i) {
    if (r.jump_time[i] <= t) y += p.beta[i];
  }
  return y;
}

double max_formula_residual(const ThinnedLevyRealization& r) {
  double worst = 0.0;
  for (double t : make_grid(r.X.horizon(), r.grid_step)) {
    worst = std::max(worst, std::abs(r.X(t) - levy_x_formula(r, t)));
    worst = std::max(worst, std::abs(r.Y(t) - levy_y_formula(r, t)));
  }
  return worst;
}

double expected_y(const LimitParameters& params, double t, HubClock clock) {
  double y = params.alpha * t;
  for (std::size_t i = 0; i < params.theta.size(); ++i) {
    y += params.beta[i] * hub_probability(params.theta[i], params.kappa, t, clock);
  }
  return y;
}

double expected_x(const LimitParameters& params, std::size_t k_max, double t, HubClock clock) {
  double x = x_slope(params) * t;
  for (std::size_t i = 0; i < std::min(k_max, params.theta.size()); ++i) {
    x += params.theta[i] * hub_probability(params.theta[i], params.kappa, t, clock);
  }
  return x;
}

double truncation_bound(const LimitParameters& params, std::size_t k_small, std::size_t k_large, double t) {
  double s = 0.0;
  for (std::size_t i = k_small; i < std::min(k_large, params.theta.size()); ++i) {
    s += params.theta[i] * (1.0 + params.theta[i] * t / params.kappa);
  }
  return s;
}

CadlagPath reflected(const CadlagPath& x) {
  std::vector<PathPiece> out;
  const auto& pieces = x.pieces();
  double inf = pieces.front().value;
  auto emit = [&](double start, double value, double slope) {
    if (!out.empty() && out.back().start == start) {
      out.back() = {start, value, slope};
    } else {
      out.push_back({start, value, slope});
    }
  };
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const PathPiece& p = pieces[k];
    const double end = x.piece_end(k);
    inf = std::min(inf, p.value);
    const double above = p.value - inf;
    if (above > 0.0) {
      emit(p.start, above, p.slope);
      if (p.slope < 0.0) {
        const double hit = p.start + above / -p.slope;
        if (hit < end) {
          emit(hit, 0.0, 0.0);
          inf = x.end_value(k);
        }
      }
    } else if (p.slope >= 0.0) {
      emit(p.start, 0.0, p.slope);
    } else {
      emit(p.start, 0.0, 0.0);
      inf = x.end_value(k);
    }
  }
  return CadlagPath(x.horizon(), std::move(out));
}

CadlagPath sample_surplus_from_reflected(const CadlagPath& r, Rng& rng) {
  std::vector<double> events;
  const auto& pieces = r.pieces();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const PathPiece& p = pieces[k];
    const double end = r.piece_end(k);
    const double v_end = r.end_value(k);
    if (p.value < -1e-12 || v_end < -1e-12) throw InvariantViolation("negative reflected value");
    const double bound = std::max(p.value, v_end);
    if (!(bound > 0.0) || !(end > p.start)) continue;
    double t = p.start;
    while (true) {
      t += exponential(rng, bound);
      if (t >= end) break;
      const double rate = p.value + p.slope * (t - p.start);
      if (uniform01(rng) * bound < rate) events.push_back(t);
    }
  }
  std::vector<Jump> jumps;
  jumps.reserve(events.size());
  for (double t : events) jumps.push_back({t, 1.0});
  return CadlagPath::drift_with_jumps(r.horizon(), 0.0, 0.0, jumps);
}

CadlagPath sample_surplus_process(const CadlagPath& x, std::uint64_t seed) {
  Rng rng(seed);
  return sample_surplus_from_reflected(reflected(x), rng);
}

void write_path_csv(std::ostream& out, const std::vector<double>& grid, const CadlagPath& X,
                    const CadlagPath& Y, const CadlagPath& N) {
  out.precision(17);
  out << "t,X,Y,N\n";
  for (double t : grid) out << t << ',' << X(t) << ',' << Y(t) << ',' << N(t) << '\n';
}

}  // namespace hcm
