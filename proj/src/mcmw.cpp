#include "hcm/mcmw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hcm/errors.hpp"
#include "hcm/stats.hpp"

namespace hcm {

void MassWeightVector::validate() const {
  if (mass.size() != weight.size()) throw std::invalid_argument("mass and weight lengths differ");
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (!(mass[i] >= 0.0) || !(weight[i] >= 0.0) || !std::isfinite(mass[i]) || !std::isfinite(weight[i])) {
      throw std::invalid_argument("masses and weights must be finite and non-negative");
    }
  }
}

double ClockTable::operator()(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const std::uint64_t key = mix64(seed_ + (static_cast<std::uint64_t>(i) + 1) * kGolden);
  const std::uint64_t word = mix64(key ^ ((static_cast<std::uint64_t>(j) + 1) * 0xD1B54A32D192ED03ULL));
  return -std::log(word_to_open_unit(word));
}

BlockSystem::BlockSystem(const MassWeightVector& init)
    : parent_(init.size()), mass_(init.mass), weight_(init.weight), blocks_(init.size()) {
  init.validate();
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t BlockSystem::find(std::size_t i) const {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

bool BlockSystem::merge(std::size_t i, std::size_t j) {
  i = find(i);
  j = find(j);
  if (i == j) return false;
  if (j < i) std::swap(i, j);  // the smaller index stays the root
  parent_[j] = i;
  mass_[i] += mass_[j];
  weight_[i] += weight_[j];
  mass_[j] = 0.0;
  weight_[j] = 0.0;
  --blocks_;
  history_.emplace_back(i, j);
  return true;
}

double BlockSystem::total_mass() const {
  double s = 0;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (find(i) == i) s += mass_[i];
  }
  return s;
}

double BlockSystem::total_weight() const {
  double s = 0;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (find(i) == i) s += weight_[i];
  }
  return s;
}

std::vector<std::pair<double, double>> BlockSystem::ordered_blocks() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (find(i) == i) out.emplace_back(mass_[i], weight_[i]);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

std::vector<double> BlockSystem::ordered_masses() const {
  std::vector<double> out;
  for (const auto& [m, w] : ordered_blocks()) out.push_back(m);
  return out;
}

double BlockSystem::susceptibility() const { return hcm::susceptibility(ordered_masses()); }

namespace {

template <class EdgeTest>
McmwResult build(const MassWeightVector& xy, EdgeTest&& present) {
  xy.validate();
  McmwResult res{{}, BlockSystem(xy), {}};
  const std::size_t k = xy.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (present(i, j)) {
        res.edges.emplace_back(i, j);
        res.blocks.merge(i, j);
      }
    }
  }
  res.masses = res.blocks.ordered_masses();
  return res;
}

}  // namespace

McmwResult mcmw_graphical(const MassWeightVector& xy, double t, Rng& rng) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
  return build(xy, [&](std::size_t i, std::size_t j) {
    const double u = uniform01(rng);
    return u < -std::expm1(-xy.weight[i] * xy.weight[j] * t);
  });
}

McmwResult mcmw_graphical(const MassWeightVector& xy, double t, std::uint64_t seed) {
  Rng rng(seed);
  return mcmw_graphical(xy, t, rng);
}

McmwResult mcmw_graphical(const MassWeightVector& xy, double t, const ClockTable& clocks) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
  return build(xy, [&](std::size_t i, std::size_t j) { return clocks(i, j) <= xy.weight[i] * xy.weight[j] * t; });
}

std::pair<McmwResult, McmwResult> mcmw_coupled_pair(const MassWeightVector& a, const MassWeightVector& b,
                                                    double t, std::uint64_t shared_seed) {
  if (a.size() != b.size()) throw std::invalid_argument("coupled inputs must share the index set");
  const ClockTable clocks(shared_seed);
  return {mcmw_graphical(a, t, clocks), mcmw_graphical(b, t, clocks)};
}

std::vector<double> mc1(const std::vector<double>& x, double t, Rng& rng) {
  return mcmw_graphical(MassWeightVector{x, x}, t, rng).masses;
}

double susceptibility(const std::vector<double>& masses) {
  double s = 0;
  for (double m : masses) s += m * m;
  return s;
}

ScaledInputs scaling_transform(const MassWeightVector& xy, double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw std::invalid_argument("scaling constants must be positive");
  ScaledInputs out;
  out.inputs.mass = xy.mass;
  out.inputs.weight = xy.weight;
  for (double& y : out.inputs.weight) y *= b * std::sqrt(c);
  out.mass_scale = a;
  return out;
}

namespace {

bool edges_included(const std::vector<std::pair<std::size_t, std::size_t>>& small,
                    const std::vector<std::pair<std::size_t, std::size_t>>& large) {
  // Both lists are produced in lexicographic pair order.
  return std::includes(large.begin(), large.end(), small.begin(), small.end());
}

double padded_sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    const double u = i < a.size() ? a[i] : 0.0;
    const double v = i < b.size() ? b[i] : 0.0;
    s += (u - v) * (u - v);
  }
  return s;
}

}  // namespace

FellerReport feller_probe(const MassWeightVector& xy, double epsilon, double t, std::size_t replicates,
                          std::uint64_t seed) {
  xy.validate();
  for (double y : xy.weight) {
    if (!(y > 0.0)) throw std::invalid_argument("feller probe needs strictly positive weights");
  }
  const std::size_t k = xy.size();
  MassWeightVector joint_y{{}, xy.weight};
  MassWeightVector joint_xy{{}, {}};
  double inner = 0, y_sq = 0;
  for (std::size_t i = 0; i < k; ++i) {
    joint_y.mass.push_back(xy.mass[i] + xy.weight[i]);
    inner += xy.mass[i] * xy.weight[i];
    y_sq += xy.weight[i] * xy.weight[i];
  }
  joint_xy.mass = joint_y.mass;
  joint_xy.weight = joint_y.mass;
  const double joint_sq = l2_norm_sq(joint_y.mass);
  const double shift = y_sq + 2.0 * inner;

  FellerReport rep;
  rep.replicates = replicates;
  rep.tail_threshold = 2.0 * joint_sq;
  rep.tail_bound = t * rep.tail_threshold * joint_sq / (rep.tail_threshold - joint_sq);
  double tail_hits = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng rng(seed_stream(seed, 2 * r));
    MassWeightVector moved = xy;
    auto perturb = [&](std::vector<double>& v) {
      std::vector<double> u(k);
      for (double& e : u) e = uniform01(rng);
      const double norm = std::sqrt(l2_norm_sq(u));
      for (std::size_t i = 0; i < k; ++i) v[i] += epsilon * u[i] / norm;
    };
    perturb(moved.mass);
    perturb(moved.weight);
    const ClockTable clocks(seed_stream(seed, 2 * r + 1));
    const auto base = mcmw_graphical(xy, t, clocks);
    const auto pert = mcmw_graphical(moved, t, clocks);
    const auto s2 = mcmw_graphical(joint_y, t, clocks);
    const auto s3 = mcmw_graphical(joint_xy, t, clocks);

    const double diff = padded_sq_distance(pert.masses, base.masses);
    rep.mean_sq_difference += diff;
    if (!edges_included(base.edges, pert.edges)) ++rep.inclusion_violations;
    const double sa = susceptibility(base.masses), sb = susceptibility(pert.masses);
    const double tol = 1e-9 * (1.0 + sb);
    if (diff > sb - sa + tol) ++rep.norm_violations;
    const double S1 = sa, S2 = susceptibility(s2.masses), S3 = susceptibility(s3.masses);
    const double tol2 = 1e-9 * (1.0 + S3);
    if (S1 > S2 - shift + tol2 || S2 > S3 + tol2) ++rep.chain_violations;
    if (S3 > rep.tail_threshold) tail_hits += 1;
  }
  const double R = static_cast<double>(std::max<std::size_t>(replicates, 1));
  rep.mean_sq_difference /= R;
  rep.tail_empirical = tail_hits / R;
  rep.tail_stderr = std::sqrt(rep.tail_empirical * (1.0 - rep.tail_empirical) / R);
  return rep;
}

BipartiteReport bipartite_bound_check(const MassWeightVector& xy, std::size_t m, double t, double epsilon,
                                      std::size_t replicates, std::uint64_t seed) {
  xy.validate();
  const std::size_t n = xy.size();
  if (m < 1 || m >= n) throw std::invalid_argument("split index must satisfy 1 <= m < n");
  BipartiteReport rep;
  rep.replicates = replicates;
  double right_sq = 0, right_mass_sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < m) {
      rep.alpha1 += xy.mass[i] * xy.mass[i];
      rep.alpha2 += xy.weight[i] * xy.weight[i];
    } else {
      right_sq += (xy.mass[i] + xy.weight[i]) * (xy.mass[i] + xy.weight[i]);
      right_mass_sq += xy.mass[i] * xy.mass[i];
    }
  }
  const double a1 = rep.alpha1, a2 = rep.alpha2, e = epsilon;
  rep.rhs = (t * (a1 + 2.0 * a2 + 3.0 * e) + t * t * (a1 + a2 + 2.0 * e) * (a1 + a2 + 2.0 * e)) * right_sq;
  Rng rng(seed);
  double hits = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    BlockSystem blocks(xy);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = m; j < n; ++j) {
        if (uniform01(rng) < -std::expm1(-t * xy.weight[i] * xy.weight[j])) blocks.merge(i, j);
      }
    }
    // sum Z^2 - sum_{k>m} x_k^2 equals alpha1 when no edge is present.
    if (blocks.susceptibility() - right_mass_sq > a1 + e) hits += 1;
  }
  const double R = static_cast<double>(std::max<std::size_t>(replicates, 1));
  const double p = hits / R;
  rep.lhs = e * p;
  rep.lhs_stderr = e * std::sqrt(p * (1.0 - p) / R);
  rep.holds = rep.lhs <= rep.rhs + 4.0 * rep.lhs_stderr;
  return rep;
}

}  // namespace hcm
