#include "hcm/excursions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hcm {

Decomposition decompose(const CadlagPath& f, const CadlagPath* g) {
  const auto& pieces = f.pieces();
  Decomposition d;
  double inf = pieces.front().value;
  bool inside = false;
  double l = 0.0;
  auto close = [&](double r) {
    ExcursionInterval e;
    e.l = l;
    e.r = r;
    e.length = r - l;
    if (g != nullptr) e.g_increment = g->value(r) - g->left_limit(l);
    d.intervals.push_back(e);
    inside = false;
  };
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const PathPiece& p = pieces[k];
    const double end = f.piece_end(k);
    if (k > 0) {
      const double left = f.end_value(k - 1);
      if (p.value < left) throw std::invalid_argument("path has a negative jump");
      if (!inside && p.value > inf) {
        inside = true;
        l = p.start;
      }
    }
    if (!inside) {
      if (p.slope > 0.0) {
        inside = true;
        l = p.start;
      } else {
        inf = f.end_value(k);
        continue;
      }
    }
    if (p.slope < 0.0) {
      const double stop = f.end_value(k);
      if (stop <= inf) {
        const double hit = std::clamp(p.start + (inf - p.value) / p.slope, p.start, end);
        close(stop < inf ? hit : end);
        inf = stop;
      }
    }
  }
  if (inside) d.open_start = l;
  double covered = 0.0;
  for (const auto& e : d.intervals) covered += e.length;
  d.last_right = d.intervals.empty() ? 0.0 : d.intervals.back().r;
  d.complement_measure = d.last_right - covered;
  return d;
}

std::vector<ExcursionInterval> excursion_decompose(const CadlagPath& f) { return decompose(f).intervals; }

std::vector<std::pair<double, double>> gamma_down(const CadlagPath& f, const CadlagPath& g) {
  if (!g.is_nondecreasing()) throw std::invalid_argument("g must be non-decreasing");
  const Decomposition d = decompose(f, &g);
  std::vector<std::pair<double, double>> out;
  out.reserve(d.intervals.size());
  for (const auto& e : d.intervals) out.emplace_back(e.length, e.g_increment);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return out;
}

namespace {

// Infimum of f over [t0, t1], counting values and left limits.
double range_inf(const CadlagPath& f, double t0, double t1) {
  double m = f.value(t0);
  const auto& pieces = f.pieces();
  for (std::size_t k = f.piece_index(t0); k < pieces.size() && pieces[k].start <= t1; ++k) {
    const PathPiece& p = pieces[k];
    const double a = std::max(p.start, t0);
    const double b = std::min(f.piece_end(k), t1);
    m = std::min({m, p.value + p.slope * (a - p.start), p.value + p.slope * (b - p.start)});
  }
  return m;
}

}  // namespace

GoodnessReport check_good(const CadlagPath& f, double epsilon_window, double tolerance,
                          std::size_t dyadic_levels) {
  GoodnessReport rep;
  const Decomposition d = decompose(f);
  rep.complement_measure = d.complement_measure;
  rep.complement_flag = d.complement_measure > tolerance;
  rep.open_excursion = d.open_start.has_value();
  for (const auto& e : d.intervals) {
    if (e.r >= f.horizon()) continue;
    const double at = f.value(e.r);
    if (at != f.left_limit(e.r)) continue;  // a jump at r rules out a local minimum
    if (range_inf(f, e.r, std::min(f.horizon(), e.r + epsilon_window)) >= at) ++rep.local_minimum_flags;
  }
  double eps = f.horizon();
  for (std::size_t k = 0; k < dyadic_levels; ++k, eps /= 2.0) {
    const auto count = static_cast<std::size_t>(std::count_if(
        d.intervals.begin(), d.intervals.end(), [&](const ExcursionInterval& e) { return e.length > eps; }));
    rep.excursions_longer_than.emplace_back(eps, count);
  }
  return rep;
}

std::vector<Atom> ExcursionPointProcess::ranked() const {
  std::vector<Atom> out = atoms;
  std::stable_sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) {
    if (a.x != b.x) return a.x > b.x;
    return a.t < b.t;
  });
  return out;
}

ExcursionPointProcess point_process_from_hitting_times(const CadlagPath& f, const CadlagPath& g,
                                                       const std::vector<double>& t_list,
                                                       double tolerance) {
  ExcursionPointProcess pp;
  double prev = 0.0;
  for (double t : t_list) {
    if (!(t > prev)) throw std::invalid_argument("hitting times must be strictly increasing and positive");
    if (t > f.horizon()) throw std::invalid_argument("hitting time beyond horizon");
    if (f.value(t) > f.infimum(t) + tolerance) throw std::invalid_argument("time is not a running-minimum time");
    pp.atoms.push_back({t, t - prev, g.value(t) - g.value(prev)});
    prev = t;
  }
  return pp;
}

double vague_distance(const ExcursionPointProcess& a, const ExcursionPointProcess& b, const Window& w) {
  auto inside = [&](const Atom& x) { return x.t <= w.t_max && x.x >= w.x_min; };
  std::vector<Atom> left, right;
  for (const auto& x : a.atoms) {
    if (inside(x)) left.push_back(x);
  }
  for (const auto& x : b.atoms) {
    if (inside(x)) right.push_back(x);
  }
  std::stable_sort(left.begin(), left.end(), [](const Atom& p, const Atom& q) { return p.x > q.x; });
  std::vector<bool> used(right.size(), false);
  double worst = 0.0;
  std::size_t unmatched = 0;
  for (const auto& x : left) {
    std::size_t best = right.size();
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (!used[j] && std::abs(right[j].x - x.x) < gap) {
        gap = std::abs(right[j].x - x.x);
        best = j;
      }
    }
    if (best == right.size()) {
      ++unmatched;
      continue;
    }
    used[best] = true;
    const Atom& y = right[best];
    worst = std::max({worst, std::abs(x.t - y.t), std::abs(x.x - y.x), std::abs(x.y - y.y)});
  }
  unmatched += static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  return worst + static_cast<double>(unmatched);
}

void write_point_process_csv(std::ostream& out, const ExcursionPointProcess& p) {
  out.precision(17);
  out << "t,length,g_increment\n";
  for (const auto& a : p.atoms) out << a.t << ',' << a.x << ',' << a.y << '\n';
}

}  // namespace hcm
