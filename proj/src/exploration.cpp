#include "hcm/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hcm/errors.hpp"
#include "hcm/parallel.hpp"

namespace hcm {

namespace {

template <class T>
std::vector<std::int64_t> cumulate(const std::vector<T>& inc) {
  std::vector<std::int64_t> out(inc.size() + 1, 0);
  for (std::size_t i = 0; i < inc.size(); ++i) out[i + 1] = out[i] + inc[i];
  return out;
}

// Alive white half-edges with O(1) uniform draw and removal.
class AlivePool {
 public:
  explicit AlivePool(std::size_t count) : ids_(count), pos_(count) {
    std::iota(ids_.begin(), ids_.end(), HalfEdgeId{0});
    std::iota(pos_.begin(), pos_.end(), std::uint32_t{0});
  }
  bool empty() const { return ids_.empty(); }
  HalfEdgeId draw(Rng& rng) const { return ids_[uniform_index(rng, ids_.size())]; }
  void remove(HalfEdgeId h) {
    const std::uint32_t at = pos_[h];
    const HalfEdgeId last = ids_.back();
    ids_[at] = last;
    pos_[last] = at;
    ids_.pop_back();
  }

 private:
  std::vector<HalfEdgeId> ids_;
  std::vector<std::uint32_t> pos_;
};

}  // namespace

std::vector<std::int64_t> ExplorationTrace::X() const { return cumulate(dx); }
std::vector<std::int64_t> ExplorationTrace::Y() const { return cumulate(dy); }
std::vector<std::int64_t> ExplorationTrace::N() const { return cumulate(dn); }

ExplorationTrace explore(const ColoredMultigraph& g, std::uint64_t seed, PairingMode mode,
                         std::int64_t max_steps) {
  if (mode == PairingMode::kReplay && !g.has_white_matching()) {
    throw std::invalid_argument("replay exploration needs a white matching");
  }
  const std::size_t n = g.vertex_count();
  const std::size_t L = g.white_half_edges();
  ExplorationTrace tr;
  tr.eta.assign(n, -1);
  tr.tau.push_back(0);
  tr.dx.reserve(L / 2 + n);
  tr.dy.reserve(L / 2 + n);
  tr.dn.reserve(L / 2 + n);

  AlivePool pool(L);
  std::vector<std::uint8_t> alive(L, 1);
  std::vector<std::int32_t> alive_count(n);
  std::vector<HalfEdgeId> cursor(n);
  for (VertexId v = 0; v < n; ++v) {
    alive_count[v] = g.white_degree(v);
    cursor[v] = g.first_white(v);
  }
  std::vector<VertexId> queue;
  queue.reserve(n);
  std::size_t head = 0;
  Rng rng(seed);

  std::int64_t t = 0, x = 0;
  DiscoveredComponent current;
  auto kill = [&](HalfEdgeId h) {
    alive[h] = 0;
    pool.remove(h);
    alive_count[g.owner(h)] -= 1;
  };
  auto skip_dead = [&] {
    while (head < queue.size() && alive_count[queue[head]] == 0) ++head;
  };
  auto discover = [&](VertexId u, std::int32_t& ddx, std::int32_t& ddy) {
    tr.eta[u] = t;
    ddx = g.white_degree(u) - 2;
    ddy = g.black_degree(u);
    current.size += 1;
    current.black_half_edges += ddy;
    if (alive_count[u] > 0) queue.push_back(u);
  };

  while (!pool.empty()) {
    if (max_steps >= 0 && t >= max_steps) break;
    skip_dead();
    ++t;
    std::int32_t ddx = -2, ddy = 0;
    std::uint8_t ddn = 0;
    if (head == queue.size()) {
      const VertexId v = g.owner(pool.draw(rng));
      current = DiscoveredComponent{};
      current.ordinal = tr.components.size() + 1;
      discover(v, ddx, ddy);
    } else {
      const VertexId v = queue[head];
      HalfEdgeId e = cursor[v];
      while (!alive[e]) ++e;
      cursor[v] = e;
      kill(e);
      const HalfEdgeId f = mode == PairingMode::kFused ? pool.draw(rng) : g.partner(e);
      kill(f);
      current.edge_count += 1;
      const VertexId u = g.owner(f);
      if (tr.eta[u] < 0) {
        discover(u, ddx, ddy);
      } else {
        ddn = 1;
        current.surplus += 1;
      }
    }
    tr.dx.push_back(ddx);
    tr.dy.push_back(ddy);
    tr.dn.push_back(ddn);
    x += ddx;
    skip_dead();
    if (head == queue.size()) {
      tr.tau.push_back(t);
      tr.components.push_back(current);
      ensure(x == -2 * static_cast<std::int64_t>(tr.components.size()), "walk does not hit -2k at component end");
    }
  }
  tr.complete = pool.empty();
  return tr;
}

void check_trace(const ExplorationTrace& tr, const ColoredMultigraph& g) {
  const auto X = tr.X();
  const auto Y = tr.Y();
  const auto N = tr.N();
  ensure(tr.tau.size() == tr.components.size() + 1, "tau/component count mismatch");
  for (std::size_t k = 1; k < tr.tau.size(); ++k) {
    const auto lo = tr.tau[k - 1], hi = tr.tau[k];
    const auto kk = static_cast<std::int64_t>(k);
    ensure(X[static_cast<std::size_t>(hi)] == -2 * kk, "X(tau_k) != -2k");
    for (auto s = lo + 1; s < hi; ++s) {
      ensure(X[static_cast<std::size_t>(s)] > -2 * kk, "walk reaches -2k before tau_k");
      const auto step = static_cast<std::size_t>(s);
      ensure((tr.dn[step - 1] == 1) == (s > lo + 1 && tr.dx[step - 1] == -2), "surplus flag mismatch");
    }
    const auto& c = tr.components[k - 1];
    const auto ulo = static_cast<std::size_t>(lo), uhi = static_cast<std::size_t>(hi);
    ensure(c.edge_count == hi - lo - 1, "edge count identity");
    ensure(c.black_half_edges == Y[uhi] - Y[ulo], "black half-edge identity");
    ensure(c.size == hi - lo - (N[uhi] - N[ulo]), "size identity");
    ensure(c.size == c.edge_count + 1 - c.surplus, "Euler relation");
  }
  for (std::size_t s = 0; s < tr.dn.size(); ++s) {
    ensure(tr.dy[s] >= 0, "Y decreased");
    ensure(tr.dn[s] <= 1, "N jumped by more than one");
  }
  if (tr.complete) {
    std::int64_t black = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) black += g.black_degree(v);
    ensure(Y.back() == black, "Y(final) != total black degree");
    ensure(X.back() == static_cast<std::int64_t>(g.white_half_edges()) - 2 * tr.steps(), "X(final) mismatch");
  }
}

RescaledTrace rescale_trace(const ExplorationTrace& tr, const ScalingConstants& scaling, double T) {
  const double last = std::floor(scaling.b * T);
  if (last > static_cast<double>(tr.steps())) throw std::invalid_argument("T beyond trace length");
  const auto X = tr.X();
  const auto Y = tr.Y();
  const auto N = tr.N();
  const auto m_max = static_cast<std::size_t>(last);
  auto build = [&](const std::vector<std::int64_t>& w, double scale) {
    std::vector<PathPiece> pieces;
    for (std::size_t m = 0; m <= m_max; ++m) {
      const double v = static_cast<double>(w[m]) / scale;
      if (!pieces.empty() && pieces.back().value == v) continue;
      pieces.push_back({static_cast<double>(m) / scaling.b, v, 0.0});
    }
    return CadlagPath(T, std::move(pieces));
  };
  return {build(X, scaling.a), build(Y, scaling.b), build(N, 1.0)};
}

std::vector<WalkAtom> walk_atoms(const ExplorationTrace& tr, double b) {
  const auto Y = tr.Y();
  std::vector<WalkAtom> out;
  for (std::size_t k = 1; k < tr.tau.size(); ++k) {
    const auto lo = static_cast<std::size_t>(tr.tau[k - 1]), hi = static_cast<std::size_t>(tr.tau[k]);
    out.push_back({static_cast<double>(hi) / b, static_cast<double>(hi - lo) / b,
                   static_cast<double>(Y[hi] - Y[lo]) / b});
  }
  return out;
}

std::vector<DiscoveryRow> discovery_probability_check(const DegreeSequence& seq,
                                                      const std::vector<std::int64_t>& t_values,
                                                      std::size_t hub_count, std::size_t replicates,
                                                      std::uint64_t seed, unsigned threads) {
  if (t_values.empty() || replicates == 0) throw std::invalid_argument("need t values and replicates");
  const auto g = ColoredMultigraph::from_degrees(seq);
  const std::int64_t t_max = *std::max_element(t_values.begin(), t_values.end());
  const std::size_t hubs = std::min(hub_count, seq.size());
  auto hits = parallel_map(replicates, threads, [&](std::size_t r) {
    const auto tr = explore(g, seed_stream(seed, r), PairingMode::kFused, t_max);
    std::vector<std::uint8_t> row(hubs * t_values.size(), 0);
    for (std::size_t v = 0; v < hubs; ++v) {
      for (std::size_t j = 0; j < t_values.size(); ++j) {
        row[v * t_values.size() + j] = tr.eta[v] >= 1 && tr.eta[v] <= t_values[j];
      }
    }
    return row;
  });
  const double ell = static_cast<double>(g.white_half_edges());
  const double shrunk = ell - 2.0 * static_cast<double>(t_max);
  std::vector<DiscoveryRow> out;
  for (std::size_t v = 0; v < hubs; ++v) {
    for (std::size_t j = 0; j < t_values.size(); ++j) {
      DiscoveryRow row;
      row.vertex = static_cast<VertexId>(v);
      row.degree = seq.white[v];
      row.t = t_values[j];
      double count = 0;
      for (const auto& h : hits) count += h[v * t_values.size() + j];
      const double R = static_cast<double>(replicates);
      const double d = row.degree, t = static_cast<double>(row.t);
      row.empirical = count / R;
      row.stderr_ = std::sqrt(row.empirical * (1.0 - row.empirical) / R);
      row.lower = d * t / ell - d * d * t * t / (ell * ell);
      if (t == 0.0) {
        row.upper = 0.0;
      } else {
        row.upper = shrunk > 0.0 ? (d / shrunk + d * d / (shrunk * shrunk)) * t
                                 : std::numeric_limits<double>::infinity();
      }
      row.within = row.empirical >= row.lower - 4.0 * row.stderr_ && row.empirical <= row.upper + 4.0 * row.stderr_;
      out.push_back(row);
    }
  }
  return out;
}

void write_trace_csv(std::ostream& out, const ExplorationTrace& tr, std::int64_t stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const auto X = tr.X();
  const auto Y = tr.Y();
  const auto N = tr.N();
  out << "t,X,Y,N\n";
  const auto last = tr.steps();
  for (std::int64_t t = 0; t <= last; ++t) {
    if (t % stride != 0 && t != last) continue;
    const auto i = static_cast<std::size_t>(t);
    out << t << ',' << X[i] << ',' << Y[i] << ',' << N[i] << '\n';
  }
}

}  // namespace hcm
