#include "hcm/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hcm/errors.hpp"
#include "hcm/parallel.hpp"

namespace hcm {

namespace {

PercolationState initial_state(const ColoredMultigraph& g, PercolationMode mode, double s_max) {
  if (!(s_max >= 0.0)) throw std::invalid_argument("time must be >= 0");
  const std::size_t lb = g.black_half_edges();
  if (lb < 2) throw std::invalid_argument("percolation needs black half-edges");
  if (lb % 2 != 0) throw std::invalid_argument("odd number of black half-edges");
  PercolationState st;
  st.mode = mode;
  st.q0 = static_cast<std::int64_t>(lb / 2);
  st.q = st.q0;
  st.horizon = s_max;
  st.unpaired.resize(lb);
  std::iota(st.unpaired.begin(), st.unpaired.end(), static_cast<HalfEdgeId>(g.white_half_edges()));
  return st;
}

// Two distinct uniform positions in [0, m).
std::pair<std::size_t, std::size_t> distinct_pair(Rng& rng, std::size_t m) {
  const auto i = static_cast<std::size_t>(uniform_index(rng, m));
  auto j = static_cast<std::size_t>(uniform_index(rng, m - 1));
  if (j >= i) ++j;
  return {i, j};
}

void remove_at(std::vector<HalfEdgeId>& pool, std::vector<std::uint32_t>& pos, HalfEdgeId base, HalfEdgeId h) {
  const std::uint32_t at = pos[h - base];
  const HalfEdgeId last = pool.back();
  pool[at] = last;
  pos[last - base] = at;
  pool.pop_back();
}

PairingEvent make_event(double t, HalfEdgeId a, HalfEdgeId b) {
  return {t, std::min(a, b), std::max(a, b)};
}

}  // namespace

std::vector<std::pair<HalfEdgeId, HalfEdgeId>> PercolationState::black_edges() const {
  std::vector<std::pair<HalfEdgeId, HalfEdgeId>> out;
  out.reserve(events.size());
  for (const auto& e : events) out.emplace_back(e.a, e.b);
  return out;
}

void PercolationState::check() const {
  for (std::size_t k = 1; k < events.size(); ++k) {
    ensure(events[k].time > events[k - 1].time, "event times not strictly increasing");
  }
  if (mode == PercolationMode::kDynamic) {
    ensure(q + static_cast<std::int64_t>(events.size()) == q0, "Q(t) + events != Q(0)");
    ensure(static_cast<std::int64_t>(unpaired.size()) == 2 * q, "unpaired count != 2Q");
  } else {
    ensure(q == q0, "modified Q changed");
  }
}

PercolationState run_dynamic(const ColoredMultigraph& g, double s_max, std::uint64_t seed) {
  auto st = initial_state(g, PercolationMode::kDynamic, s_max);
  const auto base = static_cast<HalfEdgeId>(g.white_half_edges());
  std::vector<std::uint32_t> pos(st.unpaired.size());
  std::iota(pos.begin(), pos.end(), std::uint32_t{0});
  Rng rng(seed);
  double t = 0;
  while (st.q > 0) {
    t += exponential(rng, static_cast<double>(st.q));
    if (t > s_max) break;
    const auto [i, j] = distinct_pair(rng, st.unpaired.size());
    const HalfEdgeId a = st.unpaired[i], b = st.unpaired[j];
    remove_at(st.unpaired, pos, base, a);
    remove_at(st.unpaired, pos, base, b);
    st.events.push_back(make_event(t, a, b));
    st.q -= 1;
  }
  return st;
}

PercolationState run_modified(const ColoredMultigraph& g, double s_max, std::uint64_t seed) {
  auto st = initial_state(g, PercolationMode::kModified, s_max);
  Rng rng(seed);
  const double rate = static_cast<double>(st.q0);
  double t = 0;
  while (true) {
    t += exponential(rng, rate);
    if (t > s_max) break;
    const auto [i, j] = distinct_pair(rng, st.unpaired.size());
    st.events.push_back(make_event(t, st.unpaired[i], st.unpaired[j]));
  }
  return st;
}

CoupledPair run_coupled(const ColoredMultigraph& g, double s_max, std::uint64_t seed) {
  CoupledPair out{initial_state(g, PercolationMode::kDynamic, s_max), run_modified(g, s_max, seed)};
  auto& dyn = out.dynamic_state;
  const auto base = static_cast<HalfEdgeId>(g.white_half_edges());
  std::vector<std::uint32_t> pos(dyn.unpaired.size());
  std::iota(pos.begin(), pos.end(), std::uint32_t{0});
  std::vector<std::uint8_t> free(dyn.unpaired.size(), 1);
  std::vector<std::size_t> source;  // modified index of each accepted event
  const auto& mod = out.modified_state.events;
  for (std::size_t k = 0; k < mod.size(); ++k) {
    const auto& e = mod[k];
    if (free[e.a - base] && free[e.b - base]) {
      free[e.a - base] = free[e.b - base] = 0;
      remove_at(dyn.unpaired, pos, base, e.a);
      remove_at(dyn.unpaired, pos, base, e.b);
      dyn.events.push_back(e);
      dyn.q -= 1;
      source.push_back(k);
    }
    const auto& d = dyn.events.empty() ? e : dyn.events.back();
    const auto& m = dyn.events.empty() ? e : mod[source.back()];
    ensure(source.empty() || (source.back() <= k && d.a == m.a && d.b == m.b && d.time == m.time),
           "dynamic edge missing from modified graph");
  }
  return out;
}

std::vector<std::int64_t> percolation_sizes(const ColoredMultigraph& g, const PercolationState& state) {
  const auto edges = state.black_edges();
  return component_sizes(g, edges);
}

QTrajectoryReport q_trajectory_check(const ColoredMultigraph& g, double c_n, double T, double delta,
                                     std::size_t replicates, std::uint64_t seed, unsigned threads) {
  if (!(c_n > 0.0) || !(T >= 0.0) || !(delta > 0.0)) throw std::invalid_argument("bad trajectory parameters");
  if (replicates == 0) throw std::invalid_argument("need replicates");
  QTrajectoryReport rep;
  rep.n = static_cast<std::int64_t>(g.vertex_count());
  rep.q0 = static_cast<std::int64_t>(g.black_half_edges() / 2);
  rep.horizon = T / c_n;
  rep.delta = delta;
  rep.replicates = replicates;
  const double n = static_cast<double>(rep.n);
  const double q0n = static_cast<double>(rep.q0) / n;
  const double gamma = static_cast<double>(g.black_half_edges()) / n;
  const double run_to = std::max(1.0, rep.horizon);
  struct One {
    double sup;
    double at_one;
  };
  const auto rows = parallel_map(replicates, threads, [&](std::size_t r) {
    const auto st = run_dynamic(g, run_to, seed_stream(seed, r));
    double sup = 0, q = static_cast<double>(rep.q0), left = 0, at_one = -1;
    // Q is constant between events and q0 e^{-t} is monotone, so the sup is
    // attained at interval endpoints.
    auto scan = [&](double a, double b) {
      if (a > rep.horizon) return;
      b = std::min(b, rep.horizon);
      sup = std::max({sup, std::abs(q / n - q0n * std::exp(-a)), std::abs(q / n - q0n * std::exp(-b))});
    };
    for (const auto& e : st.events) {
      scan(left, e.time);
      if (at_one < 0 && e.time > 1.0) at_one = q / n;
      q -= 1;
      left = e.time;
    }
    scan(left, rep.horizon);
    if (at_one < 0) at_one = q / n;
    return One{sup, at_one};
  });
  double hits = 0, m1 = 0, m2 = 0;
  for (const auto& o : rows) {
    rep.mean_sup_deviation += o.sup;
    if (o.sup > delta) hits += 1;
    m1 += o.at_one;
  }
  const double R = static_cast<double>(replicates);
  rep.mean_sup_deviation /= R;
  rep.exceedance_rate = hits / R;
  rep.exceedance_stderr = std::sqrt(rep.exceedance_rate * (1.0 - rep.exceedance_rate) / R);
  rep.bound = 2.0 * gamma * T / (delta * delta * n * c_n);
  rep.mean_at_one = m1 / R;
  for (const auto& o : rows) m2 += (o.at_one - rep.mean_at_one) * (o.at_one - rep.mean_at_one);
  rep.sd_at_one = replicates > 1 ? std::sqrt(m2 / (R - 1.0)) : 0.0;
  rep.expected_at_one = q0n * std::exp(-1.0);
  rep.mean_ok = std::abs(rep.mean_at_one - rep.expected_at_one) <= 3.0 * rep.sd_at_one / std::sqrt(R) + 1e-15;
  rep.exceedance_ok = rep.exceedance_rate <= rep.bound + 4.0 * rep.exceedance_stderr;
  return rep;
}

EdgeProbabilityEstimate edge_probability_estimate(const ColoredMultigraph& g, const std::vector<VertexId>& first,
                                                  const std::vector<VertexId>& second, double s,
                                                  std::size_t replicates, std::uint64_t seed, unsigned threads) {
  if (replicates == 0) throw std::invalid_argument("need replicates");
  std::vector<std::uint8_t> side(g.vertex_count(), 0);
  for (VertexId v : first) side.at(v) = 1;
  for (VertexId v : second) {
    if (side.at(v) != 0) throw std::invalid_argument("vertex sets overlap");
    side[v] = 2;
  }
  const auto hits = parallel_map(replicates, threads, [&](std::size_t r) {
    if (s <= 0.0) return 0;
    const auto st = run_dynamic(g, s, seed_stream(seed, r));
    for (const auto& e : st.events) {
      const int u = side[g.owner(e.a)], v = side[g.owner(e.b)];
      if (u != 0 && v != 0 && u != v) return 1;
    }
    return 0;
  });
  EdgeProbabilityEstimate est;
  est.replicates = replicates;
  const double R = static_cast<double>(replicates);
  est.estimate = static_cast<double>(std::accumulate(hits.begin(), hits.end(), 0)) / R;
  est.stderr_ = std::sqrt(est.estimate * (1.0 - est.estimate) / R);
  return est;
}

void write_event_csv(std::ostream& out, const PercolationState& state) {
  const auto old = out.precision(17);
  out << "time,half_edge_a,half_edge_b\n";
  for (const auto& e : state.events) out << e.time << ',' << e.a << ',' << e.b << '\n';
  out.precision(old);
}

}  // namespace hcm
