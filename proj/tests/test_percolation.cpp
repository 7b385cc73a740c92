#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/mcmw.hpp"
#include "hcm/percolation.hpp"
#include "hcm/stats.hpp"

using namespace hcm;

namespace {

bool within(double p_hat, double p, double R, double sigmas) {
  return std::abs(p_hat - p) <= sigmas * std::sqrt(p * (1.0 - p) / R);
}

ColoredMultigraph matched(const std::vector<int>& white, const std::vector<int>& black, std::uint64_t seed) {
  return sample_white_matching(ColoredMultigraph::from_degrees(white, black), seed);
}

ColoredMultigraph hundred_vertex_graph() {
  const auto seq = build_degree_sequence(make_scaling(100, 3.5), power_law_limits(3.5, 2, 0.6, 0.5, 2.0), 2,
                                         default_white_bulk(), default_black_bulk(), 3);
  return sample_white_matching(seq, 4);
}

}  // namespace

TEST_CASE("zero horizon produces no events") {
  const auto g = hundred_vertex_graph();
  const auto d = run_dynamic(g, 0.0, 1);
  const auto m = run_modified(g, 0.0, 1);
  CHECK(d.events.empty());
  CHECK(m.events.empty());
  CHECK(d.q == d.q0);
  CHECK_NOTHROW(d.check());
  CHECK_NOTHROW(m.check());
}

TEST_CASE("initial state errors") {
  CHECK_THROWS_AS(run_dynamic(matched({1, 1}, {0, 0}, 1), 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_dynamic(matched({1, 1}, {1, 2}, 1), 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_dynamic(matched({1, 1}, {1, 1}, 1), -1.0, 1), std::invalid_argument);
}

TEST_CASE("a single black pair forms at rate one") {
  const auto g = matched({1, 1}, {1, 1}, 1);
  const double s = 0.7;
  const int R = 100000;
  int paired = 0;
  for (int r = 0; r < R; ++r) paired += !run_dynamic(g, s, seed_stream(2, static_cast<std::uint64_t>(r))).events.empty();
  CHECK(within(paired / static_cast<double>(R), 1.0 - std::exp(-s), R, 3.0));
}

TEST_CASE("dynamic state bookkeeping") {
  const auto g = hundred_vertex_graph();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto st = run_dynamic(g, 2.0, s);
    REQUIRE_NOTHROW(st.check());
    std::vector<HalfEdgeId> used;
    for (const auto& e : st.events) {
      REQUIRE(e.a < e.b);
      used.push_back(e.a);
      used.push_back(e.b);
    }
    std::sort(used.begin(), used.end());
    REQUIRE(std::adjacent_find(used.begin(), used.end()) == used.end());
  }
}

TEST_CASE("dynamic pairing matches static percolation in law") {
  const auto g = hundred_vertex_graph();
  for (double s : {0.1, 1.0}) {
    std::vector<double> dyn, stat;
    for (std::uint64_t r = 0; r < 4000; ++r) {
      dyn.push_back(static_cast<double>(percolation_sizes(g, run_dynamic(g, s, seed_stream(5, r))).front()));
      auto full = sample_black_matching(g, seed_stream(6, r));
      full = percolate_black(full, 1.0 - std::exp(-s), seed_stream(7, r));
      stat.push_back(static_cast<double>(percolated_components(full).front().size));
    }
    CHECK(ks_two_sample(dyn, stat).p_value > 1e-3);
  }
}

TEST_CASE("modified process merges two components like the coalescent") {
  // Component A: vertices 0,1 with black degrees (1,1); component B: vertices 2,3 with (2,0).
  auto g = ColoredMultigraph::from_degrees({1, 1, 1, 1}, {1, 1, 2, 0});
  g.pair(0, 1);
  g.pair(2, 3);
  g.set_white_matched();
  const double s = 0.8;
  const double q0 = 2.0;
  const double t = s / (2.0 * q0 - 1.0);
  const MassWeightVector xy{{2.0, 2.0}, {2.0, 2.0}};
  const int R = 100000;
  int merged = 0, oracle_merged = 0;
  for (int r = 0; r < R; ++r) {
    merged += percolation_sizes(g, run_modified(g, s, seed_stream(8, static_cast<std::uint64_t>(r)))).size() == 1;
    oracle_merged += mcmw_graphical(xy, t, seed_stream(9, static_cast<std::uint64_t>(r))).masses.size() == 1;
  }
  const double p = 1.0 - std::exp(-4.0 * t);
  CHECK(within(merged / static_cast<double>(R), p, R, 3.0));
  CHECK(within(oracle_merged / static_cast<double>(R), p, R, 3.0));
}

TEST_CASE("modified event count is Poisson(q0 s)") {
  const auto g = hundred_vertex_graph();
  const double s = 0.05;
  std::vector<double> counts;
  std::int64_t q0 = 0;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    const auto st = run_modified(g, s, seed_stream(10, r));
    q0 = st.q0;
    counts.push_back(static_cast<double>(st.events.size()));
  }
  const double mu = static_cast<double>(q0) * s;
  const auto m = mean_se(counts);
  CHECK(std::abs(m.mean - mu) <= 3.0 * std::sqrt(mu / 20000.0));
  CHECK(m.variance == doctest::Approx(mu).epsilon(0.05));
}

TEST_CASE("a single pair: coupled processes agree up to the first event") {
  const auto g = matched({1, 1}, {1, 1}, 1);
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto c = run_coupled(g, 3.0, r);
    if (c.modified_state.events.empty()) continue;
    REQUIRE(c.dynamic_state.events.size() == 1);
    CHECK(c.dynamic_state.events[0].time == c.modified_state.events[0].time);
  }
}

TEST_CASE("coupled dynamic sizes refine the modified sizes") {
  const auto g = hundred_vertex_graph();
  for (std::uint64_t r = 0; r < 200; ++r) {
    const auto c = run_coupled(g, 1.5, r);
    REQUIRE_NOTHROW(c.dynamic_state.check());
    const auto dyn = components_with(g, c.dynamic_state.black_edges());
    const auto mod = components_with(g, c.modified_state.black_edges());
    // Every dynamic component lies inside one modified component.
    std::vector<std::size_t> label(g.vertex_count());
    for (std::size_t k = 0; k < mod.size(); ++k) {
      for (VertexId v : mod[k].members) label[v] = k;
    }
    double sd = 0, sm = 0;
    for (const auto& comp : dyn) {
      for (VertexId v : comp.members) REQUIRE(label[v] == label[comp.members.front()]);
      sd += static_cast<double>(comp.size * comp.size);
    }
    for (const auto& comp : mod) sm += static_cast<double>(comp.size * comp.size);
    REQUIRE(sd <= sm);
  }
}

TEST_CASE("Q trajectory with zero horizon") {
  const auto g = hundred_vertex_graph();
  const auto rep = q_trajectory_check(g, 1.0, 0.0, 0.1, 20, 1);
  CHECK(rep.mean_sup_deviation == 0.0);
  CHECK(rep.exceedance_rate == 0.0);
}

TEST_CASE("Q trajectory at n = 1e4") {
  const auto scaling = make_scaling(10000, 3.5);
  const auto seq = build_degree_sequence(scaling, power_law_limits(3.5, 10, 0.6, 0.3, 2.0), 10,
                                         default_white_bulk(), default_black_bulk(), 5);
  const auto g = ColoredMultigraph::from_degrees(seq);
  const auto rep = q_trajectory_check(g, scaling.c, 1.0, std::pow(10000.0, -0.4), 400, 6, 2);
  INFO("exceedance " << rep.exceedance_rate << " bound " << rep.bound << " mean " << rep.mean_at_one
                     << " expected " << rep.expected_at_one);
  CHECK(rep.exceedance_ok);
  CHECK(rep.mean_ok);
  CHECK(rep.expected_at_one == doctest::Approx(static_cast<double>(rep.q0) / 10000.0 * std::exp(-1.0)));
}

TEST_CASE("edge probability at zero time") {
  const auto g = matched({1, 1, 2}, {1, 1, 2}, 1);
  const auto est = edge_probability_estimate(g, {0}, {1}, 0.0, 100, 1);
  CHECK(est.estimate == 0.0);
  CHECK_THROWS(edge_probability_estimate(g, {0}, {0, 1}, 1.0, 10, 1));
}

TEST_CASE("edge probability between two singletons in a two-pair system") {
  // Four black half-edges: one on u, one on v, two on w. Enumerating the
  // pairing orders gives (1/6)(P(E1 <= s) + P(E1 + E2 <= s)) = (1 - e^{-s}) / 3.
  const auto g = matched({1, 1, 2}, {1, 1, 2}, 1);
  const double s = 1.2;
  const double p = (1.0 - std::exp(-s)) / 3.0;
  const auto est = edge_probability_estimate(g, {0}, {1}, s, 100000, 2, 2);
  CHECK(std::abs(est.estimate - p) <= 3.0 * std::sqrt(p * (1.0 - p) / 100000.0));
}

TEST_CASE("event csv") {
  PercolationState st;
  st.events = {{0.5, 3, 7}};
  std::ostringstream os;
  write_event_csv(os, st);
  CHECK(os.str() == "time,half_edge_a,half_edge_b\n0.5,3,7\n");
}
