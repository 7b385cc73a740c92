#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/graph.hpp"

using namespace hcm;

namespace {

ColoredMultigraph manual(const std::vector<int>& white, const std::vector<std::pair<HalfEdgeId, HalfEdgeId>>& pairs) {
  auto g = ColoredMultigraph::from_degrees(white, std::vector<int>(white.size(), 0));
  for (const auto& [a, b] : pairs) g.pair(a, b);
  g.set_white_matched();
  check_matching_invariants(g);
  return g;
}

bool within(double p_hat, double p, double R, double sigmas) {
  return std::abs(p_hat - p) <= sigmas * std::sqrt(p * (1.0 - p) / R);
}

}  // namespace

TEST_CASE("single vertex of degree two forms a self-loop") {
  const auto g = sample_white_matching(ColoredMultigraph::from_degrees({2}, {0}), 3);
  CHECK(g.partner(0) == 1);
  const auto comps = components(g);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].surplus == 1);
  CHECK(comps[0].white_edges == 1);
}

TEST_CASE("two degree-one vertices form one edge") {
  const auto g = sample_white_matching(ColoredMultigraph::from_degrees({1, 1}, {0, 0}), 3);
  CHECK(g.partner(0) == 1);
  const auto comps = components(g);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].size == 2);
}

TEST_CASE("self-loop frequency at the degree-two vertex of (2,1,1)") {
  // Three matchings of four half-edges; one pairs the two stubs of vertex 0.
  const double p = 1.0 / 3.0;
  const auto base = ColoredMultigraph::from_degrees({2, 1, 1}, {0, 0, 0});
  const int R = 100000;
  int loops = 0;
  for (int r = 0; r < R; ++r) {
    const auto g = sample_white_matching(base, seed_stream(11, static_cast<std::uint64_t>(r)));
    loops += g.partner(0) == 1;
  }
  CHECK(within(loops / static_cast<double>(R), p, R, 3.0));
}

TEST_CASE("components partition the vertex set") {
  const auto base = ColoredMultigraph::from_degrees({2, 2, 2}, {0, 0, 0});
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto comps = components(sample_white_matching(base, s));
    std::vector<VertexId> all;
    for (const auto& c : comps) all.insert(all.end(), c.members.begin(), c.members.end());
    std::sort(all.begin(), all.end());
    REQUIRE(all == std::vector<VertexId>{0, 1, 2});
  }
}

TEST_CASE("path on three vertices") {
  // Half-edges: v0 {0}, v1 {1, 2}, v2 {3}.
  const auto g = manual({1, 2, 1}, {{0, 1}, {2, 3}});
  const auto comps = components(g);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].size == 3);
  CHECK(comps[0].white_edges == 2);
  CHECK(comps[0].surplus == 0);
}

TEST_CASE("double edge has surplus one") {
  const auto g = manual({2, 2}, {{0, 2}, {1, 3}});
  const auto comps = components(g);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].size == 2);
  CHECK(comps[0].white_edges == 2);
  CHECK(comps[0].surplus == 1);
  CHECK(comps[0].size == comps[0].white_edges + 1 - comps[0].surplus);
}

TEST_CASE("Euler relation and union-find agreement on random graphs") {
  const auto scaling = make_scaling(500, 3.5);
  const auto seq = build_degree_sequence(scaling, power_law_limits(3.5, 5, 0.6, 0.5, 2.0), 5,
                                         default_white_bulk(), default_black_bulk(), 8);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto g = sample_white_matching(seq, s);
    const auto comps = components(g);
    const auto sizes = component_sizes(g);
    REQUIRE(comps.size() == sizes.size());
    std::int64_t black = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      REQUIRE(comps[k].size == sizes[k]);
      REQUIRE(comps[k].size == comps[k].white_edges + 1 - comps[k].surplus);
      black += comps[k].black_half_edges;
    }
    REQUIRE(black == seq.black_total());
  }
}

TEST_CASE("matching invariants hold for both colors") {
  auto g = ColoredMultigraph::from_degrees({3, 1, 2, 2}, {1, 1, 2, 0});
  g = sample_white_matching(g, 4);
  CHECK_FALSE(g.has_black_matching());
  g = sample_black_matching(g, 5);
  CHECK_NOTHROW(check_matching_invariants(g));
  for (HalfEdgeId h = 0; h < g.half_edge_count(); ++h) CHECK(g.color(g.partner(h)) == g.color(h));
  CHECK(g.edges(Color::kWhite).size() == 4);
  CHECK(g.edges(Color::kBlack).size() == 2);
}

TEST_CASE("odd half-edge count is rejected") {
  CHECK_THROWS_AS(sample_white_matching(ColoredMultigraph::from_degrees({1, 2}, {0, 0}), 1), std::invalid_argument);
}

TEST_CASE("percolation with p = 0 and p = 1") {
  auto g = sample_white_matching(ColoredMultigraph::from_degrees({1, 1, 1, 1, 2}, {1, 1, 2, 0, 2}), 1);
  g = sample_black_matching(g, 2);
  const auto white_only = components(g);
  const auto none = percolated_components(percolate_black(g, 0.0, 3));
  REQUIRE(none.size() == white_only.size());
  for (std::size_t k = 0; k < none.size(); ++k) CHECK(none[k].members == white_only[k].members);
  const auto all = percolate_black(g, 1.0, 3);
  for (const auto& [a, b] : all.edges(Color::kBlack)) CHECK(all.black_retained(a));
  CHECK_THROWS(percolate_black(g, 1.5, 3));
}

TEST_CASE("one black edge between two components is kept half the time") {
  // Two white edges {0,1} and {2,3}; vertices 1 and 2 carry one black stub each.
  auto g = ColoredMultigraph::from_degrees({1, 1, 1, 1}, {0, 1, 1, 0});
  g.pair(0, 1);
  g.pair(2, 3);
  g.set_white_matched();
  g = sample_black_matching(g, 1);
  const int R = 100000;
  int merged = 0;
  for (int r = 0; r < R; ++r) {
    merged += percolated_components(percolate_black(g, 0.5, seed_stream(3, static_cast<std::uint64_t>(r)))).size() == 1;
  }
  CHECK(within(merged / static_cast<double>(R), 0.5, R, 3.0));
}

TEST_CASE("extra black edges join components") {
  auto g = ColoredMultigraph::from_degrees({1, 1, 1, 1}, {0, 1, 1, 0});
  g.pair(0, 1);
  g.pair(2, 3);
  g.set_white_matched();
  const std::vector<std::pair<HalfEdgeId, HalfEdgeId>> extra{{4, 5}};
  const auto comps = components_with(g, extra);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].black_edges == 1);
  CHECK(component_sizes(g, extra) == std::vector<std::int64_t>{4});
}

TEST_CASE("shuffle is a permutation") {
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = i;
  Rng rng(9);
  shuffle(v, rng);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("edge csv lists both colors") {
  auto g = sample_white_matching(ColoredMultigraph::from_degrees({1, 1}, {1, 1}), 1);
  g = sample_black_matching(g, 1);
  std::ostringstream os;
  write_edge_csv(os, g);
  CHECK(os.str() == "half_edge_a,half_edge_b,color\n0,1,white\n2,3,black_dropped\n");
}
