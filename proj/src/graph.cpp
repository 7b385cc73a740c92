#include "hcm/graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hcm/errors.hpp"

namespace hcm {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (rank_[x] < rank_[y]) std::swap(x, y);
  parent_[y] = x;
  if (rank_[x] == rank_[y]) ++rank_[x];
  return true;
}

ColoredMultigraph ColoredMultigraph::from_degrees(const std::vector<int>& white,
                                                  const std::vector<int>& black) {
  if (white.size() != black.size()) throw std::invalid_argument("white/black length mismatch");
  ColoredMultigraph g;
  const std::size_t n = white.size();
  g.white_begin_.assign(n + 1, 0);
  g.black_begin_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (white[v] < 0 || black[v] < 0) throw std::invalid_argument("negative degree");
    g.white_begin_[v + 1] = g.white_begin_[v] + static_cast<std::uint32_t>(white[v]);
    g.black_begin_[v + 1] = g.black_begin_[v] + static_cast<std::uint32_t>(black[v]);
  }
  g.white_total_ = g.white_begin_[n];
  const std::size_t total = g.white_total_ + g.black_begin_[n];
  g.owner_.resize(total);
  for (std::size_t v = 0; v < n; ++v) {
    for (auto h = g.white_begin_[v]; h < g.white_begin_[v + 1]; ++h) g.owner_[h] = static_cast<VertexId>(v);
    for (auto h = g.black_begin_[v]; h < g.black_begin_[v + 1]; ++h) {
      g.owner_[g.white_total_ + h] = static_cast<VertexId>(v);
    }
  }
  g.partner_.assign(total, kUnpaired);
  g.retained_.assign(g.black_begin_[n], 0);
  return g;
}

void ColoredMultigraph::pair(HalfEdgeId a, HalfEdgeId b) {
  partner_[a] = b;
  partner_[b] = a;
}

void ColoredMultigraph::set_black_retained(HalfEdgeId h, bool keep) {
  retained_[h - white_total_] = keep ? 1 : 0;
  retained_[partner_[h] - white_total_] = keep ? 1 : 0;
}

std::vector<std::pair<HalfEdgeId, HalfEdgeId>> ColoredMultigraph::edges(Color c) const {
  std::vector<std::pair<HalfEdgeId, HalfEdgeId>> out;
  const HalfEdgeId lo = c == Color::kWhite ? 0 : static_cast<HalfEdgeId>(white_total_);
  const HalfEdgeId hi = c == Color::kWhite ? static_cast<HalfEdgeId>(white_total_)
                                           : static_cast<HalfEdgeId>(owner_.size());
  for (HalfEdgeId h = lo; h < hi; ++h) {
    if (partner_[h] != kUnpaired && h < partner_[h]) out.emplace_back(h, partner_[h]);
  }
  return out;
}

namespace {

void match_range(ColoredMultigraph& g, HalfEdgeId lo, HalfEdgeId hi, Rng& rng) {
  if ((hi - lo) % 2 != 0) throw std::invalid_argument("odd number of half-edges; parity violated");
  std::vector<HalfEdgeId> ids(hi - lo);
  std::iota(ids.begin(), ids.end(), lo);
  shuffle(ids, rng);
  for (std::size_t i = 0; i + 1 < ids.size(); i += 2) g.pair(ids[i], ids[i + 1]);
}

}  // namespace

ColoredMultigraph sample_white_matching(ColoredMultigraph g, std::uint64_t seed) {
  Rng rng(seed);
  match_range(g, 0, static_cast<HalfEdgeId>(g.white_half_edges()), rng);
  g.set_white_matched();
  check_matching_invariants(g);
  return g;
}

ColoredMultigraph sample_white_matching(const DegreeSequence& seq, std::uint64_t seed) {
  return sample_white_matching(ColoredMultigraph::from_degrees(seq), seed);
}

ColoredMultigraph sample_black_matching(ColoredMultigraph g, std::uint64_t seed) {
  Rng rng(seed);
  match_range(g, static_cast<HalfEdgeId>(g.white_half_edges()),
              static_cast<HalfEdgeId>(g.half_edge_count()), rng);
  g.set_black_matched();
  check_matching_invariants(g);
  return g;
}

ColoredMultigraph percolate_black(ColoredMultigraph g, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("keep probability must lie in [0,1]");
  if (!g.has_black_matching()) throw std::invalid_argument("percolate_black needs a black matching");
  Rng rng(seed);
  for (const auto& [a, b] : g.edges(Color::kBlack)) g.set_black_retained(a, uniform01(rng) < p);
  return g;
}

namespace {

std::vector<ComponentSummary> summarize(const ColoredMultigraph& g, bool retained_black,
                                        std::span<const std::pair<HalfEdgeId, HalfEdgeId>> extra) {
  const std::size_t n = g.vertex_count();
  UnionFind uf(n);
  std::vector<std::pair<VertexId, bool>> closing;  // cycle-closing edges, attributed by root later
  auto add = [&](HalfEdgeId a, HalfEdgeId b, bool black) {
    const VertexId u = g.owner(a), v = g.owner(b);
    if (!uf.unite(u, v)) closing.emplace_back(u, black);
  };
  for (const auto& [a, b] : g.edges(Color::kWhite)) add(a, b, false);
  std::vector<std::pair<VertexId, bool>> black_edge_at;
  if (retained_black) {
    for (const auto& [a, b] : g.edges(Color::kBlack)) {
      if (g.black_retained(a)) {
        add(a, b, true);
        black_edge_at.emplace_back(g.owner(a), true);
      }
    }
  }
  for (const auto& [a, b] : extra) {
    add(a, b, true);
    black_edge_at.emplace_back(g.owner(a), true);
  }

  std::vector<std::int64_t> slot(n, -1);
  std::vector<ComponentSummary> out;
  for (VertexId v = 0; v < n; ++v) {
    const std::size_t r = uf.find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int64_t>(out.size());
      out.emplace_back();
    }
    auto& c = out[static_cast<std::size_t>(slot[r])];
    c.members.push_back(v);
    c.size += 1;
    c.black_half_edges += g.black_degree(v);
    c.white_edges += g.white_degree(v);  // halved below
  }
  for (auto& c : out) c.white_edges /= 2;
  for (const auto& [v, black] : black_edge_at) out[static_cast<std::size_t>(slot[uf.find(v)])].black_edges += 1;
  for (const auto& [v, black] : closing) out[static_cast<std::size_t>(slot[uf.find(v)])].surplus += 1;
  // Members were appended in increasing vertex order, so members[0] is the smallest id.
  std::stable_sort(out.begin(), out.end(), [](const ComponentSummary& x, const ComponentSummary& y) {
    if (x.size != y.size) return x.size > y.size;
    return x.members.front() < y.members.front();
  });
  return out;
}

}  // namespace

std::vector<ComponentSummary> components(const ColoredMultigraph& g) {
  if (!g.has_white_matching()) throw std::invalid_argument("components needs a white matching");
  return summarize(g, false, {});
}

std::vector<ComponentSummary> percolated_components(const ColoredMultigraph& g) {
  if (!g.has_white_matching()) throw std::invalid_argument("components needs a white matching");
  return summarize(g, g.has_black_matching(), {});
}

std::vector<ComponentSummary> components_with(const ColoredMultigraph& g,
                                              std::span<const std::pair<HalfEdgeId, HalfEdgeId>> black_edges) {
  if (!g.has_white_matching()) throw std::invalid_argument("components needs a white matching");
  return summarize(g, false, black_edges);
}

std::vector<std::int64_t> component_sizes(const ColoredMultigraph& g,
                                          std::span<const std::pair<HalfEdgeId, HalfEdgeId>> black_edges) {
  const std::size_t n = g.vertex_count();
  UnionFind uf(n);
  for (HalfEdgeId h = 0; h < g.white_half_edges(); ++h) {
    const HalfEdgeId p = g.partner(h);
    if (p != kUnpaired && h < p) uf.unite(g.owner(h), g.owner(p));
  }
  for (const auto& [a, b] : black_edges) uf.unite(g.owner(a), g.owner(b));
  std::vector<std::int64_t> count(n, 0);
  for (VertexId v = 0; v < n; ++v) count[uf.find(v)] += 1;
  std::vector<std::int64_t> sizes;
  for (auto c : count) {
    if (c > 0) sizes.push_back(c);
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

void check_matching_invariants(const ColoredMultigraph& g) {
  for (HalfEdgeId h = 0; h < g.half_edge_count(); ++h) {
    const HalfEdgeId p = g.partner(h);
    if (p == kUnpaired) continue;
    ensure(p != h, "matching has a fixed point");
    ensure(g.partner(p) == h, "matching is not an involution");
    ensure(g.color(p) == g.color(h), "matching pairs different colors");
  }
  if (g.has_white_matching()) {
    for (HalfEdgeId h = 0; h < g.white_half_edges(); ++h) ensure(g.partner(h) != kUnpaired, "unpaired white half-edge");
  }
  if (g.has_black_matching()) {
    for (auto h = static_cast<HalfEdgeId>(g.white_half_edges()); h < g.half_edge_count(); ++h) {
      ensure(g.partner(h) != kUnpaired, "unpaired black half-edge");
    }
  }
}

void write_edge_csv(std::ostream& out, const ColoredMultigraph& g) {
  out << "half_edge_a,half_edge_b,color\n";
  for (const auto& [a, b] : g.edges(Color::kWhite)) out << a << ',' << b << ",white\n";
  for (const auto& [a, b] : g.edges(Color::kBlack)) {
    out << a << ',' << b << (g.black_retained(a) ? ",black\n" : ",black_dropped\n");
  }
}

}  // namespace hcm
