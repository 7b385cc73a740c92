#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "hcm/degree_model.hpp"

namespace hcm {

using VertexId = std::uint32_t;
using HalfEdgeId = std::uint32_t;
inline constexpr HalfEdgeId kUnpaired = std::numeric_limits<HalfEdgeId>::max();

enum class Color : std::uint8_t { kWhite = 0, kBlack = 1 };

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  // Returns false when x and y were already joined.
  bool unite(std::size_t x, std::size_t y);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint32_t> rank_;
};

// Vertices with colored half-edges. White half-edge ids occupy [0, lw) and
// black ids [lw, lw + lb); each vertex owns a contiguous run of each color.
class ColoredMultigraph {
 public:
  ColoredMultigraph() = default;
  static ColoredMultigraph from_degrees(const std::vector<int>& white, const std::vector<int>& black);
  static ColoredMultigraph from_degrees(const DegreeSequence& seq) {
    return from_degrees(seq.white, seq.black);
  }

  std::size_t vertex_count() const { return white_begin_.empty() ? 0 : white_begin_.size() - 1; }
  std::size_t white_half_edges() const { return white_total_; }
  std::size_t black_half_edges() const { return owner_.size() - white_total_; }
  std::size_t half_edge_count() const { return owner_.size(); }

  VertexId owner(HalfEdgeId h) const { return owner_[h]; }
  Color color(HalfEdgeId h) const { return h < white_total_ ? Color::kWhite : Color::kBlack; }
  HalfEdgeId partner(HalfEdgeId h) const { return partner_[h]; }

  int white_degree(VertexId v) const { return static_cast<int>(white_begin_[v + 1] - white_begin_[v]); }
  int black_degree(VertexId v) const { return static_cast<int>(black_begin_[v + 1] - black_begin_[v]); }
  HalfEdgeId first_white(VertexId v) const { return white_begin_[v]; }
  HalfEdgeId first_black(VertexId v) const { return static_cast<HalfEdgeId>(white_total_ + black_begin_[v]); }

  bool has_white_matching() const { return white_matched_; }
  bool has_black_matching() const { return black_matched_; }
  // Retention flag of the black edge containing h (meaningful once black is matched).
  bool black_retained(HalfEdgeId h) const { return retained_[h - white_total_] != 0; }

  // Mutators used by the samplers.
  void pair(HalfEdgeId a, HalfEdgeId b);
  void set_white_matched() { white_matched_ = true; }
  void set_black_matched() { black_matched_ = true; }
  void set_black_retained(HalfEdgeId h, bool keep);

  // Each matched edge once, as (smaller id, larger id), increasing.
  std::vector<std::pair<HalfEdgeId, HalfEdgeId>> edges(Color c) const;

 private:
  std::vector<VertexId> owner_;
  std::vector<HalfEdgeId> partner_;
  std::vector<std::uint32_t> white_begin_;
  std::vector<std::uint32_t> black_begin_;
  std::vector<std::uint8_t> retained_;
  std::size_t white_total_ = 0;
  bool white_matched_ = false;
  bool black_matched_ = false;
};

struct ComponentSummary {
  std::vector<VertexId> members;  // increasing
  std::int64_t size = 0;
  std::int64_t black_half_edges = 0;
  std::int64_t white_edges = 0;
  std::int64_t black_edges = 0;  // only when black edges are included
  std::int64_t surplus = 0;
};

// In-place uniform shuffle (Fisher-Yates) driven by the portable index sampler.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// G_n(0): uniform white matching, black half-edges unpaired.
ColoredMultigraph sample_white_matching(const DegreeSequence& seq, std::uint64_t seed);
ColoredMultigraph sample_white_matching(ColoredMultigraph g, std::uint64_t seed);
// Adds a uniform black matching; every black edge starts not retained.
ColoredMultigraph sample_black_matching(ColoredMultigraph g, std::uint64_t seed);
// Retains each black edge independently with probability p.
ColoredMultigraph percolate_black(ColoredMultigraph g, double p, std::uint64_t seed);

// Components under white edges only.
std::vector<ComponentSummary> components(const ColoredMultigraph& g);
// Components under white edges plus retained black edges.
std::vector<ComponentSummary> percolated_components(const ColoredMultigraph& g);
// Components under white edges plus the given black edges.
std::vector<ComponentSummary> components_with(const ColoredMultigraph& g,
                                              std::span<const std::pair<HalfEdgeId, HalfEdgeId>> black_edges);
// Sizes only, sorted non-increasing; cheaper than full summaries.
std::vector<std::int64_t> component_sizes(const ColoredMultigraph& g,
                                          std::span<const std::pair<HalfEdgeId, HalfEdgeId>> black_edges = {});

void check_matching_invariants(const ColoredMultigraph& g);

// Columns half_edge_a, half_edge_b, color (white|black). Black edges are
// written only when matched; unretained black edges are marked black_dropped.
void write_edge_csv(std::ostream& out, const ColoredMultigraph& g);

}  // namespace hcm
