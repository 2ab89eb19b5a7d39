#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tilinglab/bitset.hpp"
#include "tilinglab/error.hpp"

namespace tilinglab {

/// A vertex of a balanced r-partite graph. Parts and indices are 0-based in
/// the API; the text format is 1-based and the serializer converts.
struct VertexRef {
  int part = 0;
  int index = 0;

  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

struct PairStats {
  double density = 0.0;       // e(A,B) / (|A| |B|)
  std::size_t edges = 0;
  std::size_t min_degree_ab = 0;  // min over a in V_i of deg(a, V_j)
  std::size_t min_degree_ba = 0;
};

/// Balanced r-partite graph with cross-part-only adjacency. Immutable after
/// construction; union produces a new graph, so instances can be shared
/// read-only across concurrent trial workers.
///
/// Adjacency is stored as one n-bit row per (vertex, part) pair, keeping
/// common-neighbor intersections word-aligned.
class PartiteGraph {
 public:
  PartiteGraph() = default;
  PartiteGraph(int r, int n,
               std::span<const std::pair<VertexRef, VertexRef>> edges);

  int parts() const { return r_; }
  int part_size() const { return n_; }
  std::size_t vertex_count() const { return static_cast<std::size_t>(r_) * n_; }
  std::size_t edge_count() const { return edge_count_; }

  bool adjacent(VertexRef u, VertexRef v) const {
    check_ref(u);
    check_ref(v);
    if (u.part == v.part) return false;
    return row(u, v.part).test(static_cast<std::size_t>(v.index));
  }

  /// Neighbors of v inside the given part, as an n-bit row.
  const Bitset& neighbors(VertexRef v, int target_part) const {
    check_ref(v);
    check_part(target_part);
    return row(v, target_part);
  }

  std::size_t degree(VertexRef v, int target_part) const {
    return neighbors(v, target_part).count();
  }

  std::size_t min_cross_degree() const;

  /// All vertices of target_part adjacent to every vertex of s.
  /// common_neighbors({}, t) is the whole part.
  Bitset common_neighbors(std::span<const VertexRef> s, int target_part) const;

  PairStats pair_stats(int part_a, int part_b) const;

  /// Balanced induced subgraph: keep[i] lists the (sorted, distinct) vertex
  /// indices retained from part i; all parts must keep the same count.
  PartiteGraph induced(const std::vector<std::vector<std::uint32_t>>& keep) const;

  std::string serialize() const;
  static PartiteGraph deserialize(std::string_view text);

  friend PartiteGraph graph_union(const PartiteGraph& g, const PartiteGraph& h);

  bool operator==(const PartiteGraph& other) const;

 private:
  void check_part(int part) const {
    if (part < 0 || part >= r_)
      throw Error(ErrorCode::IndexOutOfRange,
                  "part " + std::to_string(part) + " outside [0," +
                      std::to_string(r_) + ")");
  }
  void check_ref(VertexRef v) const {
    if (v.part < 0 || v.part >= r_ || v.index < 0 || v.index >= n_)
      throw Error(ErrorCode::IndexOutOfRange,
                  "vertex " + std::to_string(v.part) + ":" +
                      std::to_string(v.index));
  }

  Bitset& row(VertexRef v, int target_part) {
    return adj_[(static_cast<std::size_t>(v.part) * n_ + v.index) * r_ +
                target_part];
  }
  const Bitset& row(VertexRef v, int target_part) const {
    return adj_[(static_cast<std::size_t>(v.part) * n_ + v.index) * r_ +
                target_part];
  }

  void add_edge_unchecked(VertexRef u, VertexRef v);

  int r_ = 0;
  int n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<Bitset> adj_;
};

/// Builds a graph from explicit edges; rejects intra-part pairs and
/// out-of-range indices. Duplicate edges collapse.
PartiteGraph build_graph(int r, int n,
                         std::span<const std::pair<VertexRef, VertexRef>> edges);

PartiteGraph graph_union(const PartiteGraph& g, const PartiteGraph& h);

}  // namespace tilinglab
