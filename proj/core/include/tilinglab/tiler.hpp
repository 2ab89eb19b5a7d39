#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tilinglab/mpgraph.hpp"

namespace tilinglab::tiler {

/// A transversal K_r copy: index_per_part[p] is the vertex chosen in part p.
struct KrCopy {
  std::vector<std::int32_t> index_per_part;

  friend auto operator<=>(const KrCopy&, const KrCopy&) = default;
};

struct Tiling {
  std::vector<KrCopy> copies;

  std::size_t covered_count(int r) const {
    return copies.size() * static_cast<std::size_t>(r);
  }
  std::size_t leftover_per_class(int n) const {
    return static_cast<std::size_t>(n) - copies.size();
  }
  bool perfect(int n) const {
    return copies.size() == static_cast<std::size_t>(n);
  }
};

struct EnumerationResult {
  std::vector<KrCopy> copies;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultCliqueCap = 5'000'000;

/// All transversal cliques, in lexicographic order of their index vectors,
/// truncated at `cap` with the truncation flag set.
EnumerationResult enumerate_kr(const PartiteGraph& g,
                               std::size_t cap = kDefaultCliqueCap);

enum class SearchStatus { Perfect, NoTiling, BudgetExceeded };

struct TilingSearchResult {
  SearchStatus status = SearchStatus::NoTiling;
  Tiling tiling;                 // filled when status == Perfect
  std::uint64_t expansions = 0;  // clique placements tried
  std::size_t clique_count = 0;
  bool enumeration_truncated = false;
};

/// Exact-cover search over enumerated cliques with most-constrained-vertex
/// branching (ties to the lowest (part, index)). NoTiling is only reported
/// after an exhaustive search over an untruncated enumeration.
TilingSearchResult exact_perfect_tiling(const PartiteGraph& g,
                                        std::uint64_t budget = 5'000'000,
                                        std::size_t clique_cap = kDefaultCliqueCap);

/// Repeatedly picks a uniformly random transversal clique among the still
/// uncovered vertices until none remains.
Tiling greedy_partial_tiling(const PartiteGraph& g, std::uint64_t seed,
                             std::size_t clique_cap = kDefaultCliqueCap);

struct HallResult {
  bool perfect = false;
  /// Matched right index per left vertex (-1 when unmatched).
  std::vector<std::int32_t> match;
  /// When not perfect: a Hall violator S (left indices) with |N(S)| < |S|.
  std::vector<std::uint32_t> witness;
  std::vector<std::uint32_t> witness_neighborhood;
};

/// Augmenting-path perfect matching in a bipartite graph given by per-left
/// adjacency lists, or a Hall-condition witness when none exists.
HallResult hall_perfect_matching(std::size_t n_left, std::size_t n_right,
                                 const std::vector<std::vector<std::uint32_t>>& adj);

struct HyperMatchResult {
  SearchStatus status = SearchStatus::NoTiling;
  std::vector<std::size_t> edge_ids;  // chosen hyperedges when Perfect
  std::uint64_t expansions = 0;
};

/// Exact perfect-matching search in a k-partite k-uniform hypergraph whose
/// sides all have `side_size` vertices. Hyperedges are flat k-tuples of
/// per-side indices.
HyperMatchResult exact_hypergraph_matching(int arity, int side_size,
                                           std::span<const std::uint32_t> edges,
                                           std::uint64_t budget = 5'000'000);

/// Independent checker: one vertex per part, all pairs adjacent, copies
/// disjoint, and (when require_perfect) full coverage.
bool validate_tiling(const PartiteGraph& g, const Tiling& tiling,
                     bool require_perfect, std::string* why = nullptr);

/// Order-independent 64-bit digest of a tiling (copies are sorted first).
std::uint64_t tiling_digest(const Tiling& tiling);

}  // namespace tilinglab::tiler
