#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tilinglab/mpgraph.hpp"
#include "tilinglab/tiler.hpp"

namespace tilinglab::absorber {

/// A hyperedge of the auxiliary hypergraph: one vertex index per host part
/// 2..r (0-based parts 1..r-1), in part order.
using HyperEdge = std::vector<std::uint32_t>;

/// The (r-1)-partite (r-1)-uniform hypergraph F_X of tuples across parts
/// 2..r whose common neighborhood inside X (a subset of V_1) meets the
/// (d/2)^{r-1} |X| floor.
struct AuxHypergraph {
  int r = 0;
  int n = 0;
  std::vector<std::vector<std::uint32_t>> sides;  // per part 1..r-1
  std::vector<HyperEdge> edges;
  double threshold = 0.0;                // (d/2)^{r-1} |X|
  std::vector<std::uint32_t> base_set;   // X, indices into part 0

  std::size_t edge_count() const { return edges.size(); }
  /// degree of a vertex (host part in [1, r-1], host index) in this hypergraph
  std::size_t degree(int part, std::uint32_t index) const;
  bool contains(const HyperEdge& e) const;
};

inline constexpr std::size_t kDefaultTupleCap = 10'000'000;

/// Builds F_X exhaustively over the side tuple space (full parts when
/// `sides` is empty). Throws TupleSpaceTooLarge above the cap.
AuxHypergraph build_aux_hypergraph(
    const PartiteGraph& g, const std::vector<std::uint32_t>& x, double d,
    const std::vector<std::vector<std::uint32_t>>& sides = {},
    std::size_t cap = kDefaultTupleCap);

/// Keeps a hyperedge iff all C(r-1,2) pairs among its vertices are edges of
/// g_random.
AuxHypergraph reveal_hyperedges(const AuxHypergraph& f,
                                const PartiteGraph& g_random);

struct GreedyMatchResult {
  bool reached_target = false;
  std::vector<HyperEdge> matching;  // partial when stalled
};

/// Draws uniformly random pairwise-disjoint hyperedges until `target` are
/// chosen or none remain.
GreedyMatchResult random_greedy_matching(const AuxHypergraph& f_tilde,
                                         std::size_t target,
                                         std::uint64_t seed);

/// B(V_1, M): left vertices are all of V_1; (v, m) is an edge iff v is
/// host-adjacent to every vertex of m.
struct AuxBipartite {
  std::vector<std::vector<std::uint32_t>> adj;  // per V_1 index: matching ids
  std::vector<HyperEdge> right;
};

AuxBipartite build_aux_bipartite(const PartiteGraph& g,
                                 const std::vector<HyperEdge>& matching);

/// |{m in M : m not in f_x}|.
std::size_t count_good_edge_deficit(const std::vector<HyperEdge>& matching,
                                    const AuxHypergraph& f_x);

struct PipelineConfig {
  double d = 0.0;
  double delta = 0.0;  // matching deficiency fraction, 0 < delta <= d/2
  double p = 0.0;      // random edge probability (split p/2 + p/2)
  std::uint64_t seed = 0;
  std::uint64_t match_budget = 5'000'000;
};

enum class PipelineStage {
  None,
  GreedyStall,
  NoMPrime,
  GreedyV1Exhausted,
  HallDeficient,
};

const char* pipeline_stage_name(PipelineStage stage);

struct PipelineTrace {
  std::size_t f_edges = 0;
  std::size_t f_tilde_edges = 0;
  std::size_t m_target = 0;
  std::size_t m_size = 0;
  std::size_t leftover_per_side = 0;
  std::size_t f_prime_edges = 0;
  std::size_t f_tilde_prime_edges = 0;
  std::size_t m_prime_size = 0;
  std::size_t g1_edges = 0;
  std::size_t g2_edges = 0;
  bool hall_perfect = false;
};

struct PipelineResult {
  bool perfect = false;
  PipelineStage failed_stage = PipelineStage::None;
  tiler::Tiling tiling;
  PipelineTrace trace;
  /// g_star with both revealed random rounds, the graph any claimed tiling
  /// must re-validate against.
  PartiteGraph revealed_union;
  std::vector<std::uint32_t> hall_witness;  // V_1 indices when HallDeficient
};

/// End-to-end perfect K_r-tiling heuristic on a star host: two p/2 reveals
/// on parts 2..r, random greedy matching to (1-delta)n, exact matching on
/// the leftovers, greedy V_1 extension, Hall matching of the rest.
PipelineResult star_tiling_pipeline(const PartiteGraph& g_star,
                                    const PipelineConfig& cfg);

}  // namespace tilinglab::absorber
