#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tilinglab/mpgraph.hpp"

namespace tilinglab::reg {

/// A set of vertices inside one part, by index.
struct VertexSet {
  int part = 0;
  std::vector<std::uint32_t> indices;
};

struct RegularityParams {
  double epsilon = 0.0;
  double d = 0.0;
};

enum class CheckMode { Exhaustive, Sampled };

struct SubsetWitness {
  std::vector<std::uint32_t> x;  // indices into the A part
  std::vector<std::uint32_t> y;  // indices into the B part
  double density = 0.0;
};

struct RegularityReport {
  double base_density = 0.0;
  /// Largest downward deviation base_density - d(X,Y) seen over examined
  /// subset pairs (the side super-regularity constrains).
  double worst_deviation_found = 0.0;
  std::optional<SubsetWitness> density_witness;  // some d(X,Y) <= d
  std::optional<VertexRef> degree_witness;       // deg into the other set <= d|set|
  CheckMode mode = CheckMode::Exhaustive;
  std::size_t samples_taken = 0;
  bool ok = true;
};

/// Checks the (epsilon,d)-super-regularity of the pair (A,B): the degree
/// condition exactly, the subset-density condition either exhaustively
/// (|A|,|B| <= 14) or by sampling subset pairs at the threshold sizes
/// ceil(eps|A|), ceil(eps|B|). The verdict is one-sided: false certain
/// (witness attached), true means no violation found.
RegularityReport check_superregular(const PartiteGraph& g, const VertexSet& a,
                                    const VertexSet& b,
                                    const RegularityParams& params,
                                    CheckMode mode, std::size_t samples = 2000,
                                    std::uint64_t seed = 0);

/// |{v in A : deg(v, Y) < threshold}|.
std::size_t low_degree_count(const PartiteGraph& g, const VertexSet& a,
                             const VertexSet& y, std::size_t threshold);

/// From each cluster removes every vertex whose degree into some J-adjacent
/// cluster is below (d - eps) times that cluster's size, then pads the
/// removal with highest-index vertices so every output cluster has exactly
/// target_size vertices. J holds index pairs into `clusters`.
std::vector<VertexSet> super_regularize(
    const PartiteGraph& g, const std::vector<VertexSet>& clusters,
    const std::vector<std::pair<std::size_t, std::size_t>>& j_edges,
    const RegularityParams& params, std::size_t target_size);

/// The trim fraction delta = 2*max_deg*eps / (2 + max_deg*eps) that the
/// super-regularization lemma tolerates.
double super_regularize_delta(std::size_t max_degree, double epsilon);

}  // namespace tilinglab::reg
