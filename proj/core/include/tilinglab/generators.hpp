#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tilinglab/mpgraph.hpp"

namespace tilinglab::gen {

struct RandomSpec {
  double p = 0.0;
  std::uint64_t seed = 0;
};

/// G_r(n,p): every cross-part pair is an edge independently with probability
/// p. Deterministic per seed; each part pair draws from its own derived
/// stream, so blocks can be generated concurrently without changing output.
PartiteGraph gen_random(int r, int n, const RandomSpec& spec);

/// The two-tier lower-bound host: V_i = A_i ⊔ B_i with |A_i| = ceil(alpha n)
/// (low indices), pairs (A_i, A_j) and (A_i, B_j) complete, (B_i, B_j) empty.
PartiteGraph gen_extremal(int r, int n, double alpha);

/// Same shape with |A_i| = ceil(eta n), eta = 1/(3 r omega).
PartiteGraph gen_sublinear(int r, int n, double omega);

/// Test fixture for the star-tiling pipeline: pairs (V_1, V_i) random with
/// density ~2d (capped at 1) and every vertex of the pair resampled until its
/// degree exceeds d*n; pairs among V_2..V_r stay empty.
PartiteGraph gen_superregular_star(int r, int n, double d, std::uint64_t seed);

/// Uniformly random disjoint subsets of the given sizes from one part.
/// Slices come back sorted; the draw is a seeded Fisher-Yates shuffle.
std::vector<std::vector<std::uint32_t>> random_slice(
    const PartiteGraph& g, int part, std::span<const std::size_t> sizes,
    std::uint64_t seed);

}  // namespace tilinglab::gen
