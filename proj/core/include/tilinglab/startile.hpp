#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "tilinglab/mpgraph.hpp"

namespace tilinglab::startile {

using Rational = mpq_class;

std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

/// A labeled star S*_t(i,j): K_{1,r-1} with its center in part i (label 1),
/// the big leaf in part j (label t), and one small leaf (label 1) in every
/// remaining part. Leaves need not be adjacent to each other.
struct LabeledStar {
  VertexRef center;
  VertexRef big_leaf;
  std::vector<VertexRef> small_leaves;  // ascending part order
  int t = 1;

  friend auto operator<=>(const LabeledStar&, const LabeledStar&) = default;
};

/// Nonnegative rational weights on labeled stars. Perfect when every vertex
/// carries label-weighted load exactly 1.
struct FractionalTiling {
  int t = 1;
  std::vector<LabeledStar> stars;  // positive-weight support
  std::vector<Rational> weights;   // parallel to stars
};

/// Dual vector separating the all-ones vector from the cone of star
/// incidence vectors: x . chi(S*) <= 0 for every star and x . 1 > 0.
struct FarkasCertificate {
  std::vector<Rational> x;  // indexed by part * n + index
};

struct StarEnumeration {
  std::vector<LabeledStar> stars;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultStarCap = 10'000'000;

/// All labeled stars over all ordered part pairs, in deterministic
/// (i, j, center, big leaf, small leaves) order.
StarEnumeration enumerate_stars(const PartiteGraph& g, int t,
                                std::size_t cap = kDefaultStarCap);

enum class LpStatus { Feasible, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  FractionalTiling tiling;        // set when Feasible
  FarkasCertificate certificate;  // set when Infeasible
  std::size_t star_count = 0;
  std::uint64_t pivots = 0;
};

/// Decides perfect fractional S*-tiling by phase-1 simplex on the exact
/// equality system (rational arithmetic end to end). Exactly one of the two
/// outcomes is returned and it always passes its verifier.
LpResult solve_fractional(const PartiteGraph& g, int t,
                          std::size_t cap = kDefaultStarCap);

/// Recomputes loads from scratch: true iff all weights are nonnegative, all
/// stars are valid stars of g, and every vertex has load exactly 1.
bool verify_fractional(const PartiteGraph& g, const FractionalTiling& ft,
                       std::string* why = nullptr);

/// Re-enumerates stars and checks the certificate's defining inequalities.
bool verify_certificate(const PartiteGraph& g, int t,
                        const FarkasCertificate& cert,
                        std::string* why = nullptr);

struct Integralization {
  mpz_class denominator;               // D, the lcm of weight denominators
  std::vector<mpz_class> replication;  // D * w per star, exact integers
};

/// Clears denominators: replication(S*) = D w(S*), so every vertex satisfies
/// sum over stars of replication * label = D.
Integralization integralize(const FractionalTiling& ft);

}  // namespace tilinglab::startile
