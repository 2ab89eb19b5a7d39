#pragma once

#include <cstdint>
#include <optional>

#include "tilinglab/mpgraph.hpp"

namespace tilinglab::bounds {

struct JansonInput {
  double mu = 0.0;         // sum of E[I_i]
  double delta_bar = 0.0;  // ordered-pair codependency sum
  double mu_prime = 0.0;   // sum of -ln(1 - E[I_i])
};

/// Two-sided Chernoff deviation bound 2 exp(-xi^3 mu / 3).
double chernoff_tail(double mu, double xi);

/// Upper-tail form exp(-k), valid only when k >= 7 mu; empty otherwise.
std::optional<double> chernoff_upper_tail(double k, double mu);

struct JansonBounds {
  double lower_p_s0 = 0.0;       // exp(-mu')
  double upper_p_s0 = 0.0;       // exp(-mu^2 / (delta + mu))
  double upper_p_s0_weak = 0.0;  // exp(-mu + delta), end of the chain
  double lower_tail = 0.0;       // exp(-t^2 / (2 (delta + mu)))
  // exponents, for values that underflow a double
  double log_lower_p_s0 = 0.0;
  double log_upper_p_s0 = 0.0;
  double log_lower_tail = 0.0;
};

/// P(S=0) sandwich and the lower-tail bound for a deviation t in [0, mu].
JansonBounds janson_bounds(const JansonInput& j, double t);

struct KrMoments {
  double mu = 0.0;
  double delta_bar = 0.0;
};

/// First and second moments of the transversal K_r count in G_r(m, p),
/// m = class_size_override when positive, else n:
///   mu    = m^r p^C(r,2)
///   delta = m^r sum_{l=2}^{r-1} C(r,l) (m-1)^{r-l} p^{2 C(r,2) - C(l,2)}
KrMoments kr_count_moments(int r, int n, double p,
                           int class_size_override = -1);

struct IsolatedMoments {
  double mu = 0.0;        // 2 n^{r-1} p^C(r,2)
  double mu_prime = 0.0;  // -n^{r-1} ln(1 - p^C(r,2))
  double delta_bar = 0.0;
  double delta_bar_simplified = 0.0;  // n^{2r-3+2/r} p^{2C(r,2)} (2^r + 2^{r-1}/n)
  double ex_lower = 0.0;              // (n/omega) exp(-(ln omega)^2 / n^{r-1})
};

/// Moment calculators behind the sublinear-degree obstruction: the two-vertex
/// isolation moments and the expected-isolated-count lower bound.
IsolatedMoments isolated_vertex_moments(int r, double n, double p,
                                        double omega);

/// Number of vertices of the given part contained in no transversal K_r.
std::size_t count_isolated(const PartiteGraph& g, int part);

}  // namespace tilinglab::bounds
