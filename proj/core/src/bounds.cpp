#include "tilinglab/bounds.hpp"

#include <cmath>
#include <limits>

namespace tilinglab::bounds {

namespace {

double binom(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  double out = 1.0;
  for (int i = 0; i < b; ++i) out = out * (a - i) / (i + 1);
  return out;
}

}  // namespace

double chernoff_tail(double mu, double xi) {
  if (!(xi > 0.0) || !(xi < 1.0))
    throw Error(ErrorCode::XiOutOfRange, "xi must lie in (0,1)");
  if (mu < 0.0) throw Error(ErrorCode::ConfigError, "mu < 0");
  return 2.0 * std::exp(-xi * xi * xi * mu / 3.0);
}

std::optional<double> chernoff_upper_tail(double k, double mu) {
  if (k < 7.0 * mu) return std::nullopt;
  return std::exp(-k);
}

JansonBounds janson_bounds(const JansonInput& j, double t) {
  if (t < 0.0 || t > j.mu)
    throw Error(ErrorCode::TOutOfRange, "t must lie in [0, mu]");
  JansonBounds out;
  out.log_lower_p_s0 = -j.mu_prime;
  out.log_upper_p_s0 =
      j.mu > 0.0 ? -(j.mu * j.mu) / (j.delta_bar + j.mu) : 0.0;
  out.log_lower_tail =
      j.mu + j.delta_bar > 0.0
          ? -(t * t) / (2.0 * (j.delta_bar + j.mu))
          : 0.0;
  out.lower_p_s0 = std::exp(out.log_lower_p_s0);
  out.upper_p_s0 = std::exp(out.log_upper_p_s0);
  out.upper_p_s0_weak = std::exp(-j.mu + j.delta_bar);
  out.lower_tail = std::exp(out.log_lower_tail);
  return out;
}

KrMoments kr_count_moments(int r, int n, double p, int class_size_override) {
  if (r < 3) throw Error(ErrorCode::ConfigError, "need r >= 3");
  const double m = class_size_override > 0 ? class_size_override : n;
  const double edges = binom(r, 2);
  KrMoments out;
  out.mu = std::pow(m, r) * std::pow(p, edges);
  for (int l = 2; l <= r - 1; ++l)
    out.delta_bar += std::pow(m, r) * binom(r, l) * std::pow(m - 1, r - l) *
                     std::pow(p, 2.0 * edges - binom(l, 2));
  return out;
}

IsolatedMoments isolated_vertex_moments(int r, double n, double p,
                                        double omega) {
  if (r < 3) throw Error(ErrorCode::ConfigError, "need r >= 3");
  const double edges = binom(r, 2);
  const double nr1 = std::pow(n, r - 1);
  const double pe = std::pow(p, edges);
  IsolatedMoments out;
  out.mu = 2.0 * nr1 * pe;
  out.mu_prime = pe >= 1.0 ? std::numeric_limits<double>::infinity()
                           : -nr1 * std::log1p(-pe);
  for (int l = 1; l <= r - 2; ++l)
    out.delta_bar += 2.0 * binom(r - 1, l) * std::pow(n, 2 * r - l - 2) *
                     std::pow(p, 2.0 * edges - binom(l + 1, 2));
  for (int l = 2; l <= r - 1; ++l)
    out.delta_bar += binom(r - 1, l) * std::pow(n, 2 * r - l - 2) *
                     std::pow(p, 2.0 * edges - binom(l, 2));
  out.delta_bar_simplified =
      std::pow(n, 2.0 * r - 3.0 + 2.0 / r) * std::pow(p, 2.0 * edges) *
      (2.0 * std::pow(2.0, r - 1) + std::pow(2.0, r - 1) / n);
  const double lw = std::log(omega);
  out.ex_lower = (n / omega) * std::exp(-lw * lw / nr1);
  return out;
}

namespace {

// existence of a transversal clique through `fixed`, searching the remaining
// parts in ascending order
bool clique_through(const PartiteGraph& g, VertexRef fixed) {
  const int r = g.parts();
  std::vector<int> order;
  for (int p = 0; p < r; ++p)
    if (p != fixed.part) order.push_back(p);

  std::vector<std::vector<Bitset>> levels(
      order.size() + 1,
      std::vector<Bitset>(order.size(),
                          Bitset(static_cast<std::size_t>(g.part_size()))));
  for (std::size_t k = 0; k < order.size(); ++k)
    levels[0][k] = g.neighbors(fixed, order[k]);

  auto rec = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == order.size()) return true;
    const Bitset& cand = levels[depth][depth];
    for (std::size_t v = cand.next(0); v < cand.size(); v = cand.next(v + 1)) {
      const VertexRef vr{order[depth], static_cast<int>(v)};
      bool viable = true;
      for (std::size_t k = depth + 1; k < order.size() && viable; ++k) {
        levels[depth + 1][k] = levels[depth][k];
        levels[depth + 1][k] &= g.neighbors(vr, order[k]);
        viable = levels[depth + 1][k].any();
      }
      if (viable && self(self, depth + 1)) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

std::size_t count_isolated(const PartiteGraph& g, int part) {
  if (part < 0 || part >= g.parts())
    throw Error(ErrorCode::IndexOutOfRange, "part " + std::to_string(part));
  std::size_t count = 0;
  for (int v = 0; v < g.part_size(); ++v)
    if (!clique_through(g, {part, v})) ++count;
  return count;
}

}  // namespace tilinglab::bounds
