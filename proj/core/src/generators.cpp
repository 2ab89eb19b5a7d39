#include "tilinglab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tilinglab/rng.hpp"

namespace tilinglab::gen {

namespace {

void check_shape(int r, int n) {
  if (r < 2) throw Error(ErrorCode::ShapeMismatch, "need r >= 2");
  if (n < 1) throw Error(ErrorCode::ShapeMismatch, "need n >= 1");
}

// Complete (A_i, A_j) and (A_i, B_j), empty (B_i, B_j), with A = [0, a_size).
PartiteGraph split_host(int r, int n, int a_size) {
  std::vector<std::pair<VertexRef, VertexRef>> edges;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (a < a_size || b < a_size)
            edges.emplace_back(VertexRef{i, a}, VertexRef{j, b});
  return PartiteGraph(r, n, edges);
}

}  // namespace

PartiteGraph gen_random(int r, int n, const RandomSpec& spec) {
  check_shape(r, n);
  if (spec.p < 0.0 || spec.p > 1.0)
    throw Error(ErrorCode::ConfigError, "p outside [0,1]");
  std::vector<std::pair<VertexRef, VertexRef>> edges;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      Rng rng(derive_seed(spec.seed, {static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(j)}));
      if (spec.p <= 0.0) continue;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (spec.p >= 1.0 || rng.bernoulli(spec.p))
            edges.emplace_back(VertexRef{i, a}, VertexRef{j, b});
    }
  return PartiteGraph(r, n, edges);
}

PartiteGraph gen_extremal(int r, int n, double alpha) {
  check_shape(r, n);
  if (!(alpha > 0.0) || !(alpha < 1.0 / r))
    throw Error(ErrorCode::AlphaOutOfRange,
                "alpha must lie in (0, 1/r)");
  const int a_size = static_cast<int>(std::ceil(alpha * n));
  return split_host(r, n, a_size);
}

PartiteGraph gen_sublinear(int r, int n, double omega) {
  check_shape(r, n);
  if (!(omega >= 1.0))
    throw Error(ErrorCode::EtaTooSmall, "omega must be >= 1");
  const double eta = 1.0 / (3.0 * r * omega);
  const int a_size = static_cast<int>(std::ceil(eta * n));
  if (a_size < 1) throw Error(ErrorCode::EtaTooSmall, "ceil(eta n) = 0");
  return split_host(r, n, a_size);
}

PartiteGraph gen_superregular_star(int r, int n, double d, std::uint64_t seed) {
  check_shape(r, n);
  if (!(d > 0.0) || !(d < 1.0))
    throw Error(ErrorCode::ConfigError, "d outside (0,1)");
  const double q = std::min(2.0 * d, 1.0);
  const double min_deg = d * n;
  constexpr int kMaxFixups = 200;

  std::vector<std::pair<VertexRef, VertexRef>> edges;
  for (int i = 1; i < r; ++i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    // rows[v1] = neighbors of V_1 vertex v1 inside V_i
    std::vector<Bitset> rows(n, Bitset(static_cast<std::size_t>(n)));
    auto resample_row = [&](int v1) {
      rows[v1].clear();
      for (int b = 0; b < n; ++b)
        if (q >= 1.0 || rng.bernoulli(q)) rows[v1].set(b);
    };
    auto resample_col = [&](int vi) {
      for (int a = 0; a < n; ++a) {
        if (q >= 1.0 || rng.bernoulli(q))
          rows[a].set(vi);
        else
          rows[a].reset(vi);
      }
    };
    for (int a = 0; a < n; ++a) resample_row(a);

    int fixups = 0;
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int a = 0; a < n && clean; ++a)
        if (static_cast<double>(rows[a].count()) <= min_deg) {
          resample_row(a);
          clean = false;
        }
      for (int b = 0; b < n && clean; ++b) {
        std::size_t deg = 0;
        for (int a = 0; a < n; ++a) deg += rows[a].test(b);
        if (static_cast<double>(deg) <= min_deg) {
          resample_col(b);
          clean = false;
        }
      }
      if (!clean && ++fixups > kMaxFixups)
        throw Error(ErrorCode::GenerationFailed,
                    "degree floor not reached after bounded resampling");
    }
    for (int a = 0; a < n; ++a)
      rows[a].for_each([&](std::size_t b) {
        edges.emplace_back(VertexRef{0, a}, VertexRef{i, static_cast<int>(b)});
      });
  }
  return PartiteGraph(r, n, edges);
}

std::vector<std::vector<std::uint32_t>> random_slice(
    const PartiteGraph& g, int part, std::span<const std::size_t> sizes,
    std::uint64_t seed) {
  if (part < 0 || part >= g.parts())
    throw Error(ErrorCode::IndexOutOfRange, "part " + std::to_string(part));
  const std::size_t n = static_cast<std::size_t>(g.part_size());
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(),
                                            std::size_t{0});
  if (total > n)
    throw Error(ErrorCode::SizesExceedPart,
                "requested " + std::to_string(total) + " of " +
                    std::to_string(n));
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(part)}));
  for (std::size_t i = n; i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);

  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(sizes.size());
  std::size_t at = 0;
  for (std::size_t sz : sizes) {
    std::vector<std::uint32_t> slice(perm.begin() + at, perm.begin() + at + sz);
    std::sort(slice.begin(), slice.end());
    out.push_back(std::move(slice));
    at += sz;
  }
  return out;
}

}  // namespace tilinglab::gen
