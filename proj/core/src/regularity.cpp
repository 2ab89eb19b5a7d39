#include "tilinglab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tilinglab/rng.hpp"

namespace tilinglab::reg {

namespace {

Bitset mask_of(const PartiteGraph& g, const VertexSet& s) {
  Bitset m(static_cast<std::size_t>(g.part_size()));
  for (std::uint32_t v : s.indices) m.set(v);
  return m;
}

std::size_t threshold_size(double epsilon, std::size_t set_size) {
  auto t = static_cast<std::size_t>(
      std::ceil(epsilon * static_cast<double>(set_size)));
  return std::clamp<std::size_t>(t, 1, set_size);
}

}  // namespace

double super_regularize_delta(std::size_t max_degree, double epsilon) {
  const double de = static_cast<double>(max_degree) * epsilon;
  return 2.0 * de / (2.0 + de);
}

RegularityReport check_superregular(const PartiteGraph& g, const VertexSet& a,
                                    const VertexSet& b,
                                    const RegularityParams& params,
                                    CheckMode mode, std::size_t samples,
                                    std::uint64_t seed) {
  if (a.part == b.part)
    throw Error(ErrorCode::PartsNotDisjoint, "A and B share a part");
  if (a.indices.empty() || b.indices.empty())
    throw Error(ErrorCode::ShapeMismatch, "empty side");

  RegularityReport rep;
  rep.mode = mode;
  const std::size_t na = a.indices.size(), nb = b.indices.size();
  const Bitset bmask = mask_of(g, b);
  const Bitset amask = mask_of(g, a);

  // base density and exact degree condition
  std::size_t edges = 0;
  for (std::uint32_t va : a.indices) {
    const std::size_t deg = Bitset::and_count(
        g.neighbors({a.part, static_cast<int>(va)}, b.part), bmask);
    edges += deg;
    if (!(static_cast<double>(deg) > params.d * static_cast<double>(nb)) &&
        !rep.degree_witness)
      rep.degree_witness = VertexRef{a.part, static_cast<int>(va)};
  }
  for (std::uint32_t vb : b.indices) {
    const std::size_t deg = Bitset::and_count(
        g.neighbors({b.part, static_cast<int>(vb)}, a.part), amask);
    if (!(static_cast<double>(deg) > params.d * static_cast<double>(na)) &&
        !rep.degree_witness)
      rep.degree_witness = VertexRef{b.part, static_cast<int>(vb)};
  }
  rep.base_density =
      static_cast<double>(edges) / (static_cast<double>(na) * nb);

  const std::size_t mx = threshold_size(params.epsilon, na);
  const std::size_t my = threshold_size(params.epsilon, nb);

  auto record_pair = [&](std::vector<std::uint32_t> xsel,
                         std::vector<std::uint32_t> ysel, std::size_t e) {
    const double dens =
        static_cast<double>(e) / (static_cast<double>(mx) * my);
    rep.worst_deviation_found =
        std::max(rep.worst_deviation_found, rep.base_density - dens);
    if (!(dens > params.d)) {
      if (!rep.density_witness || dens < rep.density_witness->density) {
        std::sort(xsel.begin(), xsel.end());
        std::sort(ysel.begin(), ysel.end());
        rep.density_witness =
            SubsetWitness{std::move(xsel), std::move(ysel), dens};
      }
    }
  };

  if (mode == CheckMode::Exhaustive) {
    if (na > 14 || nb > 14)
      throw Error(ErrorCode::SubsetSpaceTooLarge,
                  "exhaustive mode is capped at sides of size 14");
    // The minimizing X for a fixed Y is the mx vertices of A with smallest
    // degree into Y, and the minimum density over sets of size >= threshold
    // is attained at the threshold sizes, so scanning (greedy X, all Y of
    // size my) decides the density condition completely.
    std::vector<std::size_t> comb(my);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      Bitset ymask(static_cast<std::size_t>(g.part_size()));
      std::vector<std::uint32_t> ysel(my);
      for (std::size_t k = 0; k < my; ++k) {
        ysel[k] = b.indices[comb[k]];
        ymask.set(ysel[k]);
      }
      std::vector<std::pair<std::size_t, std::uint32_t>> deg_idx;
      deg_idx.reserve(na);
      for (std::uint32_t va : a.indices)
        deg_idx.emplace_back(
            Bitset::and_count(
                g.neighbors({a.part, static_cast<int>(va)}, b.part), ymask),
            va);
      std::partial_sort(deg_idx.begin(), deg_idx.begin() + mx, deg_idx.end());
      std::size_t e = 0;
      std::vector<std::uint32_t> xsel(mx);
      for (std::size_t k = 0; k < mx; ++k) {
        e += deg_idx[k].first;
        xsel[k] = deg_idx[k].second;
      }
      record_pair(std::move(xsel), ysel, e);
      ++rep.samples_taken;
      // next combination of positions in [0, nb)
      std::size_t k = my;
      while (k > 0 && comb[k - 1] == nb - my + (k - 1)) --k;
      if (k == 0) break;
      ++comb[k - 1];
      for (std::size_t j = k; j < my; ++j) comb[j] = comb[j - 1] + 1;
    }
  } else {
    // uniform subset pairs at the threshold sizes; a falsifier, not a verifier
    for (std::size_t s = 0; s < samples; ++s) {
      Rng rng(derive_seed(seed, {s}));
      auto draw = [&](const std::vector<std::uint32_t>& from, std::size_t count) {
        std::vector<std::uint32_t> pool = from;
        for (std::size_t i = 0; i < count; ++i)
          std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        pool.resize(count);
        return pool;
      };
      const std::vector<std::uint32_t> xsel = draw(a.indices, mx);
      const std::vector<std::uint32_t> ysel = draw(b.indices, my);
      Bitset ymask(static_cast<std::size_t>(g.part_size()));
      for (std::uint32_t v : ysel) ymask.set(v);
      std::size_t e = 0;
      for (std::uint32_t va : xsel)
        e += Bitset::and_count(
            g.neighbors({a.part, static_cast<int>(va)}, b.part), ymask);
      record_pair(xsel, ysel, e);
      ++rep.samples_taken;
    }
  }

  rep.ok = !rep.degree_witness && !rep.density_witness;
  return rep;
}

std::size_t low_degree_count(const PartiteGraph& g, const VertexSet& a,
                             const VertexSet& y, std::size_t threshold) {
  if (a.part == y.part)
    throw Error(ErrorCode::PartsNotDisjoint, "A and Y share a part");
  const Bitset ymask = mask_of(g, y);
  std::size_t count = 0;
  for (std::uint32_t va : a.indices)
    if (Bitset::and_count(g.neighbors({a.part, static_cast<int>(va)}, y.part),
                          ymask) < threshold)
      ++count;
  return count;
}

std::vector<VertexSet> super_regularize(
    const PartiteGraph& g, const std::vector<VertexSet>& clusters,
    const std::vector<std::pair<std::size_t, std::size_t>>& j_edges,
    const RegularityParams& params, std::size_t target_size) {
  if (clusters.empty())
    throw Error(ErrorCode::ShapeMismatch, "no clusters");
  const std::size_t cluster_size = clusters[0].indices.size();
  for (const auto& c : clusters)
    if (c.indices.size() != cluster_size)
      throw Error(ErrorCode::ShapeMismatch, "clusters must share one size");
  if (target_size < 1 || target_size > cluster_size)
    throw Error(ErrorCode::ConfigError, "target size outside [1, |cluster|]");
  for (const auto& [u, v] : j_edges) {
    if (u >= clusters.size() || v >= clusters.size())
      throw Error(ErrorCode::IndexOutOfRange, "J edge endpoint");
    if (clusters[u].part == clusters[v].part)
      throw Error(ErrorCode::PartsNotDisjoint, "J edge within one part");
  }

  std::vector<std::vector<std::size_t>> adj(clusters.size());
  for (const auto& [u, v] : j_edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  const double floor_frac = params.d - params.epsilon;
  std::vector<VertexSet> out(clusters.size());
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const VertexSet& cluster = clusters[ci];
    std::vector<std::uint32_t> keep, removed;
    for (std::uint32_t v : cluster.indices) {
      bool low = false;
      for (std::size_t cj : adj[ci]) {
        const Bitset mask = mask_of(g, clusters[cj]);
        const std::size_t deg = Bitset::and_count(
            g.neighbors({cluster.part, static_cast<int>(v)},
                        clusters[cj].part),
            mask);
        if (static_cast<double>(deg) <
            floor_frac * static_cast<double>(clusters[cj].indices.size())) {
          low = true;
          break;
        }
      }
      (low ? removed : keep).push_back(v);
    }
    if (keep.size() < target_size)
      throw Error(ErrorCode::TooManyLowDegreeVertices,
                  "cluster " + std::to_string(ci) + " has " +
                      std::to_string(removed.size()) + " low-degree vertices");
    // pad the removal with highest-index survivors, deterministically
    std::sort(keep.begin(), keep.end());
    keep.resize(target_size);
    out[ci] = VertexSet{cluster.part, std::move(keep)};
  }
  return out;
}

}  // namespace tilinglab::reg
