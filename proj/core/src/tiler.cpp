#include "tilinglab/tiler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "tilinglab/rng.hpp"

namespace tilinglab::tiler {

namespace {

// levels[depth][p] holds the candidate set for part p given the choices made
// in parts < depth.
void extend_clique(const PartiteGraph& g, int part,
                   std::vector<std::vector<Bitset>>& levels, KrCopy& partial,
                   std::vector<KrCopy>& out, std::size_t cap, bool& truncated) {
  const int r = g.parts();
  if (part == r) {
    if (out.size() == cap) {
      truncated = true;
      return;
    }
    out.push_back(partial);
    return;
  }
  const Bitset& cand = levels[part][part];
  for (std::size_t v = cand.next(0); v < cand.size() && !truncated;
       v = cand.next(v + 1)) {
    partial.index_per_part[part] = static_cast<std::int32_t>(v);
    if (part + 1 < r) {
      const VertexRef vr{part, static_cast<int>(v)};
      for (int p = part + 1; p < r; ++p) {
        levels[part + 1][p] = levels[part][p];
        levels[part + 1][p] &= g.neighbors(vr, p);
      }
    }
    extend_clique(g, part + 1, levels, partial, out, cap, truncated);
  }
}

}  // namespace

EnumerationResult enumerate_kr(const PartiteGraph& g, std::size_t cap) {
  const int r = g.parts();
  EnumerationResult res;
  std::vector<std::vector<Bitset>> levels(
      r + 1,
      std::vector<Bitset>(r, Bitset(static_cast<std::size_t>(g.part_size()))));
  for (int p = 0; p < r; ++p) levels[0][p].set_all();
  KrCopy partial;
  partial.index_per_part.assign(r, -1);
  extend_clique(g, 0, levels, partial, res.copies, cap, res.truncated);
  return res;
}

namespace {

// Shared exact-cover state over a fixed clique list.
struct CoverSearch {
  int r;
  int n;
  std::size_t n_vertices;
  const std::vector<KrCopy>& cliques;
  std::vector<std::vector<std::uint32_t>> at_vertex;  // vid -> clique ids
  std::vector<bool> covered;
  std::vector<std::uint32_t> chosen;
  std::uint64_t budget;
  std::uint64_t expansions = 0;
  bool aborted = false;

  CoverSearch(const PartiteGraph& g, const std::vector<KrCopy>& cl,
              std::uint64_t budget_limit)
      : r(g.parts()),
        n(g.part_size()),
        n_vertices(g.vertex_count()),
        cliques(cl),
        at_vertex(n_vertices),
        covered(n_vertices, false),
        budget(budget_limit) {
    for (std::size_t c = 0; c < cliques.size(); ++c)
      for (int p = 0; p < r; ++p)
        at_vertex[vid(p, cliques[c].index_per_part[p])].push_back(
            static_cast<std::uint32_t>(c));
  }

  std::size_t vid(int part, int index) const {
    return static_cast<std::size_t>(part) * n + index;
  }

  bool live(std::uint32_t c) const {
    for (int p = 0; p < r; ++p)
      if (covered[vid(p, cliques[c].index_per_part[p])]) return false;
    return true;
  }

  void place(std::uint32_t c, bool on) {
    for (int p = 0; p < r; ++p)
      covered[vid(p, cliques[c].index_per_part[p])] = on;
  }

  // true iff a full cover was found (chosen holds it)
  bool run(std::size_t covered_count) {
    if (covered_count == n_vertices) return true;
    // most-constrained uncovered vertex, ties to lowest vid
    std::size_t best_vid = n_vertices;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n_vertices; ++v) {
      if (covered[v]) continue;
      std::size_t cnt = 0;
      for (std::uint32_t c : at_vertex[v])
        if (live(c)) ++cnt;
      if (cnt < best_count) {
        best_count = cnt;
        best_vid = v;
        if (cnt == 0) return false;
      }
    }
    for (std::uint32_t c : at_vertex[best_vid]) {
      if (!live(c)) continue;
      if (++expansions > budget) {
        aborted = true;
        return false;
      }
      place(c, true);
      chosen.push_back(c);
      if (run(covered_count + r)) return true;
      if (aborted) return false;
      chosen.pop_back();
      place(c, false);
    }
    return false;
  }
};

}  // namespace

TilingSearchResult exact_perfect_tiling(const PartiteGraph& g,
                                        std::uint64_t budget,
                                        std::size_t clique_cap) {
  EnumerationResult enumeration = enumerate_kr(g, clique_cap);
  TilingSearchResult res;
  res.clique_count = enumeration.copies.size();
  res.enumeration_truncated = enumeration.truncated;

  CoverSearch search(g, enumeration.copies, budget);
  const bool found = search.run(0);
  res.expansions = search.expansions;
  if (found) {
    res.status = SearchStatus::Perfect;
    for (std::uint32_t c : search.chosen)
      res.tiling.copies.push_back(enumeration.copies[c]);
    std::sort(res.tiling.copies.begin(), res.tiling.copies.end());
    return res;
  }
  if (search.aborted || enumeration.truncated) {
    res.status = SearchStatus::BudgetExceeded;
    return res;
  }
  res.status = SearchStatus::NoTiling;
  return res;
}

Tiling greedy_partial_tiling(const PartiteGraph& g, std::uint64_t seed,
                             std::size_t clique_cap) {
  EnumerationResult enumeration = enumerate_kr(g, clique_cap);
  if (enumeration.truncated)
    throw Error(ErrorCode::EnumerationTruncated,
                "greedy tiling needs the full clique list");
  const int r = g.parts();
  std::vector<bool> covered(g.vertex_count(), false);
  auto vid = [&](int part, int index) {
    return static_cast<std::size_t>(part) * g.part_size() + index;
  };
  auto blocked = [&](const KrCopy& c) {
    for (int p = 0; p < r; ++p)
      if (covered[vid(p, c.index_per_part[p])]) return true;
    return false;
  };

  std::vector<std::uint32_t> live(enumeration.copies.size());
  std::iota(live.begin(), live.end(), 0);
  Rng rng(seed);
  Tiling tiling;
  // Uniform over live cliques: blocked entries discovered by a draw are
  // swap-removed, which leaves the distribution over live ones uniform
  // (coverage only grows, so blocked never revives).
  while (!live.empty()) {
    const std::size_t k = rng.below(live.size());
    const std::uint32_t c = live[k];
    live[k] = live.back();
    live.pop_back();
    if (blocked(enumeration.copies[c])) continue;
    for (int p = 0; p < r; ++p)
      covered[vid(p, enumeration.copies[c].index_per_part[p])] = true;
    tiling.copies.push_back(enumeration.copies[c]);
  }
  std::sort(tiling.copies.begin(), tiling.copies.end());
  return tiling;
}

HallResult hall_perfect_matching(
    std::size_t n_left, std::size_t n_right,
    const std::vector<std::vector<std::uint32_t>>& adj) {
  if (n_left != n_right)
    throw Error(ErrorCode::SizeMismatch,
                "sides differ: " + std::to_string(n_left) + " vs " +
                    std::to_string(n_right));
  if (adj.size() != n_left)
    throw Error(ErrorCode::SizeMismatch, "adjacency list size");

  std::vector<std::int32_t> match_left(n_left, -1), match_right(n_right, -1);
  std::vector<bool> visited(n_right);

  auto augment = [&](auto&& self, std::uint32_t u) -> bool {
    for (std::uint32_t w : adj[u]) {
      if (visited[w]) continue;
      visited[w] = true;
      if (match_right[w] < 0 ||
          self(self, static_cast<std::uint32_t>(match_right[w]))) {
        match_left[u] = static_cast<std::int32_t>(w);
        match_right[w] = static_cast<std::int32_t>(u);
        return true;
      }
    }
    return false;
  };

  std::size_t matched = 0;
  for (std::uint32_t u = 0; u < n_left; ++u) {
    std::fill(visited.begin(), visited.end(), false);
    if (augment(augment, u)) ++matched;
  }

  HallResult res;
  res.match = match_left;
  if (matched == n_left) {
    res.perfect = true;
    return res;
  }

  // Alternating reachability from every unmatched left vertex gives S with
  // |N(S)| = |S| - #unmatched < |S|.
  std::vector<bool> in_s(n_left, false), right_seen(n_right, false);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t u = 0; u < n_left; ++u)
    if (match_left[u] < 0) {
      in_s[u] = true;
      queue.push_back(u);
    }
  while (!queue.empty()) {
    const std::uint32_t u = queue.back();
    queue.pop_back();
    for (std::uint32_t w : adj[u]) {
      if (right_seen[w]) continue;
      right_seen[w] = true;
      if (match_right[w] >= 0 && !in_s[match_right[w]]) {
        in_s[match_right[w]] = true;
        queue.push_back(static_cast<std::uint32_t>(match_right[w]));
      }
    }
  }
  for (std::uint32_t u = 0; u < n_left; ++u)
    if (in_s[u]) res.witness.push_back(u);
  for (std::uint32_t w = 0; w < n_right; ++w)
    if (right_seen[w]) res.witness_neighborhood.push_back(w);
  return res;
}

HyperMatchResult exact_hypergraph_matching(int arity, int side_size,
                                           std::span<const std::uint32_t> edges,
                                           std::uint64_t budget) {
  if (arity < 1 || side_size < 1)
    throw Error(ErrorCode::ShapeMismatch, "bad hypergraph shape");
  if (edges.size() % arity != 0)
    throw Error(ErrorCode::ShapeMismatch, "ragged hyperedge data");
  const std::size_t n_edges = edges.size() / arity;
  const std::size_t n_vertices =
      static_cast<std::size_t>(arity) * side_size;

  std::vector<std::vector<std::uint32_t>> at_vertex(n_vertices);
  for (std::size_t e = 0; e < n_edges; ++e)
    for (int s = 0; s < arity; ++s)
      at_vertex[static_cast<std::size_t>(s) * side_size + edges[e * arity + s]]
          .push_back(static_cast<std::uint32_t>(e));

  std::vector<bool> covered(n_vertices, false);
  std::vector<std::size_t> chosen;
  HyperMatchResult res;
  bool aborted = false;

  auto live = [&](std::uint32_t e) {
    for (int s = 0; s < arity; ++s)
      if (covered[static_cast<std::size_t>(s) * side_size +
                  edges[e * static_cast<std::size_t>(arity) + s]])
        return false;
    return true;
  };
  auto place = [&](std::uint32_t e, bool on) {
    for (int s = 0; s < arity; ++s)
      covered[static_cast<std::size_t>(s) * side_size +
              edges[e * static_cast<std::size_t>(arity) + s]] = on;
  };

  auto search = [&](auto&& self, std::size_t covered_count) -> bool {
    if (covered_count == n_vertices) return true;
    std::size_t best_v = n_vertices;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n_vertices; ++v) {
      if (covered[v]) continue;
      std::size_t cnt = 0;
      for (std::uint32_t e : at_vertex[v])
        if (live(e)) ++cnt;
      if (cnt < best_count) {
        best_count = cnt;
        best_v = v;
        if (cnt == 0) return false;
      }
    }
    for (std::uint32_t e : at_vertex[best_v]) {
      if (!live(e)) continue;
      if (++res.expansions > budget) {
        aborted = true;
        return false;
      }
      place(e, true);
      chosen.push_back(e);
      if (self(self, covered_count + arity)) return true;
      if (aborted) return false;
      chosen.pop_back();
      place(e, false);
    }
    return false;
  };

  if (search(search, 0)) {
    res.status = SearchStatus::Perfect;
    res.edge_ids = chosen;
    std::sort(res.edge_ids.begin(), res.edge_ids.end());
    return res;
  }
  res.status = aborted ? SearchStatus::BudgetExceeded : SearchStatus::NoTiling;
  return res;
}

bool validate_tiling(const PartiteGraph& g, const Tiling& tiling,
                     bool require_perfect, std::string* why) {
  const int r = g.parts();
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  std::vector<bool> used(g.vertex_count(), false);
  for (const KrCopy& copy : tiling.copies) {
    if (static_cast<int>(copy.index_per_part.size()) != r)
      return fail("copy arity != r");
    for (int p = 0; p < r; ++p) {
      const std::int32_t idx = copy.index_per_part[p];
      if (idx < 0 || idx >= g.part_size()) return fail("vertex out of range");
      const std::size_t vid = static_cast<std::size_t>(p) * g.part_size() + idx;
      if (used[vid]) return fail("copies overlap");
      used[vid] = true;
    }
    for (int p = 0; p < r; ++p)
      for (int q = p + 1; q < r; ++q)
        if (!g.adjacent({p, copy.index_per_part[p]},
                        {q, copy.index_per_part[q]}))
          return fail("claimed copy is not a clique");
  }
  if (require_perfect &&
      tiling.covered_count(r) != g.vertex_count())
    return fail("coverage incomplete");
  return true;
}

std::uint64_t tiling_digest(const Tiling& tiling) {
  std::vector<KrCopy> sorted = tiling.copies;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ULL;
  };
  for (const KrCopy& copy : sorted)
    for (std::int32_t v : copy.index_per_part)
      feed(static_cast<std::uint64_t>(v) + 0x9e37);
  return h;
}

}  // namespace tilinglab::tiler
