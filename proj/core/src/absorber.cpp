#include "tilinglab/absorber.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "tilinglab/rng.hpp"

namespace tilinglab::absorber {

namespace {

std::uint64_t encode_edge(const HyperEdge& e, int n) {
  std::uint64_t key = 0;
  for (std::uint32_t v : e) key = key * static_cast<std::uint64_t>(n) + v;
  return key;
}

}  // namespace

std::size_t AuxHypergraph::degree(int part, std::uint32_t index) const {
  std::size_t deg = 0;
  for (const HyperEdge& e : edges)
    if (e[static_cast<std::size_t>(part) - 1] == index) ++deg;
  return deg;
}

bool AuxHypergraph::contains(const HyperEdge& e) const {
  static_assert(sizeof(std::uint64_t) >= 8);
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(edges.size() * 2);
  for (const HyperEdge& f : edges) keys.insert(encode_edge(f, n));
  return keys.contains(encode_edge(e, n));
}

AuxHypergraph build_aux_hypergraph(
    const PartiteGraph& g, const std::vector<std::uint32_t>& x, double d,
    const std::vector<std::vector<std::uint32_t>>& sides, std::size_t cap) {
  if (x.empty()) throw Error(ErrorCode::ConfigError, "X must be nonempty");
  if (!(d > 0.0) || !(d < 1.0))
    throw Error(ErrorCode::ConfigError, "d outside (0,1)");
  const int r = g.parts();
  AuxHypergraph f;
  f.r = r;
  f.n = g.part_size();
  f.base_set = x;
  f.threshold = std::pow(d / 2.0, r - 1) * static_cast<double>(x.size());

  if (sides.empty()) {
    f.sides.resize(r - 1);
    for (int p = 1; p < r; ++p) {
      f.sides[p - 1].resize(g.part_size());
      std::iota(f.sides[p - 1].begin(), f.sides[p - 1].end(), 0);
    }
  } else {
    if (static_cast<int>(sides.size()) != r - 1)
      throw Error(ErrorCode::ShapeMismatch, "need r-1 sides");
    f.sides = sides;
  }

  double tuple_space = 1.0;
  for (const auto& side : f.sides)
    tuple_space *= static_cast<double>(side.size());
  if (tuple_space > static_cast<double>(cap))
    throw Error(ErrorCode::TupleSpaceTooLarge,
                "side tuple space exceeds the cap");

  Bitset xmask(static_cast<std::size_t>(g.part_size()));
  for (std::uint32_t v : x) xmask.set(v);

  HyperEdge current(r - 1);
  // acc[k] = X cut down by the common neighborhoods of the first k chosen
  // side vertices; counts only shrink, so depth pruning is safe.
  std::vector<Bitset> acc(r, xmask);
  auto rec = [&](auto&& self, int depth) -> void {
    if (static_cast<double>(acc[depth].count()) < f.threshold) return;
    if (depth == r - 1) {
      f.edges.push_back(current);
      return;
    }
    for (std::uint32_t v : f.sides[depth]) {
      current[depth] = v;
      acc[depth + 1] = acc[depth];
      acc[depth + 1] &=
          g.neighbors({depth + 1, static_cast<int>(v)}, 0);
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return f;
}

AuxHypergraph reveal_hyperedges(const AuxHypergraph& f,
                                const PartiteGraph& g_random) {
  if (g_random.parts() != f.r || g_random.part_size() != f.n)
    throw Error(ErrorCode::ShapeMismatch, "reveal graph shape mismatch");
  AuxHypergraph out = f;
  out.edges.clear();
  for (const HyperEdge& e : f.edges) {
    bool keep = true;
    for (std::size_t a = 0; a < e.size() && keep; ++a)
      for (std::size_t b = a + 1; b < e.size() && keep; ++b)
        keep = g_random.adjacent(
            {static_cast<int>(a) + 1, static_cast<int>(e[a])},
            {static_cast<int>(b) + 1, static_cast<int>(e[b])});
    if (keep) out.edges.push_back(e);
  }
  return out;
}

GreedyMatchResult random_greedy_matching(const AuxHypergraph& f_tilde,
                                         std::size_t target,
                                         std::uint64_t seed) {
  for (const auto& side : f_tilde.sides)
    if (target > side.size())
      throw Error(ErrorCode::ConfigError, "target exceeds a side size");

  const int arity = f_tilde.r - 1;
  std::vector<Bitset> covered(arity,
                              Bitset(static_cast<std::size_t>(f_tilde.n)));
  auto blocked = [&](const HyperEdge& e) {
    for (int k = 0; k < arity; ++k)
      if (covered[k].test(e[k])) return true;
    return false;
  };

  std::vector<std::uint32_t> live(f_tilde.edges.size());
  std::iota(live.begin(), live.end(), 0);
  Rng rng(seed);
  GreedyMatchResult res;
  while (res.matching.size() < target && !live.empty()) {
    const std::size_t k = rng.below(live.size());
    const std::uint32_t id = live[k];
    live[k] = live.back();
    live.pop_back();
    const HyperEdge& e = f_tilde.edges[id];
    if (blocked(e)) continue;
    for (int s = 0; s < arity; ++s) covered[s].set(e[s]);
    res.matching.push_back(e);
  }
  res.reached_target = res.matching.size() == target;
  return res;
}

AuxBipartite build_aux_bipartite(const PartiteGraph& g,
                                 const std::vector<HyperEdge>& matching) {
  AuxBipartite b;
  b.right = matching;
  b.adj.resize(g.part_size());
  for (std::size_t m = 0; m < matching.size(); ++m) {
    Bitset common(static_cast<std::size_t>(g.part_size()));
    common.set_all();
    for (std::size_t k = 0; k < matching[m].size(); ++k)
      common &= g.neighbors(
          {static_cast<int>(k) + 1, static_cast<int>(matching[m][k])}, 0);
    common.for_each([&](std::size_t v) {
      b.adj[v].push_back(static_cast<std::uint32_t>(m));
    });
  }
  return b;
}

std::size_t count_good_edge_deficit(const std::vector<HyperEdge>& matching,
                                    const AuxHypergraph& f_x) {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(f_x.edges.size() * 2);
  for (const HyperEdge& e : f_x.edges) keys.insert(encode_edge(e, f_x.n));
  std::size_t deficit = 0;
  for (const HyperEdge& m : matching)
    if (!keys.contains(encode_edge(m, f_x.n))) ++deficit;
  return deficit;
}

const char* pipeline_stage_name(PipelineStage stage) {
  switch (stage) {
    case PipelineStage::None: return "none";
    case PipelineStage::GreedyStall: return "greedy_stall";
    case PipelineStage::NoMPrime: return "no_M_prime";
    case PipelineStage::GreedyV1Exhausted: return "greedy_V1_exhausted";
    case PipelineStage::HallDeficient: return "hall_deficient";
  }
  return "unknown";
}

namespace {

// Random (r-1)-partite graph on parts 1..r-1 (part 0 stays empty),
// deterministic per (seed, round) with one stream per part pair.
PartiteGraph random_round(int r, int n, double p, std::uint64_t seed,
                          std::uint64_t round) {
  std::vector<std::pair<VertexRef, VertexRef>> edges;
  for (int i = 1; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      Rng rng(derive_seed(seed, {round, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(j)}));
      if (p <= 0.0) continue;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (p >= 1.0 || rng.bernoulli(p))
            edges.emplace_back(VertexRef{i, a}, VertexRef{j, b});
    }
  return PartiteGraph(r, n, edges);
}

}  // namespace

PipelineResult star_tiling_pipeline(const PartiteGraph& g_star,
                                    const PipelineConfig& cfg) {
  if (!(cfg.d > 0.0) || !(cfg.d < 1.0))
    throw Error(ErrorCode::ConfigError, "d outside (0,1)");
  if (!(cfg.delta > 0.0) || !(cfg.delta <= cfg.d / 2.0))
    throw Error(ErrorCode::ConfigError, "need 0 < delta <= d/2");
  if (cfg.p < 0.0 || cfg.p > 1.0)
    throw Error(ErrorCode::ConfigError, "p outside [0,1]");

  const int r = g_star.parts();
  const int n = g_star.part_size();
  PipelineResult res;

  // two independent reveal rounds at p/2 each
  const PartiteGraph g1 = random_round(r, n, cfg.p / 2.0, cfg.seed, 1);
  const PartiteGraph g2 = random_round(r, n, cfg.p / 2.0, cfg.seed, 2);
  res.trace.g1_edges = g1.edge_count();
  res.trace.g2_edges = g2.edge_count();
  res.revealed_union = graph_union(graph_union(g_star, g1), g2);

  std::vector<std::uint32_t> v1_all(n);
  std::iota(v1_all.begin(), v1_all.end(), 0);

  const AuxHypergraph f = build_aux_hypergraph(g_star, v1_all, cfg.d);
  res.trace.f_edges = f.edge_count();
  const AuxHypergraph f_tilde = reveal_hyperedges(f, g1);
  res.trace.f_tilde_edges = f_tilde.edge_count();

  const std::size_t target =
      static_cast<std::size_t>(std::floor((1.0 - cfg.delta) * n));
  res.trace.m_target = target;
  GreedyMatchResult greedy =
      random_greedy_matching(f_tilde, target, derive_seed(cfg.seed, {3}));
  res.trace.m_size = greedy.matching.size();
  if (!greedy.reached_target) {
    res.failed_stage = PipelineStage::GreedyStall;
    return res;
  }

  // leftover sides
  std::vector<Bitset> used(r - 1, Bitset(static_cast<std::size_t>(n)));
  for (const HyperEdge& e : greedy.matching)
    for (int k = 0; k < r - 1; ++k) used[k].set(e[k]);
  std::vector<std::vector<std::uint32_t>> leftovers(r - 1);
  for (int k = 0; k < r - 1; ++k)
    for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v)
      if (!used[k].test(v)) leftovers[k].push_back(v);
  const std::size_t leftover = leftovers[0].size();
  res.trace.leftover_per_side = leftover;

  // exact perfect matching on the leftovers, revealed by the second round
  const AuxHypergraph f_prime =
      build_aux_hypergraph(g_star, v1_all, cfg.d, leftovers);
  res.trace.f_prime_edges = f_prime.edge_count();
  const AuxHypergraph f_tilde_prime = reveal_hyperedges(f_prime, g2);
  res.trace.f_tilde_prime_edges = f_tilde_prime.edge_count();

  std::vector<HyperEdge> m_prime;
  if (leftover > 0) {
    // map host indices to side positions for the generic matcher
    std::vector<std::vector<std::uint32_t>> pos(r - 1);
    for (int k = 0; k < r - 1; ++k) {
      pos[k].assign(n, ~0u);
      for (std::uint32_t q = 0; q < leftovers[k].size(); ++q)
        pos[k][leftovers[k][q]] = q;
    }
    std::vector<std::uint32_t> flat;
    flat.reserve(f_tilde_prime.edges.size() * (r - 1));
    for (const HyperEdge& e : f_tilde_prime.edges)
      for (int k = 0; k < r - 1; ++k) flat.push_back(pos[k][e[k]]);
    tiler::HyperMatchResult match = tiler::exact_hypergraph_matching(
        r - 1, static_cast<int>(leftover), flat, cfg.match_budget);
    if (match.status != tiler::SearchStatus::Perfect) {
      res.failed_stage = PipelineStage::NoMPrime;
      return res;
    }
    for (std::size_t id : match.edge_ids)
      m_prime.push_back(f_tilde_prime.edges[id]);
  }
  res.trace.m_prime_size = m_prime.size();

  // greedy distinct V_1 extension of M'
  std::vector<bool> v1_used(n, false);
  std::vector<std::pair<std::uint32_t, HyperEdge>> prime_copies;
  std::sort(m_prime.begin(), m_prime.end());
  for (const HyperEdge& e : m_prime) {
    Bitset common(static_cast<std::size_t>(n));
    common.set_all();
    for (int k = 0; k < r - 1; ++k)
      common &= g_star.neighbors({k + 1, static_cast<int>(e[k])}, 0);
    bool assigned = false;
    for (std::size_t v = common.next(0); v < common.size();
         v = common.next(v + 1)) {
      if (v1_used[v]) continue;
      v1_used[v] = true;
      prime_copies.emplace_back(static_cast<std::uint32_t>(v), e);
      assigned = true;
      break;
    }
    if (!assigned) {
      res.failed_stage = PipelineStage::GreedyV1Exhausted;
      return res;
    }
  }

  // Hall matching of the remaining V_1 onto M
  std::vector<std::uint32_t> v1_rest;
  for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v)
    if (!v1_used[v]) v1_rest.push_back(v);
  const AuxBipartite b = build_aux_bipartite(g_star, greedy.matching);
  std::vector<std::vector<std::uint32_t>> adj(v1_rest.size());
  for (std::size_t k = 0; k < v1_rest.size(); ++k) adj[k] = b.adj[v1_rest[k]];
  tiler::HallResult hall =
      tiler::hall_perfect_matching(v1_rest.size(), greedy.matching.size(), adj);
  res.trace.hall_perfect = hall.perfect;
  if (!hall.perfect) {
    res.failed_stage = PipelineStage::HallDeficient;
    for (std::uint32_t s : hall.witness) res.hall_witness.push_back(v1_rest[s]);
    return res;
  }

  // assemble and re-validate against everything revealed
  auto to_copy = [&](std::uint32_t v1, const HyperEdge& e) {
    tiler::KrCopy copy;
    copy.index_per_part.resize(r);
    copy.index_per_part[0] = static_cast<std::int32_t>(v1);
    for (int k = 0; k < r - 1; ++k)
      copy.index_per_part[k + 1] = static_cast<std::int32_t>(e[k]);
    return copy;
  };
  for (std::size_t k = 0; k < v1_rest.size(); ++k)
    res.tiling.copies.push_back(
        to_copy(v1_rest[k], greedy.matching[hall.match[k]]));
  for (const auto& [v, e] : prime_copies)
    res.tiling.copies.push_back(to_copy(v, e));
  std::sort(res.tiling.copies.begin(), res.tiling.copies.end());

  std::string why;
  if (!tiler::validate_tiling(res.revealed_union, res.tiling, true, &why))
    throw Error(ErrorCode::Internal, "pipeline tiling fails validation: " + why);
  res.perfect = true;
  return res;
}

}  // namespace tilinglab::absorber
