#include <doctest.h>

#include "oracles.hpp"
#include "tilinglab/generators.hpp"
#include "tilinglab/rng.hpp"
#include "tilinglab/startile.hpp"

using namespace tilinglab;
using startile::Rational;

namespace {

// host with delta* >= floor, resampled until the floor holds
PartiteGraph random_host_min_degree(int r, int n, double p, std::size_t floor,
                                    std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const PartiteGraph g =
        gen::gen_random(r, n, {p, derive_seed(seed, {attempt})});
    if (g.min_cross_degree() >= floor) return g;
  }
}

std::vector<std::vector<mpq_class>> star_columns(const PartiteGraph& g, int t) {
  const auto enumeration = startile::enumerate_stars(g, t);
  std::vector<std::vector<mpq_class>> cols;
  for (const auto& star : enumeration.stars) {
    std::vector<mpq_class> col(g.vertex_count(), 0);
    auto vid = [&](VertexRef v) {
      return static_cast<std::size_t>(v.part) * g.part_size() + v.index;
    };
    col[vid(star.center)] = 1;
    col[vid(star.big_leaf)] = star.t;
    for (const auto& leaf : star.small_leaves) col[vid(leaf)] = 1;
    cols.push_back(std::move(col));
  }
  return cols;
}

}  // namespace

TEST_CASE("enumerate_stars") {
  const PartiteGraph k31 = gen::gen_random(3, 1, {1.0, 0});
  const auto stars = startile::enumerate_stars(k31, 1);
  CHECK(stars.stars.size() == 6);  // one per ordered part pair
  CHECK_FALSE(stars.truncated);

  CHECK(startile::enumerate_stars(PartiteGraph(3, 2, {}), 1).stars.empty());

  // two-tier host: a star centered in a B vertex has all leaves in A parts
  const PartiteGraph host = gen::gen_extremal(3, 10, 0.2);
  const auto host_stars = startile::enumerate_stars(host, 4);
  int b_centered = 0;
  for (const auto& star : host_stars.stars) {
    if (star.center.index < 2) continue;  // A vertex
    ++b_centered;
    CHECK(star.big_leaf.index < 2);
    for (const auto& leaf : star.small_leaves) CHECK(leaf.index < 2);
  }
  CHECK(b_centered > 0);

  CHECK_THROWS_AS(startile::enumerate_stars(k31, 0), Error);
}

TEST_CASE("solve_fractional on the complete triangle") {
  const PartiteGraph k31 = gen::gen_random(3, 1, {1.0, 0});
  const auto res = startile::solve_fractional(k31, 1);
  REQUIRE(res.status == startile::LpStatus::Feasible);
  CHECK(startile::verify_fractional(k31, res.tiling));
  Rational total = 0;
  for (const auto& w : res.tiling.weights) total += w;
  CHECK(total == 1);  // each star has chi = (1,1,1)
}

TEST_CASE("isolated vertex forces a verified certificate") {
  // (0,0) is in no star at all
  std::vector<std::pair<VertexRef, VertexRef>> edges;
  for (int a = 1; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      edges.push_back({{0, a}, {1, b}});
      edges.push_back({{0, a}, {2, b}});
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) edges.push_back({{1, a}, {2, b}});
  const PartiteGraph g(3, 3, edges);
  const auto res = startile::solve_fractional(g, 2);
  REQUIRE(res.status == startile::LpStatus::Infeasible);
  CHECK(startile::verify_certificate(g, 2, res.certificate));

  // hand-rolled certificates
  startile::FarkasCertificate zero;
  zero.x.assign(g.vertex_count(), Rational(0));
  CHECK_FALSE(startile::verify_certificate(g, 2, zero));

  const PartiteGraph k31 = gen::gen_random(3, 1, {1.0, 0});
  startile::FarkasCertificate ones;
  ones.x.assign(3, Rational(1));
  CHECK_FALSE(startile::verify_certificate(k31, 1, ones));
}

TEST_CASE("verify_fractional catches corruption") {
  const PartiteGraph g = random_host_min_degree(3, 4, 0.7, 1, 11);
  const auto res = startile::solve_fractional(g, 3);
  REQUIRE(res.status == startile::LpStatus::Feasible);
  CHECK(startile::verify_fractional(g, res.tiling));

  auto doubled = res.tiling;
  doubled.weights[0] *= 2;
  CHECK_FALSE(startile::verify_fractional(g, doubled));

  // a non-star: center not adjacent to its claimed big leaf
  PartiteGraph sparse(3, 1, {});
  startile::FractionalTiling bogus;
  bogus.t = 1;
  bogus.stars.push_back({{0, 0}, {1, 0}, {{2, 0}}, 1});
  bogus.weights.push_back(Rational(1));
  CHECK_FALSE(startile::verify_fractional(sparse, bogus));
}

TEST_CASE("integralize") {
  SUBCASE("uniform sixths") {
    startile::FractionalTiling ft;
    ft.t = 1;
    for (int i = 0; i < 6; ++i) {
      ft.stars.push_back({});
      ft.weights.push_back(Rational(1, 6));
    }
    const auto integral = startile::integralize(ft);
    CHECK(integral.denominator == 6);
    for (const auto& rep : integral.replication) CHECK(rep == 1);
  }

  SUBCASE("lcm arithmetic") {
    startile::FractionalTiling ft;
    ft.t = 1;
    ft.stars.resize(3);
    ft.weights = {Rational(1, 2), Rational(1, 3), Rational(1, 6)};
    const auto integral = startile::integralize(ft);
    CHECK(integral.denominator == 6);
    CHECK(integral.replication[0] == 3);
    CHECK(integral.replication[1] == 2);
    CHECK(integral.replication[2] == 1);
  }

  SUBCASE("solver outputs satisfy the replication identity") {
    const PartiteGraph g = random_host_min_degree(3, 5, 0.6, 2, 4);
    const auto res = startile::solve_fractional(g, 4);
    REQUIRE(res.status == startile::LpStatus::Feasible);
    const auto integral = startile::integralize(res.tiling);
    // sum over stars containing v of replication * label == D for every v
    std::vector<mpz_class> load(g.vertex_count(), 0);
    auto vid = [&](VertexRef v) {
      return static_cast<std::size_t>(v.part) * g.part_size() + v.index;
    };
    for (std::size_t s = 0; s < res.tiling.stars.size(); ++s) {
      const auto& star = res.tiling.stars[s];
      load[vid(star.center)] += integral.replication[s];
      load[vid(star.big_leaf)] += integral.replication[s] * star.t;
      for (const auto& leaf : star.small_leaves)
        load[vid(leaf)] += integral.replication[s];
    }
    for (const auto& l : load) CHECK(l == integral.denominator);
  }
}

TEST_CASE("feasibility is monotone under edge union") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PartiteGraph g = random_host_min_degree(3, 5, 0.5, 1, 100 + seed);
    const auto res = startile::solve_fractional(g, 6);
    if (res.status != startile::LpStatus::Feasible) continue;
    const PartiteGraph u =
        graph_union(g, gen::gen_random(3, 5, {0.3, 999 + seed}));
    // the same weights stay valid on the union
    CHECK(startile::verify_fractional(u, res.tiling));
    CHECK(startile::solve_fractional(u, 6).status ==
          startile::LpStatus::Feasible);
  }
}

TEST_CASE("exhaustive cross-check against the basic-solution oracle (n=1)") {
  // all 2^3 tripartite graphs on n=1, then a sweep of r=4 graphs
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<std::pair<VertexRef, VertexRef>> edges;
    if (mask & 1) edges.push_back({{0, 0}, {1, 0}});
    if (mask & 2) edges.push_back({{0, 0}, {2, 0}});
    if (mask & 4) edges.push_back({{1, 0}, {2, 0}});
    const PartiteGraph g(3, 1, edges);
    const bool oracle = oracles::balanced_cover_feasible_bruteforce(
        3, star_columns(g, 1));
    const auto res = startile::solve_fractional(g, 1);
    CHECK((res.status == startile::LpStatus::Feasible) == oracle);
  }
  for (int mask = 0; mask < 64; mask += 3) {
    std::vector<std::pair<VertexRef, VertexRef>> edges;
    int bit = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j, ++bit)
        if (mask & (1 << bit)) edges.push_back({{i, 0}, {j, 0}});
    const PartiteGraph g(4, 1, edges);
    const bool oracle = oracles::balanced_cover_feasible_bruteforce(
        4, star_columns(g, 1));
    const auto res = startile::solve_fractional(g, 1);
    CHECK((res.status == startile::LpStatus::Feasible) == oracle);
  }
}

TEST_CASE("the lemma guarantee holds at small scale") {
  // delta* >= ceil(alpha n) with t >= (r-1) floor((1-alpha) n) / ceil(alpha n)
  const int n = 8;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PartiteGraph g = random_host_min_degree(3, n, 0.55, 2, 700 + seed);
    // alpha = 1/4: t >= 2*6/2 = 6
    const auto res = startile::solve_fractional(g, 6);
    CHECK(res.status == startile::LpStatus::Feasible);
    CHECK(startile::verify_fractional(g, res.tiling));
  }
}

TEST_CASE("rational strings round-trip") {
  const Rational q(22, 7);
  CHECK(startile::rational_to_string(q) == "22/7");
  CHECK(startile::rational_from_string("22/7") == q);
  CHECK(startile::rational_from_string("-3") == Rational(-3));
  CHECK(startile::rational_from_string("4/6") == Rational(2, 3));
}
