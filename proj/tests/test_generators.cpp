#include <doctest.h>

#include <cmath>
#include <set>

#include "tilinglab/generators.hpp"
#include "tilinglab/regularity.hpp"

using namespace tilinglab;

TEST_CASE("gen_random endpoints and determinism") {
  CHECK(gen::gen_random(3, 6, {0.0, 9}).edge_count() == 0);
  CHECK(gen::gen_random(3, 6, {1.0, 9}).edge_count() == 3 * 36);
  CHECK(gen::gen_random(3, 20, {0.3, 7}) == gen::gen_random(3, 20, {0.3, 7}));
  CHECK_FALSE(gen::gen_random(3, 20, {0.3, 7}) == gen::gen_random(3, 20, {0.3, 8}));
}

TEST_CASE("gen_random binomial moments") {
  // r=3, n=50, p=0.2: 7500 potential edges, mean 1500
  const int seeds = 200;
  double sum = 0, sumsq = 0;
  for (int s = 0; s < seeds; ++s) {
    const double count =
        static_cast<double>(gen::gen_random(3, 50, {0.2, 1000 + s}).edge_count());
    sum += count;
    sumsq += count * count;
  }
  const double mean = sum / seeds;
  const double sd = std::sqrt((sumsq - seeds * mean * mean) / (seeds - 1));
  CHECK(std::abs(mean - 1500.0) <= 3.0 * sd / std::sqrt(seeds));
  // sd itself close to the binomial sigma
  CHECK(sd == doctest::Approx(std::sqrt(7500 * 0.2 * 0.8)).epsilon(0.25));

  // expected edge count is monotone in p
  double sum_hi = 0;
  for (int s = 0; s < seeds; ++s)
    sum_hi += static_cast<double>(
        gen::gen_random(3, 50, {0.35, 5000 + s}).edge_count());
  CHECK(sum_hi / seeds > mean);
}

TEST_CASE("gen_extremal structure") {
  const PartiteGraph g = gen::gen_extremal(3, 10, 0.2);
  CHECK(g.edge_count() == 108);  // 3 * (2*2 + 2*8 + 8*2)
  CHECK(g.min_cross_degree() == 2);

  // A vertices have full degree, the B-induced subgraph is empty
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      for (int a = 0; a < 2; ++a) CHECK(g.degree({i, a}, j) == 10);
      for (int u = 2; u < 10; ++u)
        for (int v = 2; v < 10; ++v) CHECK_FALSE(g.adjacent({i, u}, {j, v}));
    }

  CHECK_THROWS_WITH_AS(gen::gen_extremal(3, 10, 0.5),
                       doctest::Contains("AlphaOutOfRange"), Error);
  CHECK_THROWS_AS(gen::gen_extremal(3, 10, 0.0), Error);
}

TEST_CASE("gen_sublinear structure") {
  // r=3, omega=1, n=90: eta = 1/9, |A_i| = 10
  const PartiteGraph g = gen::gen_sublinear(3, 90, 1.0);
  CHECK(g.min_cross_degree() == 10);
  std::size_t full_degree = 0;
  for (int i = 0; i < 3; ++i)
    for (int v = 0; v < 90; ++v)
      if (g.degree({i, v}, (i + 1) % 3) == 90) ++full_degree;
  CHECK(full_degree == 30);  // r * ceil(eta n) = n / (3 omega)

  for (int u = 10; u < 90; ++u)
    for (int v = 10; v < 90; ++v) CHECK_FALSE(g.adjacent({0, u}, {1, v}));

  CHECK_THROWS_WITH_AS(gen::gen_sublinear(3, 90, 0.5),
                       doctest::Contains("EtaTooSmall"), Error);
}

TEST_CASE("gen_superregular_star degree floor") {
  const PartiteGraph g = gen::gen_superregular_star(3, 40, 0.5, 3);
  for (int i = 1; i < 3; ++i)
    for (int v = 0; v < 40; ++v) {
      CHECK(g.degree({0, v}, i) > 20);
      CHECK(g.degree({i, v}, 0) > 20);
    }
  CHECK(g.pair_stats(1, 2).density == 0.0);
  CHECK(gen::gen_superregular_star(3, 40, 0.5, 3) == g);
}

TEST_CASE("gen_superregular_star passes the sampled regularity check") {
  // d=0.4 fixture vs the regularity module as oracle
  int passes = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const PartiteGraph g = gen::gen_superregular_star(3, 60, 0.4, 9000 + s);
    reg::VertexSet a{0, {}}, b{1, {}};
    for (std::uint32_t v = 0; v < 60; ++v) {
      a.indices.push_back(v);
      b.indices.push_back(v);
    }
    const reg::RegularityReport rep = reg::check_superregular(
        g, a, b, {0.1, 0.4}, reg::CheckMode::Sampled, 300, 77);
    passes += rep.ok;
  }
  CHECK(passes >= 95);
}

TEST_CASE("random_slice") {
  const PartiteGraph g = gen::gen_random(3, 10, {0.0, 0});

  std::vector<std::size_t> whole = {10};
  const auto one = gen::random_slice(g, 0, whole, 4);
  CHECK(one.size() == 1);
  CHECK(one[0].size() == 10);

  std::vector<std::size_t> singles(10, 1);
  const auto perm = gen::random_slice(g, 1, singles, 11);
  std::set<std::uint32_t> seen;
  for (const auto& slice : perm) {
    CHECK(slice.size() == 1);
    seen.insert(slice[0]);
  }
  CHECK(seen.size() == 10);

  // disjointness and exact sizes on an uneven request
  std::vector<std::size_t> sizes = {3, 3, 2};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto slices = gen::random_slice(g, 2, sizes, seed);
    std::set<std::uint32_t> all;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      CHECK(slices[k].size() == sizes[k]);
      all.insert(slices[k].begin(), slices[k].end());
    }
    CHECK(all.size() == 8);
  }

  std::vector<std::size_t> too_big = {6, 6};
  CHECK_THROWS_WITH_AS(gen::random_slice(g, 0, too_big, 0),
                       doctest::Contains("SizesExceedPart"), Error);
}

TEST_CASE("random_slice is uniform") {
  const PartiteGraph g = gen::gen_random(3, 10, {0.0, 0});
  std::vector<std::size_t> sizes = {3, 3};
  std::vector<int> hits(10, 0);
  const int seeds = 5000;
  for (int s = 0; s < seeds; ++s) {
    const auto slices = gen::random_slice(g, 0, sizes, 40000 + s);
    for (std::uint32_t v : slices[0]) ++hits[v];
  }
  for (int v = 0; v < 10; ++v)
    CHECK(std::abs(hits[v] / static_cast<double>(seeds) - 0.3) <= 0.02);
}
