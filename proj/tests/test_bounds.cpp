#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tilinglab/bounds.hpp"
#include "tilinglab/generators.hpp"
#include "tilinglab/rng.hpp"
#include "tilinglab/tiler.hpp"

using namespace tilinglab;

TEST_CASE("chernoff_tail") {
  CHECK(bounds::chernoff_tail(0.0, 0.5) == doctest::Approx(2.0));
  CHECK(bounds::chernoff_tail(300.0, 0.5) ==
        doctest::Approx(2.0 * std::exp(-12.5)));
  CHECK_THROWS_WITH_AS(bounds::chernoff_tail(1.0, 1.5),
                       doctest::Contains("XiOutOfRange"), Error);
  CHECK_THROWS_AS(bounds::chernoff_tail(1.0, 0.0), Error);

  CHECK(bounds::chernoff_upper_tail(7.0, 1.0).has_value());
  CHECK(*bounds::chernoff_upper_tail(7.0, 1.0) == doctest::Approx(std::exp(-7.0)));
  CHECK_FALSE(bounds::chernoff_upper_tail(6.9, 1.0).has_value());
}

TEST_CASE("chernoff Monte Carlo sandwich") {
  // Binomial(1000, 0.3), xi = 0.3: the empirical two-sided tail never exceeds
  // the bound
  Rng rng(55);
  const int samples = 100000;
  int outside = 0;
  for (int s = 0; s < samples; ++s) {
    int x = 0;
    for (int i = 0; i < 1000; ++i) x += rng.bernoulli(0.3);
    outside += std::abs(x - 300) >= 90;
  }
  const double empirical = static_cast<double>(outside) / samples;
  CHECK(empirical <= bounds::chernoff_tail(300.0, 0.3));
}

TEST_CASE("janson_bounds") {
  SUBCASE("single independent event is tight") {
    const double q = 0.3;
    bounds::JansonInput in{q, 0.0, -std::log1p(-q)};
    const auto b = bounds::janson_bounds(in, 0.0);
    CHECK(b.lower_p_s0 == doctest::Approx(0.7));
    CHECK(b.upper_p_s0 == doctest::Approx(std::exp(-q * q / q)));
    CHECK(b.lower_p_s0 <= 0.7 + 1e-12);
  }

  SUBCASE("independent case: lower bound equals the exact probability") {
    const std::vector<double> qs = {0.1, 0.25, 0.4, 0.5};
    double mu = 0, mu_prime = 0, exact = 1;
    for (double q : qs) {
      mu += q;
      mu_prime += -std::log1p(-q);
      exact *= 1 - q;
    }
    const auto b = bounds::janson_bounds({mu, 0.0, mu_prime}, mu / 2);
    CHECK(b.lower_p_s0 == doctest::Approx(exact));
    CHECK(b.upper_p_s0 >= exact - 1e-12);
  }

  SUBCASE("log-space values survive underflow") {
    const auto b = bounds::janson_bounds({2000.0, 10.0, 2500.0}, 1000.0);
    CHECK(b.lower_p_s0 == 0.0);
    CHECK(b.log_lower_p_s0 == doctest::Approx(-2500.0));
    CHECK(b.log_upper_p_s0 == doctest::Approx(-2000.0 * 2000.0 / 2010.0));
    CHECK(b.log_lower_tail == doctest::Approx(-1000.0 * 1000.0 / (2.0 * 2010.0)));
  }

  CHECK_THROWS_WITH_AS(bounds::janson_bounds({1.0, 0.0, 1.0}, 2.0),
                       doctest::Contains("TOutOfRange"), Error);
}

TEST_CASE("kr_count_moments endpoints") {
  const auto at_one = bounds::kr_count_moments(3, 8, 1.0);
  CHECK(at_one.mu == doctest::Approx(512.0));
  double expect_delta = 0;
  expect_delta += 512.0 * 3 * 7;  // l = 2
  CHECK(at_one.delta_bar == doctest::Approx(expect_delta));

  const auto at_zero = bounds::kr_count_moments(3, 8, 0.0);
  CHECK(at_zero.mu == 0.0);
  CHECK(at_zero.delta_bar == 0.0);
}

TEST_CASE("kr_count_moments matches exhaustive enumeration at m=8") {
  auto choose2 = [](long long a) { return a * (a - 1) / 2; };
  for (int r : {3, 4}) {
    const auto counts = oracles::kr_moments_bruteforce(r, 8);
    // mu: coefficient of p^{C(r,2)} is m^r
    CHECK(counts.mu_count == static_cast<long long>(std::pow(8, r)));
    // delta: per-exponent ordered-pair counts equal the formula coefficients
    std::map<long long, long long> formula;
    for (int l = 2; l <= r - 1; ++l) {
      double coef = std::pow(8, r);
      double binom = 1;
      for (int i = 0; i < l; ++i) binom = binom * (r - i) / (i + 1);
      coef *= binom * std::pow(7, r - l);
      formula[2 * choose2(r) - choose2(l)] +=
          static_cast<long long>(std::llround(coef));
    }
    CHECK(counts.delta == formula);

    // and the double-valued formula agrees when evaluated at p = 0.4
    const auto m = bounds::kr_count_moments(r, 8, 0.4);
    double mu_oracle = counts.mu_count * std::pow(0.4, choose2(r));
    double delta_oracle = 0;
    for (const auto& [e, cnt] : counts.delta)
      delta_oracle += static_cast<double>(cnt) * std::pow(0.4, e);
    CHECK(m.mu == doctest::Approx(mu_oracle));
    CHECK(m.delta_bar == doctest::Approx(delta_oracle).epsilon(1e-9));
  }
}

TEST_CASE("kr_count_moments monotone in p and m") {
  double last = -1;
  for (double p : {0.1, 0.2, 0.4, 0.8}) {
    const auto m = bounds::kr_count_moments(3, 10, p);
    CHECK(m.mu > last);
    last = m.mu;
  }
  CHECK(bounds::kr_count_moments(3, 12, 0.3).mu >
        bounds::kr_count_moments(3, 10, 0.3).mu);
  CHECK(bounds::kr_count_moments(3, 12, 0.3).delta_bar >
        bounds::kr_count_moments(3, 10, 0.3).delta_bar);
}

TEST_CASE("isolated_vertex_moments") {
  SUBCASE("mu = 2 ln omega at the matched p") {
    const int r = 3, n = 50;
    const double omega = 4.0;
    // n^{r-1} p^{C(r,2)} = ln(omega)
    const double p = std::pow(std::log(omega) / std::pow(n, r - 1),
                              1.0 / 3.0);
    const auto m = bounds::isolated_vertex_moments(r, n, p, omega);
    CHECK(m.mu == doctest::Approx(2.0 * std::log(omega)));
  }

  SUBCASE("p = 0") {
    const auto m = bounds::isolated_vertex_moments(3, 10, 0.0, 2.0);
    CHECK(m.mu == 0.0);
    CHECK(m.mu_prime == 0.0);
    CHECK(m.delta_bar == 0.0);
  }

  SUBCASE("the simplified bound dominates and meets the n^{-1/4} chain") {
    // the chain needs omega >= e and very large n; the calculators are
    // closed-form, so evaluate them there directly
    const int r = 3;
    const double n = 1e11;
    const double omega = std::exp(1.0);
    const double p =
        std::pow(n, -2.0 / r) * std::pow(std::log(omega), 1.0 / 3.0);
    const auto m = bounds::isolated_vertex_moments(r, n, p, omega);
    CHECK(m.mu == doctest::Approx(2.0));  // 2 ln omega
    CHECK(m.delta_bar <= m.delta_bar_simplified * (1 + 1e-9));
    CHECK(m.delta_bar_simplified <= std::pow(n, -0.25));
  }
}

TEST_CASE("count_isolated") {
  CHECK(bounds::count_isolated(gen::gen_random(3, 6, {1.0, 0}), 0) == 0);
  CHECK(bounds::count_isolated(PartiteGraph(3, 6, {}), 1) == 6);

  // cross-check against coverage marks from full enumeration
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PartiteGraph g = gen::gen_random(3, 8, {0.35, 100 + seed});
    const auto cliques = tiler::enumerate_kr(g);
    for (int part = 0; part < 3; ++part) {
      std::vector<bool> in_clique(8, false);
      for (const auto& copy : cliques.copies)
        in_clique[copy.index_per_part[part]] = true;
      std::size_t covered = 0;
      for (bool b : in_clique) covered += b;
      CHECK(bounds::count_isolated(g, part) == 8 - covered);
    }
  }
}

TEST_CASE("janson sandwich for fixed-vertex triangle counts") {
  // r=3, n=10, p=0.3: S = triangles through one fixed vertex of part 0
  const int n = 10;
  const double p = 0.3;
  const double mu = n * n * std::pow(p, 3);
  const double delta = 2.0 * n * n * (n - 1) * std::pow(p, 5);
  const double mu_prime = -n * n * std::log1p(-std::pow(p, 3));
  const auto b = bounds::janson_bounds({mu, delta, mu_prime}, mu);

  Rng rng(808);
  const int seeds = 2000;
  int zero = 0;
  for (int s = 0; s < seeds; ++s) {
    // sample only the edges a triangle through v can use
    std::vector<bool> va(n), vb(n);
    for (int i = 0; i < n; ++i) va[i] = rng.bernoulli(p);
    for (int i = 0; i < n; ++i) vb[i] = rng.bernoulli(p);
    bool any = false;
    for (int a = 0; a < n && !any; ++a)
      for (int c = 0; c < n && !any; ++c)
        any = va[a] && vb[c] && rng.bernoulli(p);
    zero += !any;
  }
  const double phat = static_cast<double>(zero) / seeds;
  const double se = std::sqrt(phat * (1 - phat) / seeds);
  CHECK(phat >= b.lower_p_s0 - 3 * se);
  CHECK(phat <= b.upper_p_s0_weak + 3 * se);
}
