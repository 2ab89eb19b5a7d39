#include <benchmark/benchmark.h>

#include "tilinglab/generators.hpp"
#include "tilinglab/startile.hpp"

namespace {

void BM_EnumerateStars(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = tilinglab::gen::gen_random(3, n, {0.5, 23});
  for (auto _ : state) {
    auto stars = tilinglab::startile::enumerate_stars(g, 8);
    benchmark::DoNotOptimize(stars.stars.size());
  }
}
BENCHMARK(BM_EnumerateStars)->Arg(8)->Arg(12);

void BM_SolveFractional(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = tilinglab::gen::gen_random(3, n, {0.6, 23});
  for (auto _ : state) {
    auto res = tilinglab::startile::solve_fractional(g, 16);
    benchmark::DoNotOptimize(res.status);
  }
}
BENCHMARK(BM_SolveFractional)->Arg(8)->Arg(12);

}  // namespace
