#include <benchmark/benchmark.h>

#include <cmath>

#include "tilinglab/generators.hpp"
#include "tilinglab/tiler.hpp"

namespace {

void BM_EnumerateKr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = tilinglab::gen::gen_random(3, n, {0.3, 17});
  for (auto _ : state) {
    auto res = tilinglab::tiler::enumerate_kr(g);
    benchmark::DoNotOptimize(res.copies.size());
  }
}
BENCHMARK(BM_EnumerateKr)->Arg(30)->Arg(60)->Arg(100);

void BM_ExactTiling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto host = tilinglab::gen::gen_extremal(3, n, 0.1);
  const double p = 2.0 * std::pow(n, -2.0 / 3.0);
  const auto g = graph_union(host, tilinglab::gen::gen_random(3, n, {p, 5}));
  for (auto _ : state) {
    auto res = tilinglab::tiler::exact_perfect_tiling(g);
    benchmark::DoNotOptimize(res.status);
  }
}
BENCHMARK(BM_ExactTiling)->Arg(12)->Arg(18)->Arg(24);

void BM_GreedyTiling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double p = 4.0 * std::pow(n, -2.0 / 3.0);
  const auto g = tilinglab::gen::gen_random(3, n, {p, 11});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto tiling = tilinglab::tiler::greedy_partial_tiling(g, ++seed);
    benchmark::DoNotOptimize(tiling.copies.size());
  }
}
BENCHMARK(BM_GreedyTiling)->Arg(50)->Arg(100);

}  // namespace
