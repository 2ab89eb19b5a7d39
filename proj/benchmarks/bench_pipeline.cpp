#include <benchmark/benchmark.h>

#include <cmath>

#include "tilinglab/absorber.hpp"
#include "tilinglab/generators.hpp"

namespace {

void BM_StarTilingPipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = tilinglab::gen::gen_superregular_star(3, n, 0.4, 9);
  tilinglab::absorber::PipelineConfig cfg;
  cfg.d = 0.4;
  cfg.delta = 0.04;
  cfg.p = 8.0 * std::log(n) / n;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = ++seed;
    auto res = tilinglab::absorber::star_tiling_pipeline(g, cfg);
    benchmark::DoNotOptimize(res.perfect);
  }
}
BENCHMARK(BM_StarTilingPipeline)->Arg(30)->Arg(60);

void BM_BuildAuxHypergraph(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = tilinglab::gen::gen_superregular_star(3, n, 0.4, 9);
  std::vector<std::uint32_t> x(n);
  for (int v = 0; v < n; ++v) x[v] = v;
  for (auto _ : state) {
    auto f = tilinglab::absorber::build_aux_hypergraph(g, x, 0.4);
    benchmark::DoNotOptimize(f.edge_count());
  }
}
BENCHMARK(BM_BuildAuxHypergraph)->Arg(30)->Arg(60)->Arg(90);

}  // namespace
