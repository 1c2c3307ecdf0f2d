#include <benchmark/benchmark.h>

#include "nashsg/cournot.hpp"
#include "nashsg/smoothing.hpp"
#include "nashsg/solvers.hpp"

using namespace nashsg;

static void BM_TwoPointEstimate(benchmark::State& state) {
  const auto c6 = cournot_nonsmooth();
  const auto& g = *c6.structured;
  RandomStream noise(1, 1), dirs(1, 2);
  const double x = 4.2;
  for (auto _ : state) {
    auto e = two_point_gradient(g, 0, std::span<const double>(&x, 1), 0.5, g.draw_noise(noise), dirs);
    benchmark::DoNotOptimize(e.value[0]);
  }
}
BENCHMARK(BM_TwoPointEstimate);

static void BM_Projection(benchmark::State& state) {
  const auto box = BoxSet::uniform(static_cast<std::size_t>(state.range(0)), 0.0, 12.0);
  std::vector<double> x(box.dim());
  RandomStream s(2, 2);
  for (auto& v : x) v = sample_uniform(s, -5.0, 17.0);
  for (auto _ : state) {
    auto y = x;
    project_in_place(y, box);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Projection)->Arg(6)->Arg(1000);

static void BM_SaLowerSolve(benchmark::State& state) {
  const auto h4 = cournot_hierarchical();
  const LowerLevelConfig lc;
  const double x = 5.0;
  RandomStream s(3, 3);
  for (auto _ : state) {
    auto y = sa_lower_solve(*h4.hierarchical, 0, std::span<const double>(&x, 1),
                            static_cast<std::size_t>(state.range(0)), lc, s);
    benchmark::DoNotOptimize(y[0]);
  }
}
BENCHMARK(BM_SaLowerSolve)->Arg(10)->Arg(1000);

static void BM_RsRsgIteration(benchmark::State& state) {
  const auto c6 = cournot_nonsmooth();
  SolverConfig cfg;
  cfg.eta = 0.5;
  cfg.gamma = 0.02;
  cfg.batch = static_cast<std::size_t>(state.range(0));
  cfg.max_iters = 100;
  cfg.full_trace = true;
  cfg.x0.assign(6, 12.0);
  for (auto _ : state) {
    auto rec = rs_rsg_run(*c6.structured, cfg);
    benchmark::DoNotOptimize(rec.x_last.data());
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_RsRsgIteration)->Arg(1)->Arg(10);
BENCHMARK_MAIN();
