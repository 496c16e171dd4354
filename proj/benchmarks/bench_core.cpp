#include <benchmark/benchmark.h>

#include <random>

#include "sublap/eigensolve.hpp"
#include "sublap/metric.hpp"
#include "sublap/verify.hpp"

using namespace sublap;

namespace {

FrameOperator make_grushin(int res) {
  auto grid =
      build_grid(DomainSpec::box({{-1.0, 1.0}, {-1.0, 1.0}}), {res});
  return FrameOperator(VectorFieldFrame::grushin(), grid);
}

ScalarField noise_field(const GridPtr& grid) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  ScalarField u(grid);
  for (double& v : u.values()) v = dist(rng);
  return u;
}

}  // namespace

static void BM_Gradient(benchmark::State& state) {
  FrameOperator op = make_grushin(static_cast<int>(state.range(0)));
  const ScalarField u = noise_field(op.grid_ptr());
  for (auto _ : state) {
    HField g = op.gradient(u);
    benchmark::DoNotOptimize(g.values().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gradient)->Arg(32)->Arg(64)->Arg(128)->Complexity();

static void BM_PLaplacian(benchmark::State& state) {
  FrameOperator op = make_grushin(64);
  const ScalarField u = noise_field(op.grid_ptr());
  const double p = state.range(0) / 10.0;
  for (auto _ : state) {
    ScalarField r = op.p_laplacian(u, p);
    benchmark::DoNotOptimize(r.values().data());
  }
}
BENCHMARK(BM_PLaplacian)->Arg(20)->Arg(25)->Arg(30);

static void BM_AssembleP2(benchmark::State& state) {
  FrameOperator op = make_grushin(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto a = op.assemble_p2_matrix();
    benchmark::DoNotOptimize(a.valuePtr());
  }
}
BENCHMARK(BM_AssembleP2)->Arg(32)->Arg(64);

static void BM_ReachabilityGraph(benchmark::State& state) {
  auto grid = build_grid(DomainSpec::box({{-1.0, 1.0}, {-1.0, 1.0}}),
                         {static_cast<int>(state.range(0))});
  const auto frame = VectorFieldFrame::grushin();
  for (auto _ : state) {
    auto g = build_reachability_graph(frame, grid, 2);
    benchmark::DoNotOptimize(g.costs.data());
  }
}
BENCHMARK(BM_ReachabilityGraph)->Arg(33)->Arg(65);

static void BM_Dijkstra(benchmark::State& state) {
  auto grid = build_grid(DomainSpec::box({{-1.0, 1.0}, {-1.0, 1.0}}),
                         {static_cast<int>(state.range(0))});
  const auto g =
      build_reachability_graph(VectorFieldFrame::grushin(), grid, 2);
  for (auto _ : state) {
    DistanceField df = control_distance_field(g, 0);
    benchmark::DoNotOptimize(df.values.data());
  }
}
BENCHMARK(BM_Dijkstra)->Arg(33)->Arg(65)->Arg(129);

static void BM_SolveP2(benchmark::State& state) {
  FrameOperator op = make_grushin(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  for (auto _ : state) {
    EigenResult r = solve_p2(op, cfg);
    benchmark::DoNotOptimize(r.lambda1);
  }
}
BENCHMARK(BM_SolveP2)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ConvexitySamples(benchmark::State& state) {
  for (auto _ : state) {
    CheckReport rep =
        convexity_check(3.0, static_cast<int>(state.range(0)), 5, 3);
    benchmark::DoNotOptimize(rep.statistic);
  }
}
BENCHMARK(BM_ConvexitySamples)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
