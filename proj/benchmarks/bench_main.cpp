#include <benchmark/benchmark.h>

#include "s1map/circle_map.hpp"
#include "s1map/diffeo.hpp"
#include "s1map/examples.hpp"
#include "s1map/fields.hpp"

namespace {

using namespace s1map;

SimplexPoint spread_targets(int n, double squeeze) {
  // First gap squeezed, remainder uniform.
  std::vector<double> t(n - 1);
  t[0] = squeeze;
  for (int a = 2; a < n; ++a) {
    t[a - 1] = squeeze + (1.0 - squeeze) * (a - 1) / (n - 1);
  }
  return SimplexPoint(std::move(t));
}

void BM_monotone_lift_build(benchmark::State& state) {
  int n = 4;
  double squeeze = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CircleDiffeo::monotone_lift(spread_targets(n, squeeze), n));
  }
}
BENCHMARK(BM_monotone_lift_build)->Arg(8)->Arg(100)->Arg(1000);

void BM_monotone_lift_eval(benchmark::State& state) {
  CircleDiffeo g = CircleDiffeo::monotone_lift(spread_targets(4, 0.05), 4);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.lift(t));
    t += 0.001953125;
  }
}
BENCHMARK(BM_monotone_lift_eval);

void BM_inverse_eval(benchmark::State& state) {
  CircleDiffeo g = CircleDiffeo::monotone_lift(spread_targets(4, 0.05), 4);
  CircleDiffeo inv = g.inverse();
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inv.lift(t));
    t += 0.001953125;
  }
}
BENCHMARK(BM_inverse_eval);

void BM_analyze_fourier(benchmark::State& state) {
  CircleMap f = examples::four_wave();
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(f));
  }
}
BENCHMARK(BM_analyze_fourier);

void BM_analyze_normalized(benchmark::State& state) {
  CircleMap f = examples::two_wave();
  MapAnalysis a = analyze(f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize_exceptional(f, a));
  }
}
BENCHMARK(BM_analyze_normalized);

void BM_lift_target_eval(benchmark::State& state) {
  CircleMap f = examples::two_wave();
  NormalizedMap nm = normalize_exceptional(f, analyze(f));
  std::vector<double> targets{0.22, 0.5, 0.74};
  CircleDiffeo r = CircleDiffeo::monotone_lift(SimplexPoint(targets), 4);
  CircleDiffeo h = lift_target_diffeo(nm.map, nm.analysis, r);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.lift(t));
    t += 0.001953125;
  }
}
BENCHMARK(BM_lift_target_eval);

void BM_flow_integrate(benchmark::State& state) {
  CircleMap f = examples::degree_two_covering();
  MapAnalysis a = analyze(f);
  CompatibleField field = global_field(f, a);
  auto fn = [&](Angle x) { return field(x); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow_integrate(fn, Angle(0.1), 0.75, 1e-9));
  }
}
BENCHMARK(BM_flow_integrate);

}  // namespace

BENCHMARK_MAIN();
