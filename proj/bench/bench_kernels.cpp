// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to the
// core count; on one core the parallel variants only measure overhead.

#include <benchmark/benchmark.h>

#include "cpneq/force_neq.hpp"
#include "cpneq/polarization.hpp"

using namespace cpneq;

namespace {

GrapheneSheet sheet() {
  GrapheneSheet g;
  g.delta = 0.2;
  g.mu = 0.15;
  return g;
}

Scenario scenario(double tp) {
  Scenario s;
  s.separation = 1000.0;
  s.environment_temperature = 300.0;
  s.plate_temperature = tp;
  s.plate.substrate = Substrate::default_sio2();
  s.plate.sheet = sheet();
  return s;
}

void polarization(benchmark::State& state) {
  PolarizationOptions o;
  o.parallel = state.range(0) != 0;
  const auto g = sheet();
  for (auto _ : state) benchmark::DoNotOptimize(pi_real(g, 0.35, 40.0, 300.0, o));
}

void equilibrium(benchmark::State& state) {
  ForceSpec spec;
  spec.execution = state.range(0) ? Execution::Parallel : Execution::Serial;
  const auto s = scenario(300.0);
  for (auto _ : state) benchmark::DoNotOptimize(equilibrium_force(s, spec));
}

void inner(benchmark::State& state) {
  ForceSpec spec;
  spec.execution = state.range(0) ? Execution::Parallel : Execution::Serial;
  const auto s = scenario(500.0);
  for (auto _ : state) benchmark::DoNotOptimize(nonequilibrium_inner(s, 0.05, spec));
}

void correction(benchmark::State& state) {
  ForceSpec spec;
  spec.rel_tol = 1e-3;
  spec.execution = state.range(0) ? Execution::Parallel : Execution::Serial;
  const auto s = scenario(500.0);
  for (auto _ : state) benchmark::DoNotOptimize(nonequilibrium_correction(s, spec));
}

}  // namespace

BENCHMARK(polarization)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(equilibrium)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(inner)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(correction)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
