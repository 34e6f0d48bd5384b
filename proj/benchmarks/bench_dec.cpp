#include "mwf/dec/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace mwf::dec;

void BM_LeapfrogStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Complex k({n, n, n}, 1.0);
  const Solver solver(k, dt_from_courant(k, {}, 0.5), {}, 3, static_cast<int>(state.range(1)));
  SimState s = plane_wave_state(solver, {0, n / 2, 1, 1.0});
  for (auto _ : state) solver.step(s);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k.edges() + k.faces()));
}
BENCHMARK(BM_LeapfrogStep)->Args({32, 1})->Args({64, 1})->Args({64, 4})->Unit(benchmark::kMillisecond);

void BM_BuildComplex(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Complex({n, n, n}, 1.0));
}
BENCHMARK(BM_BuildComplex)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Diagnostics(benchmark::State& state) {
  const Complex k({32, 32, 32}, 1.0);
  const Solver solver(k, dt_from_courant(k, {}, 0.5));
  const SimState s = plane_wave_state(solver, {0, 16, 1, 1.0});
  const std::vector<double> rho = gauss_charge(k, s);
  for (auto _ : state) benchmark::DoNotOptimize(diagnostics(solver, s, rho, {}));
}
BENCHMARK(BM_Diagnostics)->Unit(benchmark::kMillisecond);

void BM_WaveSpeed(benchmark::State& state) {
  const Complex k({60, 8, 8}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(measure_wave_speed(k, 20, 2));
}
BENCHMARK(BM_WaveSpeed)->Unit(benchmark::kMillisecond);

}  // namespace
