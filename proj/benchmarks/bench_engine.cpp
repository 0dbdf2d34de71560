#include "antibunch/filter.hpp"
#include "antibunch/liouvillian.hpp"
#include "antibunch/numerics.hpp"

#include <benchmark/benchmark.h>

using namespace antibunch;
using emitter::EmitterParams;

namespace {

void BM_SteadyState(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const auto L = liouvillian::build_liouvillian({EmitterParams::coherent(2.0), liouvillian::SensorSpec{0.0, 1.0, 0.0, n_max}});
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian::steady_state_scaled(L));
  state.SetLabel("dim " + std::to_string(L.matrix.rows()));
}
BENCHMARK(BM_SteadyState)->Arg(2)->Arg(3)->Arg(4);

void BM_BareG2Tau(benchmark::State& state) {
  const auto L = liouvillian::build_liouvillian({EmitterParams::coherent(2.0), std::nullopt});
  const auto tau = numerics::linspace(0.0, 10.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian::g2_tau(L, "sigma", tau));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BareG2Tau)->Arg(101)->Arg(1001);

void BM_FilteredOracle(benchmark::State& state) {
  const auto tau = numerics::linspace(0.0, 10.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian::filtered_g2_oracle(EmitterParams::coherent(2.0), 1.0, tau));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilteredOracle)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);

void BM_MaxBunchingScan(benchmark::State& state) {
  const auto omegas = numerics::logspace(1e-2, 1e2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(filter::max_bunching_scan(omegas));
}
BENCHMARK(BM_MaxBunchingScan)->Arg(21)->Arg(81)->Unit(benchmark::kMillisecond);

}  // namespace
