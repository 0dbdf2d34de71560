#include "antibunch/filter.hpp"
#include "antibunch/jitter.hpp"
#include "antibunch/numerics.hpp"

#include <benchmark/benchmark.h>

using namespace antibunch;
using emitter::EmitterParams;
using jitter::KernelKind;

namespace {

const auto kTau = numerics::linspace(0.0, 10.0, 101);

void BM_JitterClosedForm(benchmark::State& state) {
  const auto kind = static_cast<KernelKind>(state.range(0));
  const jitter::JitterKernel k{kind, 1.0, jitter::Convention::main_text};
  const auto p = EmitterParams::coherent(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(jitter::jittered_g2_analytic(jitter::Drive::coherent, k, p, kTau));
  state.SetLabel(jitter::to_string(kind));
}
BENCHMARK(BM_JitterClosedForm)->DenseRange(0, 3);

void BM_JitterQuadrature(benchmark::State& state) {
  const auto kind = static_cast<KernelKind>(state.range(0));
  const jitter::JitterKernel k{kind, 1.0, jitter::Convention::main_text};
  const auto bare = jitter::bare_signal(EmitterParams::coherent(2.0));
  for (auto _ : state) benchmark::DoNotOptimize(jitter::jittered_g2_numeric(bare, k, kTau));
  state.SetLabel(jitter::to_string(kind));
}
BENCHMARK(BM_JitterQuadrature)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_FilterCoefficients(benchmark::State& state) {
  const auto p = EmitterParams::coherent(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(filter::filtered_coefficients(p, 0.7));
}
BENCHMARK(BM_FilterCoefficients);

void BM_FilteredCoherentCurve(benchmark::State& state) {
  const auto p = EmitterParams::coherent(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(filter::filtered_g2_coherent_general(p, 0.7, kTau));
}
BENCHMARK(BM_FilteredCoherentCurve);

}  // namespace
