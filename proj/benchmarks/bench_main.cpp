#include <benchmark/benchmark.h>

#include <cmath>

#include "zrlab/closed_forms.hpp"
#include "zrlab/evolution.hpp"
#include "zrlab/experiments.hpp"

namespace {

using namespace zrlab;

FieldState gaussian(std::size_t n) {
  const auto grid = SpectralGrid::make(64.0, n);
  auto e = defaults_for(ExperimentKind::simulate).experiment;
  e.psi_amplitude = 0.5;
  return initial_state(e, grid);
}

void BM_ForwardTransform(benchmark::State& st) {
  const auto s = gaussian(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(forward_transform(s.B));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ForwardTransform)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_StrangStep(benchmark::State& st) {
  FieldState s = gaussian(static_cast<std::size_t>(st.range(0)));
  const auto c = normalized_coefficients();
  for (auto _ : st) s = strang_step(s, c, 1e-3);
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_SobolevNorm(benchmark::State& st) {
  const auto s = gaussian(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sobolev_norm(s.B, 1.5));
}
BENCHMARK(BM_SobolevNorm)->Arg(4096);

void BM_FirstOrderPsi1(benchmark::State& st) {
  const HatData f = build_fN(static_cast<int>(st.range(0)), 0.25, HatVariant::inflation_f);
  for (auto _ : st) benchmark::DoNotOptimize(first_order_psi1(0.1, f, 0.25));
}
BENCHMARK(BM_FirstOrderPsi1)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
