#include <benchmark/benchmark.h>

#include "vpflab/quantizer.hpp"
#include "vpflab/statmodel.hpp"
#include "vpflab/sweeps.hpp"
#include "vpflab/synth.hpp"

namespace {

using namespace vpflab;

void BM_Requantize(benchmark::State& state) {
  const DeadzoneQuantizer quant(32, 1.25, QuantMode::Inter);
  RandomStream rng(1);
  const auto x = laplacian_sample({0, 2500}, 4096, rng);
  for (auto _ : state) {
    double acc = 0;
    for (double v : x) acc += quant.requantize(v);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_Requantize);

void BM_DistortionIntra(benchmark::State& state) {
  const double delta = 2.0 * static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(distortion_intra(delta, 1.25, {0, 2500}));
  }
}
BENCHMARK(BM_DistortionIntra)->Arg(2)->Arg(16)->Arg(31);

void BM_LaplacianSample(benchmark::State& state) {
  RandomStream rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(laplacian_sample({0, 2500}, 1 << 14, rng));
  }
  state.SetItemsProcessed(state.iterations() * (1 << 14));
}
BENCHMARK(BM_LaplacianSample);

void BM_PipelineCell(benchmark::State& state) {
  const ARParams ar;
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const SignalBundle sig = gen_ar_signals(ar, count, 3);
    ErrorBundle b =
        first_pass(sig, ar, {16, 2.0, 2.0, p_pmb_first(16)}, {}, 4);
    attach_second_pass(
        b, second_pass(sig, b, ar, {24, 2.0, 2.0, p_pmb_second(16, 24)}, {},
                       5));
    benchmark::DoNotOptimize(vpf_difference(b));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PipelineCell)
    ->Arg(1 << 14)
    ->Arg(1 << 17)
    ->Unit(benchmark::kMillisecond);

void BM_SignMapFullGrid(benchmark::State& state) {
  const SweepConfig grid = SweepConfig::full_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sign_map(CentroidKind::Inter, 2.0, 2.0,
                                      grid.q1_range, grid.q2_range));
  }
}
BENCHMARK(BM_SignMapFullGrid);

}  // namespace

BENCHMARK_MAIN();
