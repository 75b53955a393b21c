#include <benchmark/benchmark.h>

#include "rnip/metrics.hpp"
#include "rnip/synthetic.hpp"

namespace {

using namespace rnip;

void BM_MsSsim(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const PlanarF a = planar_cast<float>(synthetic_scene(3, side, side, 1));
  const PlanarF b = planar_cast<float>(synthetic_scene(3, side, side, 2));
  for (auto _ : state) benchmark::DoNotOptimize(ms_ssim(a, b));
}
BENCHMARK(BM_MsSsim)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_MsSsimWithGrad(benchmark::State& state) {
  const PlanarD a = synthetic_scene(3, 256, 256, 1);
  const PlanarD b = synthetic_scene(3, 256, 256, 2);
  PlanarD grad;
  for (auto _ : state) benchmark::DoNotOptimize(ms_ssim_with_grad(a, b, &grad));
}
BENCHMARK(BM_MsSsimWithGrad)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
