#include <benchmark/benchmark.h>

#include "rnip/pairing.hpp"
#include "rnip/synthetic.hpp"

namespace {

using namespace rnip;

PlanarF crop(const PlanarD& src, int y0, int x0, int side) {
  PlanarF out(src.channels(), side, side);
  for (int c = 0; c < src.channels(); ++c)
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) out(c, y, x) = static_cast<float>(src(c, y0 + y, x0 + x));
  return out;
}

void BM_AlignPair(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const PlanarD scene = synthetic_scene(3, side + 32, side + 32, 5);
  const PlanarF clean = crop(scene, 16, 16, side);
  const PlanarF noisy = crop(scene, 10, 20, side);
  for (auto _ : state) benchmark::DoNotOptimize(align_pair(noisy, clean));
}
BENCHMARK(BM_AlignPair)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_LossMask(benchmark::State& state) {
  const PlanarF clean = planar_cast<float>(synthetic_scene(3, 1024, 1024, 6));
  const PlanarF noisy = planar_cast<float>(synthetic_scene(3, 1024, 1024, 7));
  for (auto _ : state) benchmark::DoNotOptimize(build_loss_mask(noisy, clean));
}
BENCHMARK(BM_LossMask)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
