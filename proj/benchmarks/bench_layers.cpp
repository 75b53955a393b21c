#include <benchmark/benchmark.h>

#include "rnip/nn/jddc.hpp"
#include "rnip/nn/layers.hpp"
#include "rnip/rng.hpp"

namespace {

using namespace rnip;
using namespace rnip::nn;

Tensor<float> random_tensor(const Shape& s, std::uint64_t seed) {
  Tensor<float> t(s);
  SplitMix64 g(seed);
  for (float& v : t.data()) v = static_cast<float>(g.uniform(-1, 1));
  return t;
}

void BM_Conv3x3Forward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0)), side = static_cast<int>(state.range(1));
  Conv2d<float> conv("c", c, c, 3, 1, 1);
  const auto x = random_tensor({1, c, side, side}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(conv.forward(x));
  state.counters["GMAC/s"] =
      benchmark::Counter(static_cast<double>(conv.forward_macs()) * 1e-9, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Conv3x3Forward)->Args({32, 128})->Args({64, 64})->Unit(benchmark::kMillisecond);

void BM_Conv3x3Backward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0)), side = static_cast<int>(state.range(1));
  Conv2d<float> conv("c", c, c, 3, 1, 1);
  const auto x = random_tensor({1, c, side, side}, 2);
  const auto y = conv.forward(x);
  const Tensor<float> gy(y.shape(), 1.0f);
  for (auto _ : state) benchmark::DoNotOptimize(conv.backward(gy, true));
}
BENCHMARK(BM_Conv3x3Backward)->Args({32, 128})->Unit(benchmark::kMillisecond);

void BM_JddcCompress(benchmark::State& state) {
  Jddc<float> model(JddcConfig::for_input(InputKind::Bayer4, 32, 32), 3);
  const auto x = random_tensor({1, 4, 128, 128}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(model.compress(x));
}
BENCHMARK(BM_JddcCompress)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
