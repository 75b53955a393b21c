#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rnip/nn/range_coder.hpp"
#include "rnip/rng.hpp"

namespace {

using namespace rnip;
using namespace rnip::nn;

struct Fixture {
  QuantizedCdf cdf;
  std::vector<int> symbols;
};

Fixture laplacian_symbols(std::size_t n) {
  std::vector<double> pmf(256);
  double z = 0.0;
  for (int s = 0; s < 256; ++s) z += pmf[s] = std::exp(-std::abs(s - 128) / 4.0);
  for (double& p : pmf) p /= z;
  Fixture f{quantize_pmf(pmf), std::vector<int>(n)};
  SplitMix64 g(1);
  for (int& s : f.symbols) {
    // Two-sided geometric draw, clamped to the alphabet.
    const int mag = static_cast<int>(-4.0 * std::log(1.0 - g.uniform()));
    s = std::clamp(128 + (g.next() & 1 ? mag : -mag), 0, 255);
  }
  return f;
}

void BM_RangeEncode(benchmark::State& state) {
  const Fixture f = laplacian_symbols(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(range_encode(f.symbols, f.cdf));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RangeEncode)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_RangeDecode(benchmark::State& state) {
  const Fixture f = laplacian_symbols(static_cast<std::size_t>(state.range(0)));
  const auto stream = range_encode(f.symbols, f.cdf);
  for (auto _ : state) benchmark::DoNotOptimize(range_decode(stream, f.cdf, f.symbols.size()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RangeDecode)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
