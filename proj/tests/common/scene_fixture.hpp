#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "rnip/raw_io.hpp"
#include "rnip/rng.hpp"
#include "rnip/synthetic.hpp"

namespace rnip::testing {

struct CaptureSpec {
  std::string name;
  int shift_y = 0;  // noisy(y + shift_y, x + shift_x) shows clean(y, x)
  int shift_x = 0;
  bool unrelated = false;  // different content, fails alignment
  double noise_sigma = 0.01;
};

inline constexpr int kFixtureBlack = 512;
inline constexpr int kFixtureWhite = 16383;

// Writes <dir>/clean.pgm plus one capture per spec, each with a .meta
// sidecar, all cut from one larger RGGB scene.
inline void write_scene(const std::filesystem::path& dir, int size, std::uint64_t seed,
                        const std::vector<CaptureSpec>& captures) {
  std::filesystem::create_directories(dir);
  constexpr int pad = 16;
  const int big = size + 2 * pad;
  const PlanarD scene = synthetic_scene(3, big, big, seed);
  const PlanarD other = synthetic_scene(3, big, big, seed ^ 0x5eedULL);

  Sidecar side;
  side.meta.black_level = {kFixtureBlack, kFixtureBlack, kFixtureBlack, kFixtureBlack};
  side.meta.white_level = kFixtureWhite;
  side.meta.camera_id = "fixture-cam";

  auto emit = [&](const std::string& name, const PlanarD& src, int y0, int x0, double sigma, std::uint64_t s) {
    SplitMix64 g(s);
    RawCounts raw;
    raw.height = raw.width = size;
    raw.data.resize(static_cast<std::size_t>(size) * size);
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        // RGGB phase of the output grid; y0 and x0 are even so the scene phase matches.
        const int c = (y % 2 == 0 && x % 2 == 0) ? 0 : (y % 2 == 1 && x % 2 == 1) ? 2 : 1;
        double v = src(c, y0 + y, x0 + x) + (sigma > 0 ? sigma * g.normal() : 0.0);
        v = std::clamp(v, 0.0, 1.0);
        raw.data[static_cast<std::size_t>(y) * size + x] =
            static_cast<std::uint16_t>(std::lround(kFixtureBlack + v * (kFixtureWhite - kFixtureBlack)));
      }
    write_pgm16(dir / (name + ".pgm"), raw);
    write_sidecar(dir / (name + ".meta"), side);
  };

  emit("clean", scene, pad, pad, 0.0, seed);
  std::uint64_t k = 1;
  for (const CaptureSpec& c : captures)
    emit(c.name, c.unrelated ? other : scene, pad - c.shift_y, pad - c.shift_x, c.noise_sigma, derive_seed(seed, k++));
}

}  // namespace rnip::testing
