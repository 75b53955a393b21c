#pragma once

#include <cstdint>

#include "rnip/color.hpp"
#include "rnip/image.hpp"
#include "rnip/raw.hpp"
#include "rnip/rng.hpp"

namespace rnip {

struct SceneParams {
  int waves = 6;        // random plane waves summed into the luminance
  int blobs = 4;        // soft gaussian blobs
  int disks = 3;        // disks with a 1.5 pixel edge ramp
  double max_cycles = 6.0;  // highest wave frequency across the image
  double lo = 0.03, hi = 0.8;
};

// Linear Rec2020 test scene in [lo, hi].
PlanarD synthetic_scene(int channels, int height, int width, std::uint64_t seed, const SceneParams& p = {});

// Fixed camera response used by synthetic pairs: CamRGB = D * Rec2020.
ColorMatrix3 synthetic_rec2020_to_camrgb();

// Signal-dependent Gaussian noise: variance a * max(signal, 0) + b.
struct NoiseModel {
  double a = 0.0;
  double b = 0.0;
};

// Draws a and b uniformly from [1e-4, 1e-2].
NoiseModel sample_noise_model(SplitMix64& rng);
void add_noise(PlanarD& img, const NoiseModel& noise, SplitMix64& rng);

struct SyntheticPair {
  PlanarD clean_rec2020;  // 3 x H x W
  PlanarD clean_mosaic;   // 1 x H x W, RGGB, CamRGB
  PlanarD noisy_mosaic;
  NoiseModel noise;
};

SyntheticPair make_synthetic_pair(int height, int width, std::uint64_t seed);

// Bilinear demosaic of the noisy mosaic converted to Rec2020.
PlanarD noisy_baseline(const SyntheticPair& pair);

BayerMosaic to_mosaic(const PlanarD& mosaic);

}  // namespace rnip
