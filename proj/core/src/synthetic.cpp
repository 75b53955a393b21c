#include "rnip/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rnip/demosaic.hpp"

namespace rnip {

PlanarD synthetic_scene(int channels, int height, int width, std::uint64_t seed, const SceneParams& p) {
  SplitMix64 rng(seed);
  const double two_pi = 2.0 * std::numbers::pi;
  PlanarD lum(1, height, width);
  for (int k = 0; k < p.waves; ++k) {
    const double fy = rng.uniform(-p.max_cycles, p.max_cycles) / height;
    const double fx = rng.uniform(-p.max_cycles, p.max_cycles) / width;
    const double phase = rng.uniform(0.0, two_pi);
    const double amp = rng.uniform(0.2, 1.0) / (1.0 + k);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) lum(0, y, x) += amp * std::cos(two_pi * (fy * y + fx * x) + phase);
  }
  for (int k = 0; k < p.blobs; ++k) {
    const double cy = rng.uniform(0, height), cx = rng.uniform(0, width);
    const double s = rng.uniform(0.05, 0.2) * std::min(height, width);
    const double amp = rng.uniform(-1.0, 1.0);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
        lum(0, y, x) += amp * std::exp(-d2 / (2 * s * s));
      }
  }
  for (int k = 0; k < p.disks; ++k) {
    const double cy = rng.uniform(0, height), cx = rng.uniform(0, width);
    const double r = rng.uniform(0.05, 0.25) * std::min(height, width);
    const double amp = rng.uniform(-1.0, 1.0);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double d = std::hypot(y - cy, x - cx) - r;
        lum(0, y, x) += amp * std::clamp(0.5 - d / 1.5, 0.0, 1.0);
      }
  }
  const auto [mn, mx] = std::minmax_element(lum.data().begin(), lum.data().end());
  const double range = std::max(*mx - *mn, 1e-12);
  const double lo = *mn;

  PlanarD out(channels, height, width);
  for (int c = 0; c < channels; ++c) {
    // Slowly varying chroma so channels are correlated but not identical.
    const double fy = rng.uniform(-1.5, 1.5) / height, fx = rng.uniform(-1.5, 1.5) / width;
    const double phase = rng.uniform(0.0, two_pi);
    const double tint = rng.uniform(0.8, 1.0);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double l = (lum(0, y, x) - lo) / range;
        const double chroma = tint * (1.0 + 0.15 * std::cos(two_pi * (fy * y + fx * x) + phase));
        out(c, y, x) = std::clamp(p.lo + (p.hi - p.lo) * l * chroma, p.lo, p.hi);
      }
  }
  return out;
}

ColorMatrix3 synthetic_rec2020_to_camrgb() {
  return ColorMatrix3{{0.90, 0.08, 0.02, 0.05, 0.90, 0.05, 0.02, 0.10, 0.88}};
}

NoiseModel sample_noise_model(SplitMix64& rng) {
  NoiseModel n;
  n.a = rng.uniform(1e-4, 1e-2);
  n.b = rng.uniform(1e-4, 1e-2);
  return n;
}

void add_noise(PlanarD& img, const NoiseModel& noise, SplitMix64& rng) {
  for (double& v : img.data()) v += std::sqrt(noise.a * std::max(v, 0.0) + noise.b) * rng.normal();
}

BayerMosaic to_mosaic(const PlanarD& mosaic) {
  BayerMosaic m;
  m.data = planar_cast<float>(mosaic);
  m.cfa = CfaPattern::RGGB;
  return m;
}

SyntheticPair make_synthetic_pair(int height, int width, std::uint64_t seed) {
  SyntheticPair pair;
  pair.clean_rec2020 = synthetic_scene(3, height, width, derive_seed(seed, 1));
  const PlanarD cam = apply_color_matrix(pair.clean_rec2020, synthetic_rec2020_to_camrgb());
  pair.clean_mosaic = PlanarD(1, height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const int c = static_cast<int>(cfa_color_at(CfaPattern::RGGB, y, x));
      pair.clean_mosaic(0, y, x) = cam(c, y, x);
    }
  SplitMix64 rng(derive_seed(seed, 2));
  pair.noise = sample_noise_model(rng);
  pair.noisy_mosaic = pair.clean_mosaic;
  add_noise(pair.noisy_mosaic, pair.noise, rng);
  return pair;
}

PlanarD noisy_baseline(const SyntheticPair& pair) {
  const LinearRgbImage rgb = demosaic_bilinear(to_mosaic(pair.noisy_mosaic));
  return apply_color_matrix(planar_cast<double>(rgb.pixels), synthetic_rec2020_to_camrgb().inverse());
}

}  // namespace rnip
