#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "rnip/raw.hpp"

namespace rnip {

// Randomized stand-in for an image development stack. Stages run in the
// order listed in DevStage; each one can be switched off independently.
enum class DevStage { LogTonemap = 0, Laplacian, Gamma, Sigmoid, Unsharp };

struct DevParams {
  double log_tonemap_strength = 0.0;  // [0, 8]
  double laplacian_gain = 0.0;        // [0, 0.5]
  double gamma = 2.2;                 // [1.8, 2.6]
  double sigmoid_gain = 0.0;          // [0, 10]
  double sigmoid_midpoint = 0.5;      // [0.3, 0.7]
  double unsharp_sigma = 1.0;         // [0.5, 2.0]
  double unsharp_amount = 0.0;        // [0, 1.5]
  std::array<bool, 5> op_enabled{false, false, false, false, false};
  std::uint64_t seed = 0;

  bool enabled(DevStage s) const { return op_enabled[static_cast<int>(s)]; }
  bool operator==(const DevParams&) const = default;
};

namespace devranges {
inline constexpr double kTonemapMax = 8.0;
inline constexpr double kLaplacianMax = 0.5;
inline constexpr double kGammaMin = 1.8, kGammaMax = 2.6;
inline constexpr double kSigmoidGainMax = 10.0;
inline constexpr double kMidpointMin = 0.3, kMidpointMax = 0.7;
inline constexpr double kSigmaMin = 0.5, kSigmaMax = 2.0;
inline constexpr double kAmountMax = 1.5;
inline constexpr double kEnableProbability = 0.8;
}  // namespace devranges

// Uniform draws from SplitMix64(seed), in field order, then five enable flags.
DevParams sample_dev_params(std::uint64_t seed);

DevelopedImage develop_proxy(const LinearRgbImage& img, const DevParams& p);

// Same structured-text format as manifest rows.
std::string format_dev_params(const DevParams& p);
DevParams parse_dev_params(const std::string& text);

namespace dev {
// Individual stages on 3-channel planar images. None of them clamps.
PlanarF log_tonemap(const PlanarF& in, double strength);
PlanarF laplacian_enhance(const PlanarF& in, double gain);
PlanarF gamma_correct(const PlanarF& in, double gamma);
PlanarF sigmoid_contrast(const PlanarF& in, double gain, double midpoint);
PlanarF unsharp_mask(const PlanarF& in, double sigma, double amount);
PlanarF gaussian_blur(const PlanarF& in, double sigma);
}  // namespace dev

}  // namespace rnip
