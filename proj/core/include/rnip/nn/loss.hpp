#pragma once

#include <optional>

#include "rnip/color.hpp"
#include "rnip/image.hpp"
#include "rnip/pairing.hpp"

namespace rnip::nn {

inline constexpr double kLossGamma = 2.2;

struct RdLossTerms {
  double distortion = 0.0;  // 1 - MS-SSIM
  double rate_bpp = 0.0;
  double total = 0.0;       // distortion + lambda * rate_bpp
};

struct RdLossOptions {
  double lambda = 0.0;
  // When set, x_hat is CamRGB and is converted with this matrix first.
  std::optional<ColorMatrix3> camrgb_to_rec2020;
  bool gamma_before_loss = false;
};

// Rate-distortion loss of one image. Pixels the mask excludes are replaced
// by the target before MS-SSIM, so they contribute neither distortion nor
// gradient. When grad is non-null it receives dTotal/dx_hat.
RdLossTerms rd_loss(const PlanarD& x_hat, const PlanarD& x, const LossMask* mask, double rate_bpp,
                    const RdLossOptions& opts, PlanarD* grad = nullptr);

}  // namespace rnip::nn
