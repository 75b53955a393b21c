#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rnip/image.hpp"

namespace rnip {

// Five-scale MS-SSIM: 11x11 Gaussian window (sigma 1.5, valid filtering),
// 2x2 average pooling between scales, K1 = 0.01, K2 = 0.03, data range 1.
// Inputs are clamped to [0, 1]. Per-channel values are averaged.
namespace msssim {
inline constexpr int kWindow = 11;
inline constexpr double kSigma = 1.5;
inline constexpr double kK1 = 0.01;
inline constexpr double kK2 = 0.03;
inline constexpr int kScales = 5;
inline constexpr double kWeights[kScales] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
// Smallest side for which the window still fits at the coarsest scale.
inline constexpr int kMinSide = kWindow << (kScales - 1);
}  // namespace msssim

double ms_ssim(const PlanarF& a, const PlanarF& b);
double ms_ssim(const PlanarD& a, const PlanarD& b);

// Value of ms_ssim(reference, test) and, when grad is non-null, its gradient
// with respect to `test` (same shape).
double ms_ssim_with_grad(const PlanarD& reference, const PlanarD& test, PlanarD* grad);

double l1(const PlanarF& a, const PlanarF& b);
// 10 log10(peak^2 / MSE); +infinity when the images are identical.
double psnr(const PlanarF& a, const PlanarF& b, double peak = 1.0);

// (-sum log2 p) / image_pixels. Throws BadProbability for p outside (0, 1].
double analytic_bpp(std::span<const double> likelihoods, double image_pixels);

struct RdPoint {
  std::string label;
  double lambda = 0.0;
  double bpp = 0.0;
  double msssim = 0.0;
};

// Header "label,lambda,bpp,msssim", rows in the given order.
void write_rd_csv(std::ostream& out, const std::vector<RdPoint>& points);

}  // namespace rnip
