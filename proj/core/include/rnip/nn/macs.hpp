#pragma once

#include "rnip/nn/jddc.hpp"
#include "rnip/nn/unet.hpp"

namespace rnip::nn {

// Side of a square image with the given megapixel count.
double megapixel_side(double megapixels);

// Sum of H*W*Cin*Cout*k^2 over all convolutions for an image of the given
// size. Bayer input is counted at its packed (half-side, 4-channel) size.
MacCount count_macs(const UNetConfig& cfg, double megapixels = 1.0);
MacCount count_macs(const JddcConfig& cfg, double megapixels = 1.0);

}  // namespace rnip::nn
