#pragma once

#include "rnip/raw.hpp"

namespace rnip {

// Missing samples are the mean of the nearest same-color neighbors. At the
// border the mosaic is mirrored about the edge pixel, which keeps the CFA
// phase and so replicates the nearest same-color sample.
LinearRgbImage demosaic_bilinear(const BayerMosaic& m);

// Green first, interpolated along whichever axis has the smaller absolute
// green difference; red and blue are then filled in bilinearly on the
// color-difference planes R-G and B-G.
LinearRgbImage demosaic_edge_aware(const BayerMosaic& m);

// Renders a CamRGB image back to an RGGB mosaic (sampling only).
BayerMosaic mosaic_rggb(const PlanarF& rgb);

}  // namespace rnip
