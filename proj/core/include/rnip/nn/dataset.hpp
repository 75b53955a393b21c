#pragma once

#include <cstdint>
#include <vector>

#include "rnip/nn/train.hpp"
#include "rnip/synthetic.hpp"

namespace rnip::nn {

// Model input for a synthetic pair: the packed noisy mosaic for Bayer4, its
// bilinear demosaic (CamRGB) for Rgb3 and the gamma-encoded Rec2020 demosaic
// for Developed3. The target is the clean Rec2020 image, gamma-encoded for
// Developed3.
template <typename T>
TrainItem<T> make_train_item(const SyntheticPair& pair, InputKind kind);

// Loss options matching make_train_item: CamRGB outputs are converted to
// Rec2020 with the synthetic camera's matrix.
RdLossOptions synthetic_loss_options(InputKind kind, double lambda, bool gamma_before_loss = false);

// `count` pairs of size height x width from consecutive derived seeds.
template <typename T>
std::vector<TrainItem<T>> make_synthetic_set(int count, int height, int width, InputKind kind, std::uint64_t seed,
                                             int threads = 1);

}  // namespace rnip::nn
