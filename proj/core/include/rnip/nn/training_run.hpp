#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rnip/nn/train.hpp"

namespace rnip::nn {

// Named fields of a training configuration file (JSON object). Sizes refer
// to the model input, so a Bayer input of 128 is a 256 x 256 image.
struct TrainConfig {
  std::string model = "jddc";
  InputKind input_kind = InputKind::Bayer4;
  double lambda = 0.005;
  double lr = 1e-3;
  int steps = 2000;
  std::uint64_t seed = 1;
  int batch = 4;
  int channels = 32;         // U-Net base width or JDDC encoder width
  int latent_channels = 32;  // JDDC only
  int train_pairs = 64;
  int val_pairs = 8;
  int input_size = 128;
  bool gamma_before_loss = false;

  void validate() const;
  std::string to_json() const;
  static TrainConfig from_json(const std::string& text);
  static TrainConfig load(const std::filesystem::path& path);
};

std::unique_ptr<Model<float>> build_model(const TrainConfig& cfg);

struct EvalSummary {
  double distortion = 0.0;  // mean 1 - MS-SSIM
  double rate_bpp = 0.0;    // mean analytic rate
  double total = 0.0;       // distortion + lambda * rate_bpp
  double msssim = 0.0;
  double coded_bpp = 0.0;   // mean range-coded rate (JDDC only)
};

// Evaluation-mode pass over a set (rounded latents).
EvalSummary evaluate_set(Model<float>& model, const std::vector<TrainItem<float>>& items, const RdLossOptions& loss,
                         bool range_code = false, int threads = 1);

struct TrainingResult {
  std::unique_ptr<Model<float>> model;
  EvalSummary initial;  // validation set before the first step
  EvalSummary final;
  std::vector<RdLossTerms> history;  // training batch loss per step
};

// Trains on synthetic pairs. Validation pairs use seeds disjoint from the
// training pairs. `progress` is called after every step.
TrainingResult run_training(const TrainConfig& cfg, int threads,
                            const std::function<void(long, const RdLossTerms&)>& progress = {});

}  // namespace rnip::nn
