#pragma once

#include <array>

#include "rnip/nn/model.hpp"

namespace rnip::nn {

enum class OutputUpscale { None, PixelShuffle2x };

struct UNetConfig {
  int base_channels = 32;  // half the classic 64
  int depth = 4;
  double negative_slope = 0.2;
  InputKind input_kind = InputKind::Rgb3;
  OutputUpscale output_upscale = OutputUpscale::None;
  bool gamma_before_loss = false;

  static UNetConfig for_input(InputKind kind, int base_channels = 32);
  // Throws ShapeMismatch when Bayer input lacks the pixel-shuffle head.
  void validate() const;
  std::string to_json() const;
  static UNetConfig from_json(const std::string& text);
};

// Encoder: per level two 3x3 conv + leaky ReLU, then 2x2 max pool.
// Decoder: nearest 2x upsample, 3x3 conv, concatenation with the skip,
// two 3x3 convs. A 1x1 head maps to 3 channels, or to 12 followed by a
// pixel shuffle for Bayer input.
template <typename T>
class UNet final : public Model<T> {
 public:
  explicit UNet(const UNetConfig& cfg, std::uint64_t seed = 0);

  const UNetConfig& config() const { return cfg_; }
  std::string kind() const override { return "unet"; }
  std::string config_json() const override { return cfg_.to_json(); }
  std::vector<Parameter<T>*> parameters() override;
  std::unique_ptr<Model<T>> clone() const override { return std::make_unique<UNet>(*this); }

  ModelOutput<T> forward(const Tensor<T>& input, const ForwardOptions& opts) override;
  void backward(const Tensor<T>& grad_output, const std::vector<double>& grad_rate) override;
  Shape output_shape(const Shape& input) const override;
  MacCount macs(double in_h, double in_w) const override;

  Conv2d<T>& head() { return head_; }
  // All convolutions in execution order.
  std::vector<Conv2d<T>*> convolutions();

 private:
  struct Level {
    Conv2d<T> conv_a, conv_b;
    LeakyRelu<T> act_a, act_b;
    MaxPool2<T> pool;
  };
  struct UpLevel {
    Conv2d<T> up_conv, conv_a, conv_b;
    LeakyRelu<T> act_up, act_a, act_b;
    int skip_channels = 0;
  };

  UNetConfig cfg_;
  std::vector<Level> down_;  // depth + 1 levels; the last one is the bottleneck
  std::vector<UpLevel> up_;  // index l maps level l+1 back to level l
  Conv2d<T> head_;
};

}  // namespace rnip::nn
