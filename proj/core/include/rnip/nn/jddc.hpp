#pragma once

#include <cstdint>
#include <vector>

#include "rnip/nn/entropy.hpp"
#include "rnip/nn/model.hpp"

namespace rnip::nn {

struct JddcConfig {
  int enc_channels = 64;
  int latent_channels = 96;
  InputKind input_kind = InputKind::Rgb3;
  bool bayer_head = false;
  double lambda = 0.005;
  double negative_slope = 0.2;
  bool gamma_before_loss = false;

  static JddcConfig for_input(InputKind kind, int enc_channels = 64, int latent_channels = 96);
  void validate() const;
  std::string to_json() const;
  static JddcConfig from_json(const std::string& text);
};

// Latent symbols of one image, channel-major, plus what the decoder needs
// to rebuild the tensor.
struct EncodedImage {
  int latent_channels = 0, latent_h = 0, latent_w = 0;
  std::vector<std::uint8_t> bitstream;
};

// Convolutional autoencoder with a factorized entropy model.
//
// Encoder: four 5x5 stride-2 convolutions with leaky ReLU between them.
// Decoder: 3x3 convolution + 2x pixel shuffle stages, one per encoder stage.
// With Bayer input the decoder's last stage produces packed-resolution
// features and a head (3x3 convolution to 12 channels + pixel shuffle)
// produces the full-resolution CamRGB image.
template <typename T>
class Jddc final : public Model<T> {
 public:
  static constexpr int kStages = 4;

  explicit Jddc(const JddcConfig& cfg, std::uint64_t seed = 0);

  const JddcConfig& config() const { return cfg_; }
  std::string kind() const override { return "jddc"; }
  std::string config_json() const override { return cfg_.to_json(); }
  std::vector<Parameter<T>*> parameters() override;
  std::unique_ptr<Model<T>> clone() const override { return std::make_unique<Jddc>(*this); }

  ModelOutput<T> forward(const Tensor<T>& input, const ForwardOptions& opts) override;
  void backward(const Tensor<T>& grad_output, const std::vector<double>& grad_rate) override;
  Shape output_shape(const Shape& input) const override;
  MacCount macs(double in_h, double in_w) const override;
  Shape latent_shape(const Shape& input) const;

  Tensor<T> encode_latent(const Tensor<T>& input);
  Tensor<T> decode_latent(const Tensor<T>& latent);

  // Rounds and range-codes the latent of item n; decode() inverts it.
  EncodedImage compress(const Tensor<T>& input, int n = 0);
  Tensor<T> decompress(const EncodedImage& enc);

  FactorizedEntropyModel<T>& entropy() { return entropy_; }
  std::vector<Conv2d<T>*> encoder_convolutions();
  std::vector<Conv2d<T>*> decoder_convolutions();

 private:
  JddcConfig cfg_;
  std::vector<Conv2d<T>> enc_;
  std::vector<LeakyRelu<T>> enc_act_;
  std::vector<Conv2d<T>> dec_;
  std::vector<LeakyRelu<T>> dec_act_;  // one per feature stage
  FactorizedEntropyModel<T> entropy_;
  int output_pixels_ = 0;
};

}  // namespace rnip::nn
