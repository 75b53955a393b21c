#pragma once

#include <vector>

#include "rnip/nn/layers.hpp"
#include "rnip/nn/range_coder.hpp"

namespace rnip::nn {

// Per-channel factorized model over the integer symbols [-128, 127].
//
// Each channel holds 256 logits; their softmax is the mass of each unit bin
// centred on a symbol, and the CDF is piecewise linear between bin edges, so
// it is non-decreasing with CDF(-inf) = 0 and CDF(+inf) = 1 by construction.
// The likelihood of a (possibly noisy) latent v is CDF(v + 1/2) - CDF(v - 1/2),
// which equals the bin mass exactly at integers.
template <typename T>
class FactorizedEntropyModel {
 public:
  static constexpr int kMinSymbol = -128;
  static constexpr int kMaxSymbol = 127;
  static constexpr int kBins = kMaxSymbol - kMinSymbol + 1;
  static constexpr double kLikelihoodBound = 1e-9;

  FactorizedEntropyModel() = default;
  explicit FactorizedEntropyModel(int channels);

  int channels() const { return channels_; }
  Parameter<T>& logits() { return logits_; }
  const Parameter<T>& logits() const { return logits_; }

  // Bin masses for one channel.
  std::vector<double> pmf(int channel) const;

  // Likelihood of every element of y (N, C, H, W); caches what backward needs.
  std::vector<double> forward(const Tensor<T>& y);
  // Total bits of the cached forward pass.
  double bits() const { return bits_; }
  // Bits of each batch item of the cached forward pass.
  std::vector<double> item_bits() const;
  // Given dLoss/dBits, accumulates logit gradients and returns dLoss/dy.
  Tensor<T> backward(double grad_bits);
  Tensor<T> backward(const std::vector<double>& grad_bits_per_item);

  std::vector<QuantizedCdf> quantized_cdfs() const;

 private:
  int channels_ = 0;
  Parameter<T> logits_;
  Tensor<T> input_;
  std::vector<double> likelihood_;
  double bits_ = 0.0;
};

}  // namespace rnip::nn
