#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnip/nn/tensor.hpp"

namespace rnip::nn {

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
  // Scales the optimizer step for this tensor.
  double lr_scale = 1.0;

  Parameter() = default;
  Parameter(std::string n, Shape s) : name(std::move(n)), value(s), grad(s) {}
};

// He-uniform initialization for a leaky-ReLU network.
template <typename T>
void init_he_uniform(Parameter<T>& p, int fan_in, double negative_slope, std::uint64_t seed);

// Cross-correlation with square kernels, zero padding and an optional
// stride. Each layer caches its last input for backward().
template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::string name, int in_channels, int out_channels, int kernel, int stride, int padding);

  Tensor<T> forward(const Tensor<T>& x);
  // Accumulates parameter gradients; returns dL/dx unless need_input_grad is false.
  Tensor<T> backward(const Tensor<T>& grad_out, bool need_input_grad = true);

  Shape output_shape(const Shape& in) const;
  // Multiply-accumulates of one forward pass for an input of this size.
  double macs(double in_h, double in_w) const;

  Parameter<T>& weight() { return weight_; }
  Parameter<T>& bias() { return bias_; }
  int in_channels() const { return cin_; }
  int out_channels() const { return cout_; }
  int kernel() const { return k_; }
  int stride() const { return stride_; }
  std::uint64_t forward_macs() const { return forward_macs_; }

 private:
  int cin_ = 0, cout_ = 0, k_ = 1, stride_ = 1, pad_ = 0;
  Parameter<T> weight_, bias_;
  Tensor<T> input_;
  std::vector<T> cols_;
  std::uint64_t forward_macs_ = 0;
};

template <typename T>
class LeakyRelu {
 public:
  explicit LeakyRelu(double slope = 0.2) : slope_(static_cast<T>(slope)) {}
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& grad_out) const;

 private:
  T slope_;
  Tensor<T> input_;
};

template <typename T>
class MaxPool2 {
 public:
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& grad_out) const;

 private:
  Shape in_shape_;
  std::vector<std::uint32_t> argmax_;
};

template <typename T>
Tensor<T> upsample_nearest2(const Tensor<T>& x);
template <typename T>
Tensor<T> upsample_nearest2_backward(const Tensor<T>& g);

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, int r);
template <typename T>
Tensor<T> pixel_unshuffle(const Tensor<T>& x, int r);

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
void split_channels(const Tensor<T>& g, int channels_a, Tensor<T>& ga, Tensor<T>& gb);

}  // namespace rnip::nn
