#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rnip/nn/layers.hpp"

namespace rnip::nn {

enum class InputKind { Bayer4, Rgb3, Developed3 };

std::string_view to_string(InputKind k);
InputKind parse_input_kind(std::string_view s);
inline int input_channels(InputKind k) { return k == InputKind::Bayer4 ? 4 : 3; }

struct ForwardOptions {
  bool training = false;
  // Seeds the additive quantization noise; the same seed reproduces it.
  std::uint64_t noise_seed = 0;
};

// Multiply-accumulates of one forward pass, split at the latent (or at the
// U-Net bottleneck).
struct MacCount {
  double encoder = 0.0;
  double decoder = 0.0;
  double total() const { return encoder + decoder; }
};

template <typename T>
struct ModelOutput {
  Tensor<T> output;
  // Per-item rate in bits per output pixel; zero for models without a latent.
  std::vector<double> rate_bpp;
  // Per-item latent likelihoods (empty for models without a latent).
  std::vector<std::vector<double>> likelihoods;
};

template <typename T>
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string kind() const = 0;
  // JSON echo of the configuration, stored in checkpoints.
  virtual std::string config_json() const = 0;
  virtual std::vector<Parameter<T>*> parameters() = 0;
  virtual std::unique_ptr<Model> clone() const = 0;

  virtual ModelOutput<T> forward(const Tensor<T>& input, const ForwardOptions& opts) = 0;
  // grad_rate[i] is dLoss/d(rate_bpp[i]). Accumulates into parameter grads.
  virtual void backward(const Tensor<T>& grad_output, const std::vector<double>& grad_rate) = 0;

  // Shape of the output for a given input shape; throws on invalid input.
  virtual Shape output_shape(const Shape& input) const = 0;
  // Analytic count for an input of in_h x in_w (real-valued sizes allowed).
  virtual MacCount macs(double in_h, double in_w) const = 0;

  void zero_grad() {
    for (auto* p : parameters()) p->grad.fill(T{});
  }
  std::size_t parameter_count() {
    std::size_t n = 0;
    for (auto* p : parameters()) n += p->value.size();
    return n;
  }
};

}  // namespace rnip::nn
