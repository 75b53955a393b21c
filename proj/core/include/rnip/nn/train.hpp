#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rnip/nn/loss.hpp"
#include "rnip/nn/model.hpp"

namespace rnip::nn {

struct AdamParams {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
class Adam {
 public:
  explicit Adam(AdamParams p = {}) : p_(p) {}
  // Applies one update using the accumulated gradients.
  void step(const std::vector<Parameter<T>*>& params);
  const AdamParams& params() const { return p_; }
  void set_lr(double lr) { p_.lr = lr; }
  long steps() const { return t_; }

 private:
  AdamParams p_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// One training example: model input (batch of one), clean Rec2020 target
// at output resolution and an optional loss mask.
template <typename T>
struct TrainItem {
  Tensor<T> input;
  PlanarD target;
  std::optional<LossMask> mask;
};

struct TrainOptions {
  AdamParams adam;
  RdLossOptions loss;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Owns the optimizer state and per-worker model replicas. Items of a batch
// are processed in parallel, each with its own noise stream, and their
// gradients are summed in item order, so results do not depend on threads.
template <typename T>
class Trainer {
 public:
  Trainer(Model<T>& model, TrainOptions opts);

  // Returns the batch-mean loss terms before the update.
  RdLossTerms step(std::span<const TrainItem<T>* const> batch);
  long steps_done() const { return step_; }
  Adam<T>& optimizer() { return adam_; }

 private:
  Model<T>& model_;
  TrainOptions opts_;
  Adam<T> adam_;
  long step_ = 0;
  std::vector<std::unique_ptr<Model<T>>> replicas_;
};

// Loss of one item with the model in evaluation or training mode. When
// backprop is set, gradients are accumulated into the model's parameters.
template <typename T>
RdLossTerms evaluate_item(Model<T>& model, const TrainItem<T>& item, const RdLossOptions& loss,
                          const ForwardOptions& fwd, bool backprop, double grad_scale = 1.0);

// Copies parameter values between models of identical architecture.
template <typename T>
void copy_parameters(Model<T>& from, Model<T>& to);

}  // namespace rnip::nn
