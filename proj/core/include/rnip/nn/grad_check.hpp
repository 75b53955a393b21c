#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rnip/nn/train.hpp"

namespace rnip::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst_parameter;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares analytic gradients to central differences on `samples` randomly
// chosen scalar parameters. `loss` evaluates the objective; `gradient`
// fills every parameter's grad (the check zeroes them first).
// Relative error is |a - n| / max(|a|, |n|, floor).
GradCheckResult grad_check(const std::vector<Parameter<double>*>& params, const std::function<double()>& loss,
                           const std::function<void()>& gradient, double epsilon, std::size_t samples,
                           std::uint64_t seed, double floor = 1e-8);

// Denominator floor of the model-level check. Central differences of an O(1)
// loss at epsilon 1e-6 carry about 1e-10 of rounding error, so gradients
// below this are effectively compared in absolute terms.
inline constexpr double kModelGradFloor = 1e-6;

// Full rate-distortion objective of one item with the training noise
// frozen by fwd.noise_seed.
GradCheckResult grad_check(Model<double>& model, const TrainItem<double>& item, const RdLossOptions& loss,
                           const ForwardOptions& fwd, double epsilon, std::size_t samples, std::uint64_t seed);

}  // namespace rnip::nn
