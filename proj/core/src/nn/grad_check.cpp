#include "rnip/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rnip/rng.hpp"

namespace rnip::nn {

GradCheckResult grad_check(const std::vector<Parameter<double>*>& params, const std::function<double()>& loss,
                           const std::function<void()>& gradient, double epsilon, std::size_t samples,
                           std::uint64_t seed, double floor) {
  std::vector<std::size_t> offsets{0};
  for (auto* p : params) offsets.push_back(offsets.back() + p->value.size());
  const std::size_t total = offsets.back();

  for (auto* p : params) p->grad.fill(0.0);
  gradient();

  // Partial Fisher-Yates shuffle picks distinct indices.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 g(seed);
  const std::size_t k = std::min(samples, total);
  for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + g.next() % (total - i)]);

  GradCheckResult r;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t flat = order[s];
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), flat) - 1;
    const std::size_t pi = static_cast<std::size_t>(it - offsets.begin());
    Parameter<double>& p = *params[pi];
    double& v = p.value.data()[flat - *it];
    const double saved = v;
    v = saved + epsilon;
    const double up = loss();
    v = saved - epsilon;
    const double down = loss();
    v = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double analytic = p.grad.data()[flat - *it];
    const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
    if (rel > r.max_rel_error) {
      r.max_rel_error = rel;
      r.worst_parameter = p.name + "[" + std::to_string(flat - *it) + "]";
      r.worst_analytic = analytic;
      r.worst_numeric = numeric;
    }
    ++r.checked;
  }
  return r;
}

GradCheckResult grad_check(Model<double>& model, const TrainItem<double>& item, const RdLossOptions& loss,
                           const ForwardOptions& fwd, double epsilon, std::size_t samples, std::uint64_t seed) {
  return grad_check(
      model.parameters(), [&] { return evaluate_item(model, item, loss, fwd, false).total; },
      [&] { evaluate_item(model, item, loss, fwd, true); }, epsilon, samples, seed, kModelGradFloor);
}

}  // namespace rnip::nn
