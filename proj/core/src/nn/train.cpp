#include "rnip/nn/train.hpp"

#include <cmath>
#include <sstream>

#include "rnip/parallel.hpp"
#include "rnip/rng.hpp"

namespace rnip::nn {

template <typename T>
void Adam<T>::step(const std::vector<Parameter<T>*>& params) {
  if (m_.size() != params.size()) {
    m_.assign(params.size(), {});
    v_.assign(params.size(), {});
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i].assign(params[i]->value.size(), 0.0);
      v_[i].assign(params[i]->value.size(), 0.0);
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(p_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(p_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& value = params[k]->value.data();
    const auto& grad = params[k]->grad.data();
    const double lr = p_.lr * params[k]->lr_scale;
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = p_.beta1 * m[i] + (1.0 - p_.beta1) * g;
      v[i] = p_.beta2 * v[i] + (1.0 - p_.beta2) * g * g;
      value[i] = static_cast<T>(value[i] - lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + p_.eps));
    }
  }
}

template <typename T>
void copy_parameters(Model<T>& from, Model<T>& to) {
  const auto src = from.parameters();
  const auto dst = to.parameters();
  if (src.size() != dst.size()) throw Error(ErrorCode::ShapeMismatch, "models differ in parameter count");
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i]->value.shape() != dst[i]->value.shape())
      throw Error(ErrorCode::ShapeMismatch, "parameter " + src[i]->name + " differs in shape");
    dst[i]->value = src[i]->value;
  }
}

template <typename T>
RdLossTerms evaluate_item(Model<T>& model, const TrainItem<T>& item, const RdLossOptions& loss,
                          const ForwardOptions& fwd, bool backprop, double grad_scale) {
  ModelOutput<T> out = model.forward(item.input, fwd);
  const PlanarD x_hat = to_planar<double>(out.output, 0);
  PlanarD g;
  const LossMask* mask = item.mask ? &*item.mask : nullptr;
  const RdLossTerms terms = rd_loss(x_hat, item.target, mask, out.rate_bpp[0], loss, backprop ? &g : nullptr);
  if (backprop) {
    Tensor<T> gout(out.output.shape());
    for (std::size_t i = 0; i < g.size(); ++i) gout.data()[i] = static_cast<T>(g.data()[i] * grad_scale);
    model.backward(gout, {loss.lambda * grad_scale});
  }
  return terms;
}

template <typename T>
Trainer<T>::Trainer(Model<T>& model, TrainOptions opts) : model_(model), opts_(opts), adam_(opts.adam) {}

template <typename T>
RdLossTerms Trainer<T>::step(std::span<const TrainItem<T>* const> batch) {
  const std::size_t n = batch.size();
  if (n == 0) return {};
  const int workers = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(std::max(opts_.threads, 1))));
  while (static_cast<int>(replicas_.size()) < workers) replicas_.push_back(model_.clone());
  for (int w = 0; w < workers; ++w) copy_parameters(model_, *replicas_[w]);

  const double scale = 1.0 / static_cast<double>(n);
  std::vector<RdLossTerms> terms(n);
  std::vector<std::vector<double>> grads(n);
  parallel_for(n, workers, [&](std::size_t i, int w) {
    Model<T>& m = *replicas_[w];
    m.zero_grad();
    ForwardOptions fwd;
    fwd.training = true;
    fwd.noise_seed = derive_seed(opts_.seed, static_cast<std::uint64_t>(step_), i);
    terms[i] = evaluate_item(m, *batch[i], opts_.loss, fwd, true, scale);
    auto& flat = grads[i];
    for (auto* p : m.parameters()) flat.insert(flat.end(), p->grad.data().begin(), p->grad.data().end());
  });

  RdLossTerms mean;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(terms[i].total)) {
      std::ostringstream msg;
      msg << "non-finite loss at step " << step_ << ", item " << i << ": distortion " << terms[i].distortion
          << ", rate " << terms[i].rate_bpp << " bpp";
      throw Error(ErrorCode::NonFiniteLoss, msg.str());
    }
    mean.distortion += terms[i].distortion * scale;
    mean.rate_bpp += terms[i].rate_bpp * scale;
  }
  mean.total = mean.distortion + opts_.loss.lambda * mean.rate_bpp;

  const auto params = model_.parameters();
  std::vector<double> sum(grads[0].size(), 0.0);
  for (const auto& g : grads)
    for (std::size_t k = 0; k < g.size(); ++k) sum[k] += g[k];
  std::size_t k = 0;
  for (auto* p : params)
    for (T& g : p->grad.data()) g = static_cast<T>(sum[k++]);
  for (double v : sum)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteLoss, "non-finite gradient at step " + std::to_string(step_));

  adam_.step(params);
  ++step_;
  return mean;
}

template class Adam<float>;
template class Adam<double>;
template class Trainer<float>;
template class Trainer<double>;
template void copy_parameters<float>(Model<float>&, Model<float>&);
template void copy_parameters<double>(Model<double>&, Model<double>&);
template RdLossTerms evaluate_item<float>(Model<float>&, const TrainItem<float>&, const RdLossOptions&,
                                          const ForwardOptions&, bool, double);
template RdLossTerms evaluate_item<double>(Model<double>&, const TrainItem<double>&, const RdLossOptions&,
                                           const ForwardOptions&, bool, double);

}  // namespace rnip::nn
