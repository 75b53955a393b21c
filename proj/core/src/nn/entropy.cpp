#include "rnip/nn/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rnip::nn {

namespace {

// Bin-edge coordinate: edge j sits at symbol value j + kMinSymbol - 1/2.
template <typename M>
double edge_pos(double v) {
  return v - (M::kMinSymbol - 0.5);
}

struct CdfEval {
  double value;
  int bin;      // -1 below the support, kBins above it
  double frac;  // position within the bin
};

template <int Bins>
CdfEval eval_cdf(const std::vector<double>& cum, double pos) {
  if (pos <= 0.0) return {0.0, -1, 0.0};
  if (pos >= Bins) return {1.0, Bins, 0.0};
  const int j = static_cast<int>(pos);
  const double f = pos - j;
  return {cum[j] + f * (cum[j + 1] - cum[j]), j, f};
}

}  // namespace

template <typename T>
FactorizedEntropyModel<T>::FactorizedEntropyModel(int channels)
    : channels_(channels), logits_("entropy.logits", {channels, kBins, 1, 1}) {}

template <typename T>
std::vector<double> FactorizedEntropyModel<T>::pmf(int channel) const {
  const T* z = logits_.value.data().data() + static_cast<std::size_t>(channel) * kBins;
  const double mx = *std::max_element(z, z + kBins);
  std::vector<double> p(kBins);
  double sum = 0.0;
  for (int i = 0; i < kBins; ++i) sum += p[i] = std::exp(static_cast<double>(z[i]) - mx);
  for (double& v : p) v /= sum;
  return p;
}

template <typename T>
std::vector<double> FactorizedEntropyModel<T>::forward(const Tensor<T>& y) {
  const Shape& s = y.shape();
  if (s.c != channels_) throw Error(ErrorCode::ShapeMismatch, "entropy model expects " + std::to_string(channels_) + " channels");
  input_ = y;
  likelihood_.assign(y.size(), 0.0);
  bits_ = 0.0;
  const std::size_t plane = static_cast<std::size_t>(s.h) * s.w;
  for (int c = 0; c < channels_; ++c) {
    const auto p = pmf(c);
    std::vector<double> cum(kBins + 1, 0.0);
    for (int i = 0; i < kBins; ++i) cum[i + 1] = cum[i] + p[i];
    for (int n = 0; n < s.n; ++n) {
      const T* src = y.item(n) + c * plane;
      double* dst = likelihood_.data() + static_cast<std::size_t>(n) * s.item_size() + c * plane;
      for (std::size_t i = 0; i < plane; ++i) {
        const double pos = edge_pos<FactorizedEntropyModel>(static_cast<double>(src[i]));
        double l;
        // Integer inputs read the bin mass directly so it matches pmf() bit for bit.
        const double rp = std::round(pos - 0.5);
        if (pos - 0.5 == rp && rp >= 0 && rp < kBins) {
          l = p[static_cast<int>(rp)];
        } else {
          l = eval_cdf<kBins>(cum, pos + 0.5).value - eval_cdf<kBins>(cum, pos - 0.5).value;
        }
        l = std::max(l, kLikelihoodBound);
        dst[i] = l;
        bits_ -= std::log2(l);
      }
    }
  }
  return likelihood_;
}

template <typename T>
std::vector<double> FactorizedEntropyModel<T>::item_bits() const {
  const Shape& s = input_.shape();
  std::vector<double> out(s.n, 0.0);
  for (int n = 0; n < s.n; ++n) {
    const double* lik = likelihood_.data() + static_cast<std::size_t>(n) * s.item_size();
    for (std::size_t i = 0; i < s.item_size(); ++i) out[n] -= std::log2(lik[i]);
  }
  return out;
}

template <typename T>
Tensor<T> FactorizedEntropyModel<T>::backward(double grad_bits) {
  return backward(std::vector<double>(input_.shape().n, grad_bits));
}

template <typename T>
Tensor<T> FactorizedEntropyModel<T>::backward(const std::vector<double>& grad_bits_per_item) {
  const Shape& s = input_.shape();
  if (static_cast<int>(grad_bits_per_item.size()) != s.n) throw Error(ErrorCode::ShapeMismatch, "one rate gradient per item expected");
  Tensor<T> gy(s);
  const std::size_t plane = static_cast<std::size_t>(s.h) * s.w;
  for (int c = 0; c < channels_; ++c) {
    const auto p = pmf(c);
    std::vector<double> cum(kBins + 1, 0.0);
    for (int i = 0; i < kBins; ++i) cum[i + 1] = cum[i] + p[i];
    // dBits/dp_i = prefix_tail[i] + point[i], where prefix[j] applies to all i < j.
    std::vector<double> prefix(kBins + 1, 0.0), point(kBins, 0.0);
    for (int n = 0; n < s.n; ++n) {
      const double grad_bits = grad_bits_per_item[n];
      const T* src = input_.item(n) + c * plane;
      const double* lik = likelihood_.data() + static_cast<std::size_t>(n) * s.item_size() + c * plane;
      T* g = gy.item(n) + c * plane;
      for (std::size_t i = 0; i < plane; ++i) {
        const double l = lik[i];
        if (l <= kLikelihoodBound) continue;
        const double dl = -grad_bits / (l * std::numbers::ln2);
        const double pos = edge_pos<FactorizedEntropyModel>(static_cast<double>(src[i]));
        const CdfEval hi = eval_cdf<kBins>(cum, pos + 0.5);
        const CdfEval lo = eval_cdf<kBins>(cum, pos - 0.5);
        double dv = 0.0;
        if (hi.bin >= 0 && hi.bin < kBins) {
          dv += p[hi.bin];
          prefix[hi.bin] += dl;
          point[hi.bin] += dl * hi.frac;
        }
        if (lo.bin >= 0 && lo.bin < kBins) {
          dv -= p[lo.bin];
          prefix[lo.bin] -= dl;
          point[lo.bin] -= dl * lo.frac;
        }
        g[i] = static_cast<T>(dl * dv);
      }
    }
    std::vector<double> gp(kBins);
    double tail = 0.0;
    for (int i = kBins - 1; i >= 0; --i) {
      tail += prefix[i + 1];
      gp[i] = tail + point[i];
    }
    double dot = 0.0;
    for (int i = 0; i < kBins; ++i) dot += p[i] * gp[i];
    T* gz = logits_.grad.data().data() + static_cast<std::size_t>(c) * kBins;
    for (int i = 0; i < kBins; ++i) gz[i] += static_cast<T>(p[i] * (gp[i] - dot));
  }
  return gy;
}

template <typename T>
std::vector<QuantizedCdf> FactorizedEntropyModel<T>::quantized_cdfs() const {
  std::vector<QuantizedCdf> out;
  out.reserve(channels_);
  for (int c = 0; c < channels_; ++c) {
    const auto p = pmf(c);
    out.push_back(quantize_pmf(p));
  }
  return out;
}

template class FactorizedEntropyModel<float>;
template class FactorizedEntropyModel<double>;

}  // namespace rnip::nn
