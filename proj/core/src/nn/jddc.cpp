#include "rnip/nn/jddc.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rnip/metrics.hpp"
#include "rnip/nn/range_coder.hpp"
#include "rnip/rng.hpp"

namespace rnip::nn {

JddcConfig JddcConfig::for_input(InputKind kind, int enc_channels, int latent_channels) {
  JddcConfig c;
  c.enc_channels = enc_channels;
  c.latent_channels = latent_channels;
  c.input_kind = kind;
  c.bayer_head = kind == InputKind::Bayer4;
  return c;
}

void JddcConfig::validate() const {
  if (enc_channels < 1 || latent_channels < 1) throw Error(ErrorCode::ShapeMismatch, "invalid JDDC channel counts");
  if (input_kind == InputKind::Bayer4 && !bayer_head)
    throw Error(ErrorCode::ShapeMismatch, "Bayer input needs the decoder's Bayer head");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::ShapeMismatch, "lambda must be non-negative");
}

std::string JddcConfig::to_json() const {
  nlohmann::ordered_json j;
  j["enc_channels"] = enc_channels;
  j["latent_channels"] = latent_channels;
  j["input_kind"] = std::string(to_string(input_kind));
  j["bayer_head"] = bayer_head;
  j["lambda"] = lambda;
  j["negative_slope"] = negative_slope;
  j["gamma_before_loss"] = gamma_before_loss;
  return j.dump();
}

JddcConfig JddcConfig::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    JddcConfig c;
    c.enc_channels = j.value("enc_channels", c.enc_channels);
    c.latent_channels = j.value("latent_channels", c.latent_channels);
    c.input_kind = parse_input_kind(j.value("input_kind", std::string("rgb3")));
    c.bayer_head = j.value("bayer_head", c.input_kind == InputKind::Bayer4);
    c.lambda = j.value("lambda", c.lambda);
    c.negative_slope = j.value("negative_slope", c.negative_slope);
    c.gamma_before_loss = j.value("gamma_before_loss", false);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("JDDC config: ") + e.what());
  }
}

template <typename T>
Jddc<T>::Jddc(const JddcConfig& cfg, std::uint64_t seed) : cfg_(cfg), entropy_(cfg.latent_channels) {
  cfg_.validate();
  const double slope = cfg_.negative_slope;
  const int e = cfg_.enc_channels, l = cfg_.latent_channels;
  std::uint64_t layer = 0;
  auto make = [&](const std::string& name, int cin, int cout, int k, int stride, double gain_slope) {
    Conv2d<T> conv(name, cin, cout, k, stride, k / 2);
    init_he_uniform(conv.weight(), cin * k * k, gain_slope, derive_seed(seed, layer++));
    return conv;
  };

  int cin = input_channels(cfg_.input_kind);
  for (int s = 0; s < kStages; ++s) {
    const int cout = s + 1 == kStages ? l : e;
    enc_.push_back(make("enc" + std::to_string(s), cin, cout, 5, 2, s + 1 == kStages ? 1.0 : slope));
    if (s + 1 < kStages) enc_act_.emplace_back(slope);
    cin = cout;
  }
  const int feature_stages = cfg_.bayer_head ? kStages : kStages - 1;
  for (int s = 0; s < feature_stages; ++s) {
    dec_.push_back(make("dec" + std::to_string(s), cin, 4 * e, 3, 1, slope));
    dec_act_.emplace_back(slope);
    cin = e;
  }
  dec_.push_back(make(cfg_.bayer_head ? "dec.bayer_head" : "dec" + std::to_string(feature_stages), cin, 12, 3, 1, 1.0));
  entropy_.logits().lr_scale = 10.0;
}

template <typename T>
std::vector<Parameter<T>*> Jddc<T>::parameters() {
  std::vector<Parameter<T>*> out;
  for (auto* c : encoder_convolutions()) {
    out.push_back(&c->weight());
    out.push_back(&c->bias());
  }
  for (auto* c : decoder_convolutions()) {
    out.push_back(&c->weight());
    out.push_back(&c->bias());
  }
  out.push_back(&entropy_.logits());
  return out;
}

template <typename T>
std::vector<Conv2d<T>*> Jddc<T>::encoder_convolutions() {
  std::vector<Conv2d<T>*> out;
  for (auto& c : enc_) out.push_back(&c);
  return out;
}

template <typename T>
std::vector<Conv2d<T>*> Jddc<T>::decoder_convolutions() {
  std::vector<Conv2d<T>*> out;
  for (auto& c : dec_) out.push_back(&c);
  return out;
}

template <typename T>
Shape Jddc<T>::latent_shape(const Shape& in) const {
  if (in.c != input_channels(cfg_.input_kind))
    throw Error(ErrorCode::ShapeMismatch, "JDDC expects " + std::to_string(input_channels(cfg_.input_kind)) +
                                              " input channels, got " + in.str());
  const int div = 1 << kStages;
  if (in.h % div != 0 || in.w % div != 0 || in.h == 0 || in.w == 0)
    throw Error(ErrorCode::ShapeMismatch, "JDDC input " + in.str() + " not divisible by " + std::to_string(div));
  return {in.n, cfg_.latent_channels, in.h / div, in.w / div};
}

template <typename T>
Shape Jddc<T>::output_shape(const Shape& in) const {
  latent_shape(in);
  const int r = cfg_.bayer_head ? 2 : 1;
  return {in.n, 3, in.h * r, in.w * r};
}

template <typename T>
MacCount Jddc<T>::macs(double in_h, double in_w) const {
  MacCount m;
  double h = in_h, w = in_w;
  for (const auto& c : enc_) {
    m.encoder += c.macs(h, w);
    h /= 2, w /= 2;
  }
  for (const auto& c : dec_) {
    m.decoder += c.macs(h, w);
    h *= 2, w *= 2;
  }
  return m;
}

template <typename T>
Tensor<T> Jddc<T>::encode_latent(const Tensor<T>& input) {
  latent_shape(input.shape());
  Tensor<T> x = input;
  for (int s = 0; s < kStages; ++s) {
    x = enc_[s].forward(x);
    if (s + 1 < kStages) x = enc_act_[s].forward(x);
  }
  return x;
}

template <typename T>
Tensor<T> Jddc<T>::decode_latent(const Tensor<T>& latent) {
  Tensor<T> x = latent;
  for (std::size_t s = 0; s + 1 < dec_.size(); ++s) x = dec_act_[s].forward(pixel_shuffle(dec_[s].forward(x), 2));
  return pixel_shuffle(dec_.back().forward(x), 2);
}

template <typename T>
ModelOutput<T> Jddc<T>::forward(const Tensor<T>& input, const ForwardOptions& opts) {
  const Shape out_shape = output_shape(input.shape());
  output_pixels_ = out_shape.h * out_shape.w;
  Tensor<T> y = encode_latent(input);
  const Shape& ys = y.shape();
  if (opts.training) {
    for (int n = 0; n < ys.n; ++n) {
      SplitMix64 g(derive_seed(opts.noise_seed, static_cast<std::uint64_t>(n)));
      T* v = y.item(n);
      for (std::size_t i = 0; i < ys.item_size(); ++i) v[i] += static_cast<T>(g.uniform() - 0.5);
    }
  } else {
    for (T& v : y.data())
      v = std::clamp(std::round(v), static_cast<T>(FactorizedEntropyModel<T>::kMinSymbol),
                     static_cast<T>(FactorizedEntropyModel<T>::kMaxSymbol));
  }
  const std::vector<double> lik = entropy_.forward(y);

  ModelOutput<T> out;
  out.output = decode_latent(y);
  out.rate_bpp.resize(ys.n);
  out.likelihoods.resize(ys.n);
  for (int n = 0; n < ys.n; ++n) {
    const auto first = lik.begin() + static_cast<std::ptrdiff_t>(n * ys.item_size());
    out.likelihoods[n].assign(first, first + static_cast<std::ptrdiff_t>(ys.item_size()));
    out.rate_bpp[n] = analytic_bpp(out.likelihoods[n], output_pixels_);
  }
  return out;
}

template <typename T>
void Jddc<T>::backward(const Tensor<T>& grad_output, const std::vector<double>& grad_rate) {
  Tensor<T> g = pixel_unshuffle(grad_output, 2);
  g = dec_.back().backward(g);
  for (int s = static_cast<int>(dec_.size()) - 2; s >= 0; --s)
    g = dec_[s].backward(pixel_unshuffle(dec_act_[s].backward(g), 2));

  // Rounding at evaluation is treated as the identity (straight-through).
  std::vector<double> grad_bits(grad_rate.size());
  for (std::size_t n = 0; n < grad_rate.size(); ++n) grad_bits[n] = grad_rate[n] / output_pixels_;
  const Tensor<T> gr = entropy_.backward(grad_bits);
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += gr.data()[i];

  for (int s = kStages - 1; s >= 0; --s) {
    if (s + 1 < kStages) g = enc_act_[s].backward(g);
    g = enc_[s].backward(g, s > 0);
  }
}

template <typename T>
EncodedImage Jddc<T>::compress(const Tensor<T>& input, int n) {
  const Tensor<T> y = encode_latent(input);
  const Shape& ys = y.shape();
  EncodedImage enc{ys.c, ys.h, ys.w, {}};
  const std::size_t plane = static_cast<std::size_t>(ys.h) * ys.w;
  std::vector<int> symbols(ys.item_size()), model_of(ys.item_size());
  const T* v = y.item(n);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const double q = std::clamp(std::round(static_cast<double>(v[i])), double{FactorizedEntropyModel<T>::kMinSymbol},
                                double{FactorizedEntropyModel<T>::kMaxSymbol});
    symbols[i] = static_cast<int>(q) - FactorizedEntropyModel<T>::kMinSymbol;
    model_of[i] = static_cast<int>(i / plane);
  }
  const auto cdfs = entropy_.quantized_cdfs();
  enc.bitstream = range_encode(symbols, cdfs, model_of);
  return enc;
}

template <typename T>
Tensor<T> Jddc<T>::decompress(const EncodedImage& enc) {
  if (enc.latent_channels != cfg_.latent_channels)
    throw Error(ErrorCode::ShapeMismatch, "bitstream latent channels do not match the model");
  const std::size_t plane = static_cast<std::size_t>(enc.latent_h) * enc.latent_w;
  const std::size_t count = plane * enc.latent_channels;
  std::vector<int> model_of(count);
  for (std::size_t i = 0; i < count; ++i) model_of[i] = static_cast<int>(i / plane);
  const auto cdfs = entropy_.quantized_cdfs();
  const auto symbols = range_decode(enc.bitstream, cdfs, model_of, count);
  Tensor<T> y({1, enc.latent_channels, enc.latent_h, enc.latent_w});
  for (std::size_t i = 0; i < count; ++i)
    y.data()[i] = static_cast<T>(symbols[i] + FactorizedEntropyModel<T>::kMinSymbol);
  return decode_latent(y);
}

template class Jddc<float>;
template class Jddc<double>;

}  // namespace rnip::nn
