#include "rnip/nn/unet.hpp"

#include <json.hpp>

#include "rnip/rng.hpp"

namespace rnip::nn {

UNetConfig UNetConfig::for_input(InputKind kind, int base_channels) {
  UNetConfig c;
  c.base_channels = base_channels;
  c.input_kind = kind;
  c.output_upscale = kind == InputKind::Bayer4 ? OutputUpscale::PixelShuffle2x : OutputUpscale::None;
  return c;
}

void UNetConfig::validate() const {
  if (base_channels < 1 || depth < 0 || depth > 8) throw Error(ErrorCode::ShapeMismatch, "invalid U-Net width or depth");
  if (input_kind == InputKind::Bayer4 && output_upscale != OutputUpscale::PixelShuffle2x)
    throw Error(ErrorCode::ShapeMismatch, "Bayer input needs the pixel-shuffle output head");
}

std::string UNetConfig::to_json() const {
  nlohmann::ordered_json j;
  j["base_channels"] = base_channels;
  j["depth"] = depth;
  j["negative_slope"] = negative_slope;
  j["input_kind"] = std::string(to_string(input_kind));
  j["output_upscale"] = output_upscale == OutputUpscale::PixelShuffle2x ? "pixel_shuffle_2x" : "none";
  j["gamma_before_loss"] = gamma_before_loss;
  return j.dump();
}

UNetConfig UNetConfig::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    UNetConfig c;
    c.base_channels = j.value("base_channels", c.base_channels);
    c.depth = j.value("depth", c.depth);
    c.negative_slope = j.value("negative_slope", c.negative_slope);
    c.input_kind = parse_input_kind(j.value("input_kind", std::string("rgb3")));
    c.output_upscale = j.value("output_upscale", std::string("none")) == "pixel_shuffle_2x" ? OutputUpscale::PixelShuffle2x
                                                                                           : OutputUpscale::None;
    c.gamma_before_loss = j.value("gamma_before_loss", false);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("U-Net config: ") + e.what());
  }
}

template <typename T>
UNet<T>::UNet(const UNetConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  const double slope = cfg_.negative_slope;
  const int b = cfg_.base_channels;
  std::uint64_t layer = 0;
  auto make = [&](const std::string& name, int cin, int cout, int k, double gain_slope) {
    Conv2d<T> conv(name, cin, cout, k, 1, k / 2);
    init_he_uniform(conv.weight(), cin * k * k, gain_slope, derive_seed(seed, layer++));
    return conv;
  };

  int cin = input_channels(cfg_.input_kind);
  for (int l = 0; l <= cfg_.depth; ++l) {
    const int ch = b << l;
    const std::string p = "down" + std::to_string(l);
    down_.push_back({make(p + ".conv_a", cin, ch, 3, slope), make(p + ".conv_b", ch, ch, 3, slope), LeakyRelu<T>(slope),
                     LeakyRelu<T>(slope), MaxPool2<T>()});
    cin = ch;
  }
  up_.resize(cfg_.depth);
  for (int l = cfg_.depth - 1; l >= 0; --l) {
    const int ch = b << l;
    const std::string p = "up" + std::to_string(l);
    up_[l] = {make(p + ".up_conv", ch * 2, ch, 3, slope),
              make(p + ".conv_a", ch * 2, ch, 3, slope),
              make(p + ".conv_b", ch, ch, 3, slope),
              LeakyRelu<T>(slope),
              LeakyRelu<T>(slope),
              LeakyRelu<T>(slope),
              ch};
  }
  const int out = cfg_.output_upscale == OutputUpscale::PixelShuffle2x ? 12 : 3;
  head_ = make("head", b, out, 1, 1.0);
}

template <typename T>
std::vector<Parameter<T>*> UNet<T>::parameters() {
  std::vector<Parameter<T>*> out;
  for (auto* c : convolutions()) {
    out.push_back(&c->weight());
    out.push_back(&c->bias());
  }
  return out;
}

template <typename T>
std::vector<Conv2d<T>*> UNet<T>::convolutions() {
  std::vector<Conv2d<T>*> out;
  for (auto& d : down_) {
    out.push_back(&d.conv_a);
    out.push_back(&d.conv_b);
  }
  for (int l = cfg_.depth - 1; l >= 0; --l) {
    out.push_back(&up_[l].up_conv);
    out.push_back(&up_[l].conv_a);
    out.push_back(&up_[l].conv_b);
  }
  out.push_back(&head_);
  return out;
}

template <typename T>
Shape UNet<T>::output_shape(const Shape& in) const {
  if (in.c != input_channels(cfg_.input_kind))
    throw Error(ErrorCode::ShapeMismatch, "U-Net expects " + std::to_string(input_channels(cfg_.input_kind)) +
                                              " input channels, got " + in.str());
  const int div = 1 << cfg_.depth;
  if (in.h % div != 0 || in.w % div != 0 || in.h == 0 || in.w == 0)
    throw Error(ErrorCode::DivisibilityError, "U-Net input " + in.str() + " not divisible by " + std::to_string(div));
  const int r = cfg_.output_upscale == OutputUpscale::PixelShuffle2x ? 2 : 1;
  return {in.n, 3, in.h * r, in.w * r};
}

template <typename T>
ModelOutput<T> UNet<T>::forward(const Tensor<T>& input, const ForwardOptions&) {
  output_shape(input.shape());
  std::vector<Tensor<T>> skips(cfg_.depth);
  Tensor<T> x = input;
  for (int l = 0; l <= cfg_.depth; ++l) {
    auto& d = down_[l];
    Tensor<T> h = d.act_b.forward(d.conv_b.forward(d.act_a.forward(d.conv_a.forward(x))));
    if (l < cfg_.depth) {
      x = d.pool.forward(h);
      skips[l] = std::move(h);
    } else {
      x = std::move(h);
    }
  }
  for (int l = cfg_.depth - 1; l >= 0; --l) {
    auto& u = up_[l];
    Tensor<T> h = u.act_up.forward(u.up_conv.forward(upsample_nearest2(x)));
    h = concat_channels(h, skips[l]);
    x = u.act_b.forward(u.conv_b.forward(u.act_a.forward(u.conv_a.forward(h))));
  }
  ModelOutput<T> out;
  out.output = head_.forward(x);
  if (cfg_.output_upscale == OutputUpscale::PixelShuffle2x) out.output = pixel_shuffle(out.output, 2);
  out.rate_bpp.assign(input.shape().n, 0.0);
  return out;
}

template <typename T>
void UNet<T>::backward(const Tensor<T>& grad_output, const std::vector<double>&) {
  Tensor<T> g = cfg_.output_upscale == OutputUpscale::PixelShuffle2x ? pixel_unshuffle(grad_output, 2) : grad_output;
  g = head_.backward(g);
  std::vector<Tensor<T>> skip_grads(cfg_.depth);
  for (int l = 0; l < cfg_.depth; ++l) {
    auto& u = up_[l];
    g = u.conv_a.backward(u.act_a.backward(u.conv_b.backward(u.act_b.backward(g))));
    Tensor<T> gu;
    split_channels(g, u.skip_channels, gu, skip_grads[l]);
    g = upsample_nearest2_backward(u.up_conv.backward(u.act_up.backward(gu)));
  }
  for (int l = cfg_.depth; l >= 0; --l) {
    auto& d = down_[l];
    if (l < cfg_.depth) {
      g = d.pool.backward(g);
      for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += skip_grads[l].data()[i];
    }
    g = d.conv_b.backward(d.act_b.backward(g));
    g = d.conv_a.backward(d.act_a.backward(g), l > 0);
  }
}

template <typename T>
MacCount UNet<T>::macs(double in_h, double in_w) const {
  MacCount m;
  double h = in_h, w = in_w;
  for (int l = 0; l <= cfg_.depth; ++l) {
    m.encoder += down_[l].conv_a.macs(h, w) + down_[l].conv_b.macs(h, w);
    if (l < cfg_.depth) h /= 2, w /= 2;
  }
  for (int l = cfg_.depth - 1; l >= 0; --l) {
    h *= 2, w *= 2;
    m.decoder += up_[l].up_conv.macs(h, w) + up_[l].conv_a.macs(h, w) + up_[l].conv_b.macs(h, w);
  }
  m.decoder += head_.macs(h, w);
  return m;
}

template class UNet<float>;
template class UNet<double>;

}  // namespace rnip::nn
