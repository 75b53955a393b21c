#include "rnip/devproxy.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rnip/rng.hpp"

namespace rnip {

DevParams sample_dev_params(std::uint64_t seed) {
  using namespace devranges;
  SplitMix64 g(seed);
  DevParams p;
  p.seed = seed;
  p.log_tonemap_strength = g.uniform(0.0, kTonemapMax);
  p.laplacian_gain = g.uniform(0.0, kLaplacianMax);
  p.gamma = g.uniform(kGammaMin, kGammaMax);
  p.sigmoid_gain = g.uniform(0.0, kSigmoidGainMax);
  p.sigmoid_midpoint = g.uniform(kMidpointMin, kMidpointMax);
  p.unsharp_sigma = g.uniform(kSigmaMin, kSigmaMax);
  p.unsharp_amount = g.uniform(0.0, kAmountMax);
  for (bool& e : p.op_enabled) e = g.uniform() < kEnableProbability;
  return p;
}

namespace dev {

namespace {
constexpr double kLumaR = 0.2627, kLumaG = 0.6780, kLumaB = 0.0593;

inline float at_clamped(const PlanarF& p, int c, int y, int x) {
  return p(c, std::clamp(y, 0, p.height() - 1), std::clamp(x, 0, p.width() - 1));
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
}  // namespace

PlanarF log_tonemap(const PlanarF& in, double k) {
  PlanarF out = in;
  if (k <= 0.0) return out;
  const double norm = std::log1p(k);
  for (std::size_t i = 0; i < in.plane_size(); ++i) {
    const double l = kLumaR * in.plane(0)[i] + kLumaG * in.plane(1)[i] + kLumaB * in.plane(2)[i];
    const double scale = l > 0.0 ? std::log1p(k * l) / norm / l : 0.0;
    for (int c = 0; c < 3; ++c) out.plane(c)[i] = static_cast<float>(in.plane(c)[i] * scale);
  }
  return out;
}

PlanarF laplacian_enhance(const PlanarF& in, double gain) {
  PlanarF out(in.channels(), in.height(), in.width());
  for (int c = 0; c < in.channels(); ++c)
    for (int y = 0; y < in.height(); ++y)
      for (int x = 0; x < in.width(); ++x) {
        const double center = in(c, y, x);
        const double lap = 4.0 * center - at_clamped(in, c, y - 1, x) - at_clamped(in, c, y + 1, x) -
                           at_clamped(in, c, y, x - 1) - at_clamped(in, c, y, x + 1);
        out(c, y, x) = static_cast<float>(center + gain * lap);
      }
  return out;
}

PlanarF gamma_correct(const PlanarF& in, double gamma) {
  PlanarF out = in;
  for (float& v : out.data()) v = static_cast<float>(std::pow(std::max(0.0, static_cast<double>(v)), 1.0 / gamma));
  return out;
}

PlanarF sigmoid_contrast(const PlanarF& in, double gain, double mid) {
  PlanarF out = in;
  if (gain < 1e-6) return out;
  const double lo = sigmoid(-gain * mid), hi = sigmoid(gain * (1.0 - mid));
  for (float& v : out.data()) v = static_cast<float>((sigmoid(gain * (v - mid)) - lo) / (hi - lo));
  return out;
}

PlanarF gaussian_blur(const PlanarF& in, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) sum += k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : k) v /= sum;
  PlanarF tmp(in.channels(), in.height(), in.width()), out(in.channels(), in.height(), in.width());
  for (int c = 0; c < in.channels(); ++c) {
    for (int y = 0; y < in.height(); ++y)
      for (int x = 0; x < in.width(); ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * at_clamped(in, c, y, x + i);
        tmp(c, y, x) = static_cast<float>(acc);
      }
    for (int y = 0; y < in.height(); ++y)
      for (int x = 0; x < in.width(); ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * at_clamped(tmp, c, y + i, x);
        out(c, y, x) = static_cast<float>(acc);
      }
  }
  return out;
}

PlanarF unsharp_mask(const PlanarF& in, double sigma, double amount) {
  const PlanarF blurred = gaussian_blur(in, sigma);
  PlanarF out = in;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = static_cast<float>(in.data()[i] + amount * (in.data()[i] - blurred.data()[i]));
  return out;
}

}  // namespace dev

DevelopedImage develop_proxy(const LinearRgbImage& img, const DevParams& p) {
  if (img.pixels.channels() != 3) throw Error(ErrorCode::BadChannels, "develop_proxy needs 3 channels");
  PlanarF x = img.pixels;
  for (float& v : x.data()) v = std::max(0.0f, v);
  if (p.enabled(DevStage::LogTonemap)) x = dev::log_tonemap(x, p.log_tonemap_strength);
  if (p.enabled(DevStage::Laplacian)) x = dev::laplacian_enhance(x, p.laplacian_gain);
  if (p.enabled(DevStage::Gamma)) x = dev::gamma_correct(x, p.gamma);
  if (p.enabled(DevStage::Sigmoid)) x = dev::sigmoid_contrast(x, p.sigmoid_gain, p.sigmoid_midpoint);
  if (p.enabled(DevStage::Unsharp)) x = dev::unsharp_mask(x, p.unsharp_sigma, p.unsharp_amount);
  for (float& v : x.data()) v = std::isfinite(v) ? std::clamp(v, 0.0f, 1.0f) : 0.0f;
  return {std::move(x)};
}

std::string format_dev_params(const DevParams& p) {
  nlohmann::ordered_json j;
  j["log_tonemap_strength"] = p.log_tonemap_strength;
  j["laplacian_gain"] = p.laplacian_gain;
  j["gamma"] = p.gamma;
  j["sigmoid_gain"] = p.sigmoid_gain;
  j["sigmoid_midpoint"] = p.sigmoid_midpoint;
  j["unsharp_sigma"] = p.unsharp_sigma;
  j["unsharp_amount"] = p.unsharp_amount;
  j["op_enabled"] = p.op_enabled;
  j["seed"] = p.seed;
  return j.dump();
}

DevParams parse_dev_params(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    DevParams p;
    p.log_tonemap_strength = j.at("log_tonemap_strength").get<double>();
    p.laplacian_gain = j.at("laplacian_gain").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.sigmoid_gain = j.at("sigmoid_gain").get<double>();
    p.sigmoid_midpoint = j.at("sigmoid_midpoint").get<double>();
    p.unsharp_sigma = j.at("unsharp_sigma").get<double>();
    p.unsharp_amount = j.at("unsharp_amount").get<double>();
    p.op_enabled = j.at("op_enabled").get<std::array<bool, 5>>();
    p.seed = j.at("seed").get<std::uint64_t>();
    if (!(p.gamma > 0.0) || !(p.unsharp_sigma > 0.0))
      throw Error(ErrorCode::ParseError, "gamma and unsharp_sigma must be positive");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("dev params: ") + e.what());
  }
}

}  // namespace rnip
