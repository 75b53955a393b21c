#include "rnip/nn/macs.hpp"

#include <cmath>

namespace rnip::nn {

double megapixel_side(double megapixels) { return 1000.0 * std::sqrt(megapixels); }

namespace {

template <typename Cfg>
double input_side(const Cfg& cfg, double megapixels) {
  const double side = megapixel_side(megapixels);
  return cfg.input_kind == InputKind::Bayer4 ? side / 2.0 : side;
}

}  // namespace

MacCount count_macs(const UNetConfig& cfg, double megapixels) {
  const double s = input_side(cfg, megapixels);
  return UNet<float>(cfg).macs(s, s);
}

MacCount count_macs(const JddcConfig& cfg, double megapixels) {
  const double s = input_side(cfg, megapixels);
  return Jddc<float>(cfg).macs(s, s);
}

}  // namespace rnip::nn
