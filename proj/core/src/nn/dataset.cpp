#include "rnip/nn/dataset.hpp"

#include <cmath>

#include "rnip/demosaic.hpp"
#include "rnip/parallel.hpp"

namespace rnip::nn {

namespace {

void encode_gamma(PlanarD& img) {
  for (double& v : img.data()) v = v > 0.0 ? std::pow(v, 1.0 / kLossGamma) : v;
}

}  // namespace

template <typename T>
TrainItem<T> make_train_item(const SyntheticPair& pair, InputKind kind) {
  TrainItem<T> item;
  item.target = pair.clean_rec2020;
  if (kind == InputKind::Bayer4) {
    const PackedBayer packed = pack_planes(to_mosaic(pair.noisy_mosaic));
    item.input = from_planar<T>(packed.planes);
    return item;
  }
  const LinearRgbImage rgb = demosaic_bilinear(to_mosaic(pair.noisy_mosaic));
  if (kind == InputKind::Rgb3) {
    item.input = from_planar<T>(rgb.pixels);
    return item;
  }
  PlanarD rec = apply_color_matrix(planar_cast<double>(rgb.pixels), synthetic_rec2020_to_camrgb().inverse());
  encode_gamma(rec);
  encode_gamma(item.target);
  item.input = from_planar<T>(rec);
  return item;
}

RdLossOptions synthetic_loss_options(InputKind kind, double lambda, bool gamma_before_loss) {
  RdLossOptions o;
  o.lambda = lambda;
  o.gamma_before_loss = gamma_before_loss;
  if (kind != InputKind::Developed3) o.camrgb_to_rec2020 = synthetic_rec2020_to_camrgb().inverse();
  return o;
}

template <typename T>
std::vector<TrainItem<T>> make_synthetic_set(int count, int height, int width, InputKind kind, std::uint64_t seed,
                                             int threads) {
  std::vector<TrainItem<T>> items(static_cast<std::size_t>(std::max(count, 0)));
  parallel_for(items.size(), threads, [&](std::size_t i, int) {
    items[i] = make_train_item<T>(make_synthetic_pair(height, width, derive_seed(seed, i)), kind);
  });
  return items;
}

template TrainItem<float> make_train_item<float>(const SyntheticPair&, InputKind);
template TrainItem<double> make_train_item<double>(const SyntheticPair&, InputKind);
template std::vector<TrainItem<float>> make_synthetic_set<float>(int, int, int, InputKind, std::uint64_t, int);
template std::vector<TrainItem<double>> make_synthetic_set<double>(int, int, int, InputKind, std::uint64_t, int);

}  // namespace rnip::nn
