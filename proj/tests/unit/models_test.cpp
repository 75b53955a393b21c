#include <gtest/gtest.h>

#include <filesystem>

#include "rnip/error.hpp"
#include "rnip/nn/checkpoint.hpp"
#include "rnip/nn/dataset.hpp"
#include "rnip/nn/grad_check.hpp"
#include "rnip/nn/jddc.hpp"
#include "rnip/nn/macs.hpp"
#include "rnip/nn/unet.hpp"
#include "rnip/rng.hpp"

namespace rnip::nn {
namespace {

template <typename T>
Tensor<T> random_input(Shape s, std::uint64_t seed) {
  SplitMix64 g(seed);
  Tensor<T> t(s);
  for (T& v : t.data()) v = static_cast<T>(g.uniform());
  return t;
}

TEST(UNet, OutputShapes) {
  UNet<float> bayer(UNetConfig::for_input(InputKind::Bayer4, 4), 1);
  EXPECT_EQ(bayer.forward(random_input<float>({1, 4, 64, 64}, 1), {}).output.shape(), (Shape{1, 3, 128, 128}));
  UNet<float> rgb(UNetConfig::for_input(InputKind::Rgb3, 4), 1);
  EXPECT_EQ(rgb.forward(random_input<float>({2, 3, 32, 48}, 1), {}).output.shape(), (Shape{2, 3, 32, 48}));
  EXPECT_EQ(rgb.output_shape({1, 3, 64, 64}), (Shape{1, 3, 64, 64}));
}

TEST(UNet, ZeroHeadGivesZeroOutput) {
  UNet<float> net(UNetConfig::for_input(InputKind::Bayer4, 4), 2);
  net.head().weight().value.fill(0.0f);
  net.head().bias().value.fill(0.0f);
  const auto out = net.forward(random_input<float>({1, 4, 32, 32}, 2), {});
  for (float v : out.output.data()) ASSERT_EQ(v, 0.0f);
  EXPECT_EQ(out.rate_bpp, std::vector<double>{0.0});
}

TEST(UNet, InvalidInputs) {
  UNet<float> net(UNetConfig::for_input(InputKind::Rgb3, 4), 3);
  try {
    net.forward(Tensor<float>({1, 3, 40, 40}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisibilityError);
  }
  try {
    net.forward(Tensor<float>({1, 4, 32, 32}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  UNetConfig bad = UNetConfig::for_input(InputKind::Bayer4);
  bad.output_upscale = OutputUpscale::None;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Jddc, ShapesAndUniformRate) {
  Jddc<float> net(JddcConfig::for_input(InputKind::Bayer4, 8, 6), 4);
  const Shape in{2, 4, 32, 48};
  EXPECT_EQ(net.latent_shape(in), (Shape{2, 6, 2, 3}));
  // Zero logits: every latent costs 8 bits.
  const auto out = net.forward(random_input<float>(in, 4), {});
  EXPECT_EQ(out.output.shape(), (Shape{2, 3, 64, 96}));
  ASSERT_EQ(out.rate_bpp.size(), 2u);
  for (double r : out.rate_bpp) EXPECT_NEAR(r, 8.0 * 6 * 2 * 3 / (64.0 * 96.0), 1e-9);
  EXPECT_THROW(net.forward(Tensor<float>({1, 4, 24, 24}), {}), Error);
  Jddc<float> rgb(JddcConfig::for_input(InputKind::Rgb3, 8, 6), 4);
  EXPECT_EQ(rgb.output_shape({1, 3, 32, 32}), (Shape{1, 3, 32, 32}));
}

TEST(Jddc, CompressMatchesEvaluationDecode) {
  Jddc<float> net(JddcConfig::for_input(InputKind::Bayer4, 8, 6), 5);
  SplitMix64 g(5);
  for (float& v : net.entropy().logits().value.data()) v = static_cast<float>(g.uniform(-2, 2));
  const auto input = random_input<float>({2, 4, 32, 32}, 5);
  const auto eval = net.forward(input, {});
  for (int n = 0; n < 2; ++n) {
    const EncodedImage enc = net.compress(input, n);
    const auto decoded = net.decompress(enc);
    ASSERT_EQ(decoded.shape().item_size(), eval.output.shape().item_size());
    for (std::size_t i = 0; i < decoded.size(); ++i) ASSERT_FLOAT_EQ(decoded.data()[i], eval.output.item(n)[i]);
  }
}

TEST(Jddc, TrainingNoiseIsSeeded) {
  Jddc<float> net(JddcConfig::for_input(InputKind::Rgb3, 8, 6), 6);
  const auto input = random_input<float>({1, 3, 32, 32}, 6);
  const auto a = net.forward(input, {true, 11});
  const auto b = net.forward(input, {true, 11});
  const auto c = net.forward(input, {true, 12});
  EXPECT_EQ(a.output.data(), b.output.data());
  EXPECT_NE(a.output.data(), c.output.data());
}

TEST(GradCheck, LinearConvolutionIsExact) {
  Conv2d<double> conv("lin", 2, 1, 3, 1, 1);
  SplitMix64 g(7);
  for (double& v : conv.weight().value.data()) v = g.uniform(-1, 1);
  Tensor<double> x({1, 2, 6, 6});
  for (double& v : x.data()) v = g.uniform(-1, 1);
  // Loss is linear in the parameters, so central differences are exact.
  auto loss = [&] {
    const auto y = conv.forward(x);
    double s = 0.0;
    for (double v : y.data()) s += v;
    return s;
  };
  auto grad = [&] { conv.backward(Tensor<double>(conv.forward(x).shape(), 1.0), false); };
  const auto r = grad_check({&conv.weight(), &conv.bias()}, loss, grad, 1e-3, 19, 1);
  EXPECT_LT(r.max_rel_error, 1e-9);
}

TEST(GradCheck, UNetFullObjective) {
  UNet<double> net(UNetConfig::for_input(InputKind::Rgb3, 2), 8);
  const SyntheticPair pair = make_synthetic_pair(176, 176, 8);
  const auto item = make_train_item<double>(pair, InputKind::Rgb3);
  const auto r = grad_check(net, item, synthetic_loss_options(InputKind::Rgb3, 0.0), {}, 1e-6, 200, 9);
  EXPECT_LT(r.max_rel_error, 1e-3) << r.worst_parameter << " analytic " << r.worst_analytic << " numeric " << r.worst_numeric;
}

TEST(GradCheck, JddcFullObjective) {
  Jddc<double> net(JddcConfig::for_input(InputKind::Bayer4, 4, 4), 10);
  const SyntheticPair pair = make_synthetic_pair(192, 192, 10);
  const auto item = make_train_item<double>(pair, InputKind::Bayer4);
  const auto r =
      grad_check(net, item, synthetic_loss_options(InputKind::Bayer4, 0.01), {true, 77}, 1e-6, 200, 11);
  EXPECT_LT(r.max_rel_error, 1e-3) << r.worst_parameter << " analytic " << r.worst_analytic << " numeric " << r.worst_numeric;
}

TEST(Macs, BayerInputCutsCostByAboutFour) {
  const auto bayer = count_macs(UNetConfig::for_input(InputKind::Bayer4)).total();
  const auto rgb = count_macs(UNetConfig::for_input(InputKind::Rgb3)).total();
  EXPECT_NEAR(bayer / rgb, 0.25, 0.01);
  const auto jb = count_macs(JddcConfig::for_input(InputKind::Bayer4));
  const auto jr = count_macs(JddcConfig::for_input(InputKind::Rgb3));
  EXPECT_GE(jb.encoder / jr.encoder, 0.22);
  EXPECT_LE(jb.encoder / jr.encoder, 0.30);
}

TEST(Macs, DoubledWidthQuadruplesInteriorCost) {
  const auto base = count_macs(UNetConfig::for_input(InputKind::Rgb3, 16)).total();
  const auto wide = count_macs(UNetConfig::for_input(InputKind::Rgb3, 32)).total();
  EXPECT_NEAR(wide / base, 4.0, 0.05);
  EXPECT_NEAR(count_macs(UNetConfig::for_input(InputKind::Rgb3), 4.0).total() / count_macs(UNetConfig::for_input(InputKind::Rgb3)).total(), 4.0, 1e-9);
}

TEST(Macs, AnalyticCountMatchesExecutedConvolutions) {
  UNet<float> unet(UNetConfig::for_input(InputKind::Bayer4, 4), 1);
  unet.forward(Tensor<float>({1, 4, 64, 64}), {});
  std::uint64_t executed = 0;
  for (auto* c : unet.convolutions()) executed += c->forward_macs();
  EXPECT_DOUBLE_EQ(unet.macs(64, 64).total(), static_cast<double>(executed));

  Jddc<float> jddc(JddcConfig::for_input(InputKind::Bayer4, 8, 6), 1);
  jddc.forward(Tensor<float>({1, 4, 64, 64}), {});
  std::uint64_t enc = 0, dec = 0;
  for (auto* c : jddc.encoder_convolutions()) enc += c->forward_macs();
  for (auto* c : jddc.decoder_convolutions()) dec += c->forward_macs();
  EXPECT_DOUBLE_EQ(jddc.macs(64, 64).encoder, static_cast<double>(enc));
  EXPECT_DOUBLE_EQ(jddc.macs(64, 64).decoder, static_cast<double>(dec));
}

TEST(Checkpoint, RoundtripPreservesOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "rnip_ckpt_test";
  std::filesystem::create_directories(dir);
  Jddc<float> net(JddcConfig::for_input(InputKind::Bayer4, 8, 6), 12);
  SplitMix64 g(12);
  for (float& v : net.entropy().logits().value.data()) v = static_cast<float>(g.uniform(-1, 1));
  save_checkpoint(net, dir / "a.ckpt", R"({"step": 3})");
  auto loaded = load_checkpoint(dir / "a.ckpt");
  EXPECT_EQ(loaded.model->kind(), "jddc");
  EXPECT_EQ(loaded.model->config_json(), net.config_json());
  EXPECT_NE(loaded.metadata.find("\"step\""), std::string::npos);
  const auto input = random_input<float>({1, 4, 32, 32}, 12);
  EXPECT_EQ(loaded.model->forward(input, {}).output.data(), net.forward(input, {}).output.data());

  UNet<float> unet(UNetConfig::for_input(InputKind::Rgb3, 4), 13);
  save_checkpoint(unet, dir / "u.ckpt");
  EXPECT_EQ(load_checkpoint(dir / "u.ckpt").model->parameter_count(), unet.parameter_count());
}

TEST(Checkpoint, MissingAndCorruptFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "rnip_ckpt_test";
  std::filesystem::create_directories(dir);
  try {
    load_checkpoint(dir / "nope.ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCheckpoint);
  }
  Jddc<float> net(JddcConfig::for_input(InputKind::Bayer4, 8, 6), 14);
  save_checkpoint(net, dir / "t.ckpt");
  std::filesystem::resize_file(dir / "t.ckpt", std::filesystem::file_size(dir / "t.ckpt") - 4);
  EXPECT_THROW(load_checkpoint(dir / "t.ckpt"), Error);
}

}  // namespace
}  // namespace rnip::nn
