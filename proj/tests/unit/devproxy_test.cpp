#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rnip/devproxy.hpp"
#include "rnip/error.hpp"
#include "rnip/rng.hpp"

namespace rnip {
namespace {

LinearRgbImage random_image(int h, int w, std::uint64_t seed) {
  SplitMix64 g(seed);
  LinearRgbImage img{PlanarF(3, h, w), ColorSpace::Rec2020};
  for (float& v : img.pixels.data()) v = static_cast<float>(g.uniform());
  return img;
}

TEST(SampleDevParams, DeterministicPerSeed) {
  EXPECT_EQ(sample_dev_params(42), sample_dev_params(42));
  std::set<double> gains;
  for (std::uint64_t s = 0; s < 100; ++s) gains.insert(sample_dev_params(s).sigmoid_gain);
  EXPECT_EQ(gains.size(), 100u);
}

TEST(SampleDevParams, WithinRanges) {
  using namespace devranges;
  int enabled = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const DevParams p = sample_dev_params(s);
    ASSERT_GE(p.log_tonemap_strength, 0.0);
    ASSERT_LE(p.log_tonemap_strength, kTonemapMax);
    ASSERT_GE(p.laplacian_gain, 0.0);
    ASSERT_LE(p.laplacian_gain, kLaplacianMax);
    ASSERT_GE(p.gamma, kGammaMin);
    ASSERT_LE(p.gamma, kGammaMax);
    ASSERT_GE(p.sigmoid_gain, 0.0);
    ASSERT_LE(p.sigmoid_gain, kSigmoidGainMax);
    ASSERT_GE(p.sigmoid_midpoint, kMidpointMin);
    ASSERT_LE(p.sigmoid_midpoint, kMidpointMax);
    ASSERT_GE(p.unsharp_sigma, kSigmaMin);
    ASSERT_LE(p.unsharp_sigma, kSigmaMax);
    ASSERT_GE(p.unsharp_amount, 0.0);
    ASSERT_LE(p.unsharp_amount, kAmountMax);
    for (bool e : p.op_enabled) enabled += e;
  }
  EXPECT_NEAR(enabled / 50000.0, kEnableProbability, 0.01);
}

TEST(DevelopProxy, AllDisabledIsIdentityOnUnitRange) {
  const LinearRgbImage img = random_image(9, 7, 1);
  DevParams p = sample_dev_params(3);
  p.op_enabled.fill(false);
  EXPECT_EQ(develop_proxy(img, p).pixels, img.pixels);
}

TEST(DevelopProxy, OutputIsClampedAndDeterministic) {
  LinearRgbImage img = random_image(16, 16, 2);
  for (float& v : img.pixels.data()) v *= 3.0f;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DevParams p = sample_dev_params(s);
    const DevelopedImage a = develop_proxy(img, p);
    for (float v : a.pixels.data()) {
      ASSERT_GE(v, 0.0f);
      ASSERT_LE(v, 1.0f);
    }
    EXPECT_EQ(a.pixels, develop_proxy(img, p).pixels);
  }
}

TEST(DevStages, GammaDirectEvaluation) {
  const PlanarF out = dev::gamma_correct(PlanarF(3, 1, 1, 0.25f), 2.2);
  EXPECT_NEAR(out(0, 0, 0), 0.5326, 1e-4);
  EXPECT_NEAR(out(0, 0, 0), std::pow(0.25, 1 / 2.2), 1e-7);
}

TEST(DevStages, SigmoidAtMidpoint) {
  for (double mid : {0.3, 0.5, 0.7}) {
    const double g = 6.0;
    const PlanarF out = dev::sigmoid_contrast(PlanarF(3, 1, 1, static_cast<float>(mid)), g, mid);
    auto s = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const double expected = (0.5 - s(-g * mid)) / (s(g * (1 - mid)) - s(-g * mid));
    EXPECT_NEAR(out(0, 0, 0), expected, 1e-6);
  }
  EXPECT_NEAR(dev::sigmoid_contrast(PlanarF(3, 1, 1, 0.5f), 4.0, 0.5)(1, 0, 0), 0.5, 1e-7);
  const PlanarF ends = dev::sigmoid_contrast(PlanarF(3, 1, 2, 0.0f), 5.0, 0.4);
  EXPECT_NEAR(ends(0, 0, 0), 0.0, 1e-7);
}

TEST(DevStages, LinearStagesKeepConstants) {
  const PlanarF flat(3, 8, 8, 0.4f);
  EXPECT_EQ(dev::laplacian_enhance(flat, 0.5), flat);
  const PlanarF sharpened = dev::unsharp_mask(flat, 1.5, 1.0);
  const PlanarF blurred = dev::gaussian_blur(flat, 2.0);
  for (float v : sharpened.data()) EXPECT_NEAR(v, 0.4f, 1e-6);
  for (float v : blurred.data()) EXPECT_NEAR(v, 0.4f, 1e-6);
}

TEST(DevStages, LaplacianKernel) {
  PlanarF img(3, 3, 3, 0.0f);
  img(0, 1, 1) = 1.0f;
  const PlanarF out = dev::laplacian_enhance(img, 0.25);
  EXPECT_FLOAT_EQ(out(0, 1, 1), 2.0f);
  EXPECT_FLOAT_EQ(out(0, 0, 1), -0.25f);
  EXPECT_FLOAT_EQ(out(0, 0, 0), 0.0f);
}

TEST(DevStages, LogTonemapKeepsWhiteAndHue) {
  PlanarF img(3, 1, 2, 1.0f);
  img(0, 0, 1) = 0.2f;
  img(1, 0, 1) = 0.1f;
  img(2, 0, 1) = 0.05f;
  const PlanarF out = dev::log_tonemap(img, 4.0);
  EXPECT_NEAR(out(0, 0, 0), 1.0f, 1e-6);
  EXPECT_NEAR(out(0, 0, 1) / out(1, 0, 1), 2.0f, 1e-5);
  EXPECT_GT(out(1, 0, 1), 0.1f);
}

TEST(DevParamsText, Roundtrip) {
  const DevParams p = sample_dev_params(99);
  EXPECT_EQ(parse_dev_params(format_dev_params(p)), p);
  EXPECT_THROW(parse_dev_params("{}"), Error);
}

}  // namespace
}  // namespace rnip
