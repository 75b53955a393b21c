#include <gtest/gtest.h>

#include "rnip/demosaic.hpp"
#include "rnip/metrics.hpp"
#include "rnip/synthetic.hpp"

namespace rnip {
namespace {

BayerMosaic constant_mosaic(int h, int w, float v) { return {PlanarF(1, h, w, v), CfaPattern::RGGB, {}}; }

TEST(Bilinear, ConstantStaysConstant) {
  const LinearRgbImage out = demosaic_bilinear(constant_mosaic(8, 10, 0.37f));
  EXPECT_EQ(out.height(), 8);
  EXPECT_EQ(out.width(), 10);
  for (float v : out.pixels.data()) EXPECT_FLOAT_EQ(v, 0.37f);
}

TEST(Bilinear, ChannelsAreIndependent) {
  BayerMosaic m = constant_mosaic(4, 4, 0.0f);
  for (int y = 0; y < 4; y += 2)
    for (int x = 0; x < 4; x += 2) m.data(0, y, x) = 1.0f;
  const LinearRgbImage out = demosaic_bilinear(m);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      EXPECT_FLOAT_EQ(out.pixels(0, y, x), 1.0f);
      EXPECT_FLOAT_EQ(out.pixels(1, y, x), 0.0f);
      EXPECT_FLOAT_EQ(out.pixels(2, y, x), 0.0f);
    }
}

TEST(Bilinear, BlueSiteRedIsDiagonalMean) {
  BayerMosaic m = constant_mosaic(6, 6, 0.0f);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x) m.data(0, y, x) = static_cast<float>(y * 6 + x);
  const LinearRgbImage out = demosaic_bilinear(m);
  // (3,3) is a blue site; its red neighbours sit at (2,2) (2,4) (4,2) (4,4).
  const float expected = (14.0f + 16.0f + 26.0f + 28.0f) / 4.0f;
  EXPECT_FLOAT_EQ(out.pixels(0, 3, 3), expected);
  EXPECT_FLOAT_EQ(out.pixels(2, 3, 3), 21.0f);
}

TEST(Bilinear, Preconditions) {
  EXPECT_THROW(demosaic_bilinear({PlanarF(1, 4, 4), CfaPattern::GRBG, {}}), Error);
  EXPECT_THROW(demosaic_bilinear(constant_mosaic(5, 4, 0)), Error);
  EXPECT_THROW(demosaic_bilinear(constant_mosaic(2, 2, 0)), Error);
}

TEST(EdgeAware, ConstantStaysConstant) {
  const LinearRgbImage out = demosaic_edge_aware(constant_mosaic(8, 8, 0.61f));
  for (float v : out.pixels.data()) EXPECT_NEAR(v, 0.61f, 1e-6);
}

TEST(EdgeAware, VerticalStepHasNoZipper) {
  const int h = 12, w = 12;
  PlanarF rgb(3, h, w);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) rgb(c, y, x) = x < 6 ? 0.2f : 0.7f;
  const LinearRgbImage out = demosaic_edge_aware(mosaic_rggb(rgb));
  for (int y = 2; y < h - 2; ++y)
    for (int x = 1; x < w - 1; ++x) EXPECT_NEAR(out.pixels(1, y, x), rgb(1, y, x), 1e-6) << y << "," << x;
}

TEST(EdgeAware, BeatsBilinearOnAKnownScene) {
  const PlanarF scene = planar_cast<float>(synthetic_scene(3, 96, 96, 21));
  const BayerMosaic m = mosaic_rggb(scene);
  const double bl = psnr(demosaic_bilinear(m).pixels, scene);
  const double ea = psnr(demosaic_edge_aware(m).pixels, scene);
  EXPECT_GE(ea, bl);
}

TEST(MosaicRggb, SamplesTheRightChannels) {
  PlanarF rgb(3, 4, 4);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 16; ++i) rgb.data()[c * 16 + i] = static_cast<float>(c + 1);
  const BayerMosaic m = mosaic_rggb(rgb);
  EXPECT_EQ(m.at(0, 0), 1);
  EXPECT_EQ(m.at(0, 1), 2);
  EXPECT_EQ(m.at(1, 0), 2);
  EXPECT_EQ(m.at(1, 1), 3);
}

}  // namespace
}  // namespace rnip
