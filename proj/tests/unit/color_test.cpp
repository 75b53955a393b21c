#include <gtest/gtest.h>

#include "rnip/color.hpp"
#include "rnip/raw.hpp"
#include "rnip/rng.hpp"

namespace rnip {
namespace {

TEST(XyzToRec2020, MatchesThePublishedMatrix) {
  const ColorMatrix3 m = xyz_to_rec2020_matrix();
  const double expected[9] = {1.7167, -0.3557, -0.2534, -0.6667, 1.6165, 0.0158, 0.0176, -0.0428, 0.9422};
  for (int i = 0; i < 9; ++i) EXPECT_EQ(m.m[i], expected[i]);
  EXPECT_EQ(m(0, 0), 1.7167);
  EXPECT_EQ(m(2, 1), -0.0428);
  const auto e1 = m * std::array<double, 3>{1, 0, 0};
  EXPECT_EQ(e1[0], 1.7167);
  EXPECT_EQ(e1[1], -0.6667);
  EXPECT_EQ(e1[2], 0.0176);
}

TEST(CamToRec2020, IdentityCamera) {
  EXPECT_EQ(camrgb_to_rec2020_matrix(ColorMatrix3::identity()), xyz_to_rec2020_matrix());
}

TEST(CamToRec2020, SelfInverse) {
  const ColorMatrix3 r = camrgb_to_rec2020_matrix(xyz_to_rec2020_matrix());
  const ColorMatrix3 id = ColorMatrix3::identity();
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(r.m[i], id.m[i], 1e-12);
}

TEST(CamToRec2020, MultiplyBackOracle) {
  SplitMix64 g(11);
  for (int trial = 0; trial < 50; ++trial) {
    ColorMatrix3 a = ColorMatrix3::identity();
    for (double& v : a.m) v += g.uniform(-0.3, 0.3);
    const ColorMatrix3 back = camrgb_to_rec2020_matrix(a) * a;
    const ColorMatrix3 ref = xyz_to_rec2020_matrix();
    for (int i = 0; i < 9; ++i) EXPECT_NEAR(back.m[i], ref.m[i], 1e-10);
  }
}

TEST(Inverse, SingularThrows) {
  ColorMatrix3 s{{1, 2, 3, 2, 4, 6, 0, 0, 1}};
  try {
    s.inverse();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
}

TEST(ApplyColorMatrix, IdentityAndScalar) {
  PlanarF img(3, 2, 3);
  for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = 0.1f * static_cast<float>(i);
  EXPECT_EQ(apply_color_matrix(img, ColorMatrix3::identity()), img);
  const PlanarF twice = apply_color_matrix(img, 2.0 * ColorMatrix3::identity());
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_FLOAT_EQ(twice.data()[i], 2 * img.data()[i]);
}

TEST(ApplyColorMatrix, RedPixelGivesFirstColumn) {
  PlanarD px(3, 1, 1);
  px(0, 0, 0) = 1.0;
  const PlanarD out = apply_color_matrix(px, xyz_to_rec2020_matrix());
  EXPECT_DOUBLE_EQ(out(0, 0, 0), 1.7167);
  EXPECT_DOUBLE_EQ(out(1, 0, 0), -0.6667);
  EXPECT_DOUBLE_EQ(out(2, 0, 0), 0.0176);
}

TEST(ApplyColorMatrix, RoundtripPrecision) {
  SplitMix64 g(5);
  ColorMatrix3 a = ColorMatrix3::identity();
  for (double& v : a.m) v += g.uniform(-0.2, 0.2);
  const ColorMatrix3 fwd = camrgb_to_rec2020_matrix(a), inv = fwd.inverse();
  PlanarD d(3, 16, 16);
  for (double& v : d.data()) v = g.uniform();
  const PlanarD back = apply_color_matrix(apply_color_matrix(d, fwd), inv);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(back.data()[i], d.data()[i], 1e-12);
  const PlanarF f = planar_cast<float>(d);
  const PlanarF fb = apply_color_matrix(apply_color_matrix(f, fwd), inv);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(fb.data()[i], f.data()[i], 1e-5);
}

TEST(ApplyColorMatrix, RejectsWrongChannelCount) {
  EXPECT_THROW(apply_color_matrix(PlanarF(4, 2, 2), ColorMatrix3::identity()), Error);
}

}  // namespace
}  // namespace rnip
