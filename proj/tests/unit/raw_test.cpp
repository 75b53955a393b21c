#include <gtest/gtest.h>

#include "rnip/raw.hpp"
#include "rnip/rng.hpp"

namespace rnip {
namespace {

RawCounts counts(int h, int w, std::uint16_t fill, CfaPattern cfa = CfaPattern::RGGB) {
  return {h, w, std::vector<std::uint16_t>(static_cast<std::size_t>(h) * w, fill), cfa};
}

SensorMeta meta(double black, double white) {
  SensorMeta m;
  m.black_level = {black, black, black, black};
  m.white_level = white;
  return m;
}

TEST(NormalizeLevels, BlackMapsToZeroAndWhiteToOne) {
  EXPECT_EQ(normalize_levels(counts(4, 4, 512), meta(512, 16383)).at(1, 2), 0.0f);
  EXPECT_EQ(normalize_levels(counts(4, 4, 16383), meta(512, 16383)).at(3, 3), 1.0f);
}

TEST(NormalizeLevels, MidScaleValue) {
  const BayerMosaic m = normalize_levels(counts(4, 4, 8447), meta(512, 16383));
  EXPECT_NEAR(m.at(0, 0), (8447.0 - 512.0) / (16383.0 - 512.0), 1e-7);
  EXPECT_NEAR(m.at(0, 0), 0.499968, 1e-6);
}

TEST(NormalizeLevels, BelowBlackClampsToZeroAboveWhiteIsKept) {
  RawCounts raw = counts(4, 4, 100);
  raw.data[5] = 20000;
  const BayerMosaic m = normalize_levels(raw, meta(512, 16383));
  EXPECT_EQ(m.at(0, 0), 0.0f);
  EXPECT_GT(m.at(1, 1), 1.0f);
}

TEST(NormalizeLevels, PerSiteBlackLevels) {
  SensorMeta sm = meta(0, 1000);
  sm.black_level = {10, 20, 30, 40};
  const BayerMosaic m = normalize_levels(counts(4, 4, 100), sm);
  EXPECT_NEAR(m.at(0, 0), 90.0 / 990.0, 1e-7);
  EXPECT_NEAR(m.at(0, 1), 80.0 / 980.0, 1e-7);
  EXPECT_NEAR(m.at(1, 0), 70.0 / 970.0, 1e-7);
  EXPECT_NEAR(m.at(3, 3), 60.0 / 960.0, 1e-7);
}

TEST(NormalizeLevels, RejectsInvalidMeta) {
  EXPECT_THROW(normalize_levels(counts(4, 4, 0), meta(600, 500)), Error);
  SensorMeta sm = meta(0, 100);
  sm.xyz_to_camrgb = ColorMatrix3{};
  try {
    normalize_levels(counts(4, 4, 0), sm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MetaInvalid);
  }
}

// Oracle: the phase reached after dropping (dy, dx) leading rows/columns.
CfaPattern shifted_phase(CfaPattern p, int dy, int dx) {
  for (CfaPattern q : {CfaPattern::RGGB, CfaPattern::GRBG, CfaPattern::GBRG, CfaPattern::BGGR}) {
    bool same = true;
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) same &= cfa_color_at(p, y + dy, x + dx) == cfa_color_at(q, y, x);
    if (same) return q;
  }
  ADD_FAILURE();
  return p;
}

TEST(CropToRggb, EnumeratedPhaseShifts) {
  const std::pair<CfaPattern, std::pair<int, int>> expected[] = {{CfaPattern::RGGB, {0, 0}},
                                                                 {CfaPattern::GRBG, {0, 1}},
                                                                 {CfaPattern::GBRG, {1, 0}},
                                                                 {CfaPattern::BGGR, {1, 1}}};
  for (const auto& [cfa, drop] : expected) {
    EXPECT_EQ(shifted_phase(cfa, drop.first, drop.second), CfaPattern::RGGB);
    BayerMosaic m{PlanarF(1, 8, 10), cfa, {}};
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 10; ++x) m.data(0, y, x) = static_cast<float>(y * 100 + x);
    const BayerMosaic c = crop_to_rggb(m);
    EXPECT_EQ(c.cfa, CfaPattern::RGGB);
    EXPECT_EQ(c.at(0, 0), drop.first * 100 + drop.second) << to_string(cfa);
    EXPECT_EQ(c.height() % 2, 0);
    EXPECT_EQ(c.width() % 2, 0);
    EXPECT_EQ(c.height(), drop.first ? 6 : 8);
    EXPECT_EQ(c.width(), drop.second ? 8 : 10);
  }
}

TEST(CropToRggb, RggbUnchangedAndIdempotent) {
  BayerMosaic m{PlanarF(1, 6, 6, 0.5f), CfaPattern::RGGB, {}};
  m.data(0, 2, 3) = 0.25f;
  EXPECT_EQ(crop_to_rggb(m).data, m.data);
  BayerMosaic g{PlanarF(1, 7, 9, 0.5f), CfaPattern::BGGR, {}};
  const BayerMosaic once = crop_to_rggb(g);
  EXPECT_EQ(crop_to_rggb(once).data, once.data);
}

TEST(CropToRggb, BlackLevelsFollowTheSites) {
  BayerMosaic m{PlanarF(1, 6, 6), CfaPattern::GRBG, {}};
  m.meta.black_level = {1, 2, 3, 4};  // G R / B G
  const BayerMosaic c = crop_to_rggb(m);
  EXPECT_EQ(c.meta.black_level[0], 2);  // R
  EXPECT_EQ(c.meta.black_level[3], 3);  // B
}

TEST(PackPlanes, MinimalMosaic) {
  BayerMosaic m{PlanarF(1, 2, 2), CfaPattern::RGGB, {}};
  m.data(0, 0, 0) = 1;
  m.data(0, 0, 1) = 2;
  m.data(0, 1, 0) = 3;
  m.data(0, 1, 1) = 4;
  const PackedBayer p = pack_planes(m);
  for (int c = 0; c < 4; ++c) EXPECT_EQ(p.planes(c, 0, 0), c + 1);
}

TEST(PackPlanes, RampRedPlane) {
  BayerMosaic m{PlanarF(1, 4, 4), CfaPattern::RGGB, {}};
  for (int i = 0; i < 16; ++i) m.data.data()[i] = static_cast<float>(i);
  const PackedBayer p = pack_planes(m);
  EXPECT_EQ(p.planes(0, 0, 0), 0);
  EXPECT_EQ(p.planes(0, 0, 1), 2);
  EXPECT_EQ(p.planes(0, 1, 0), 8);
  EXPECT_EQ(p.planes(0, 1, 1), 10);
}

TEST(PackPlanes, UnpackInvertsBitExactly) {
  SplitMix64 g(7);
  BayerMosaic m{PlanarF(1, 8, 8), CfaPattern::RGGB, {}};
  for (float& v : m.data.data()) v = static_cast<float>(g.uniform());
  EXPECT_EQ(unpack_planes(pack_planes(m)).data, m.data);
}

TEST(PackPlanes, Preconditions) {
  try {
    pack_planes({PlanarF(1, 4, 4), CfaPattern::GRBG, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotRggb);
  }
  try {
    pack_planes({PlanarF(1, 4, 5), CfaPattern::RGGB, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OddDims);
  }
}

TEST(PixelShuffle, DefinitionAtMinimalSize) {
  PlanarF t(4, 1, 1);
  for (int c = 0; c < 4; ++c) t(c, 0, 0) = static_cast<float>(c + 1);
  const PlanarF s = pixel_shuffle(t, 2);
  ASSERT_EQ(s.channels(), 1);
  EXPECT_EQ(s(0, 0, 0), 1);
  EXPECT_EQ(s(0, 0, 1), 2);
  EXPECT_EQ(s(0, 1, 0), 3);
  EXPECT_EQ(s(0, 1, 1), 4);
}

TEST(PixelShuffle, IdentityAndInverse) {
  SplitMix64 g(3);
  PlanarF x(8, 4, 4);
  for (float& v : x.data()) v = static_cast<float>(g.uniform());
  EXPECT_EQ(pixel_shuffle(x, 1), x);
  EXPECT_EQ(pixel_unshuffle(pixel_shuffle(x, 2), 2), x);
  EXPECT_THROW(pixel_shuffle(PlanarF(3, 2, 2), 2), Error);
}

}  // namespace
}  // namespace rnip
