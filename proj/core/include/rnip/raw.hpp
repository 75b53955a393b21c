#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rnip/color.hpp"
#include "rnip/error.hpp"
#include "rnip/image.hpp"

namespace rnip {

// The four 2x2 Bayer phases, named by the colors at (0,0) (0,1) (1,0) (1,1).
enum class CfaPattern { RGGB, GRBG, GBRG, BGGR };

std::string_view to_string(CfaPattern p);
CfaPattern parse_cfa(std::string_view s);

enum class CfaColor { Red, Green, Blue };

// Color of the filter at mosaic position (y, x).
CfaColor cfa_color_at(CfaPattern p, int y, int x);

struct SensorMeta {
  // Indexed by position inside the 2x2 cell: (0,0) (0,1) (1,0) (1,1).
  std::array<double, 4> black_level{0.0, 0.0, 0.0, 0.0};
  double white_level = 1.0;
  ColorMatrix3 xyz_to_camrgb = ColorMatrix3::identity();
  std::string camera_id;

  // Throws MetaInvalid when a level pair or the color matrix is unusable.
  void validate() const;
};

// Integer counts straight off the sensor.
struct RawCounts {
  int height = 0;
  int width = 0;
  std::vector<std::uint16_t> data;
  CfaPattern cfa = CfaPattern::RGGB;

  std::uint16_t at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

struct BayerMosaic {
  PlanarF data;  // 1 x H x W
  CfaPattern cfa = CfaPattern::RGGB;
  SensorMeta meta;

  int height() const { return data.height(); }
  int width() const { return data.width(); }
  float at(int y, int x) const { return data(0, y, x); }
};

// Plane order is fixed as R, G1, G2, B.
struct PackedBayer {
  PlanarF planes;  // 4 x H/2 x W/2
  int height = 0;  // source mosaic size
  int width = 0;
};

enum class ColorSpace { CamRGB, Rec2020 };

struct LinearRgbImage {
  PlanarF pixels;  // 3 x H x W
  ColorSpace space = ColorSpace::CamRGB;

  int height() const { return pixels.height(); }
  int width() const { return pixels.width(); }
};

// Display-referred, every value in [0, 1].
struct DevelopedImage {
  PlanarF pixels;
};

// (raw - black) / (white - black), clamped below at zero only.
BayerMosaic normalize_levels(const RawCounts& raw, const SensorMeta& meta);

// Drops at most one leading row/column to reach an RGGB phase, then one
// trailing row/column if needed to make both dimensions even.
BayerMosaic crop_to_rggb(const BayerMosaic& m);

PackedBayer pack_planes(const BayerMosaic& m);
// The result carries an RGGB tag and default metadata.
BayerMosaic unpack_planes(const PackedBayer& p);

// out[c, r*i+di, r*j+dj] = in[c*r*r + di*r + dj, i, j]
template <typename T>
Planar<T> pixel_shuffle(const Planar<T>& in, int r) {
  if (r < 1 || in.channels() % (r * r) != 0)
    throw Error(ErrorCode::BadChannels, "channel count " + std::to_string(in.channels()) +
                                            " not divisible by r^2 for r=" + std::to_string(r));
  const int oc = in.channels() / (r * r);
  Planar<T> out(oc, in.height() * r, in.width() * r);
  for (int c = 0; c < oc; ++c)
    for (int di = 0; di < r; ++di)
      for (int dj = 0; dj < r; ++dj) {
        const int src_c = c * r * r + di * r + dj;
        for (int i = 0; i < in.height(); ++i)
          for (int j = 0; j < in.width(); ++j) out(c, r * i + di, r * j + dj) = in(src_c, i, j);
      }
  return out;
}

template <typename T>
Planar<T> pixel_unshuffle(const Planar<T>& in, int r) {
  if (r < 1 || in.height() % r != 0 || in.width() % r != 0)
    throw Error(ErrorCode::BadChannels, "spatial size not divisible by r=" + std::to_string(r));
  const int h = in.height() / r;
  const int w = in.width() / r;
  Planar<T> out(in.channels() * r * r, h, w);
  for (int c = 0; c < in.channels(); ++c)
    for (int di = 0; di < r; ++di)
      for (int dj = 0; dj < r; ++dj) {
        const int dst_c = c * r * r + di * r + dj;
        for (int i = 0; i < h; ++i)
          for (int j = 0; j < w; ++j) out(dst_c, i, j) = in(c, r * i + di, r * j + dj);
      }
  return out;
}

}  // namespace rnip
