#include "rnip/raw.hpp"

#include <algorithm>
#include <cmath>

namespace rnip {

namespace {

// Position of the red site inside the 2x2 cell.
std::pair<int, int> red_offset(CfaPattern p) {
  switch (p) {
    case CfaPattern::RGGB: return {0, 0};
    case CfaPattern::GRBG: return {0, 1};
    case CfaPattern::GBRG: return {1, 0};
    case CfaPattern::BGGR: return {1, 1};
  }
  return {0, 0};
}

}  // namespace

std::string_view to_string(CfaPattern p) {
  switch (p) {
    case CfaPattern::RGGB: return "RGGB";
    case CfaPattern::GRBG: return "GRBG";
    case CfaPattern::GBRG: return "GBRG";
    case CfaPattern::BGGR: return "BGGR";
  }
  return "RGGB";
}

CfaPattern parse_cfa(std::string_view s) {
  if (s == "RGGB") return CfaPattern::RGGB;
  if (s == "GRBG") return CfaPattern::GRBG;
  if (s == "GBRG") return CfaPattern::GBRG;
  if (s == "BGGR") return CfaPattern::BGGR;
  throw Error(ErrorCode::ParseError, "unknown CFA pattern '" + std::string(s) + "'");
}

CfaColor cfa_color_at(CfaPattern p, int y, int x) {
  const auto [ry, rx] = red_offset(p);
  const bool row_red = (y & 1) == ry;
  const bool col_red = (x & 1) == rx;
  if (row_red && col_red) return CfaColor::Red;
  if (!row_red && !col_red) return CfaColor::Blue;
  return CfaColor::Green;
}

void SensorMeta::validate() const {
  for (double b : black_level) {
    if (!std::isfinite(b) || !std::isfinite(white_level) || white_level <= b)
      throw Error(ErrorCode::MetaInvalid, "white_level " + std::to_string(white_level) +
                                              " must exceed black_level " + std::to_string(b));
  }
  const double det = xyz_to_camrgb.determinant();
  if (!xyz_to_camrgb.is_finite() || !std::isfinite(det) || std::abs(det) <= 1e-12)
    throw Error(ErrorCode::MetaInvalid, "xyz_to_camrgb is not invertible");
}

BayerMosaic normalize_levels(const RawCounts& raw, const SensorMeta& meta) {
  meta.validate();
  if (raw.height < 4 || raw.width < 4)
    throw Error(ErrorCode::TooSmall, "mosaic must be at least 4x4");
  BayerMosaic out{PlanarF(1, raw.height, raw.width), raw.cfa, meta};
  for (int y = 0; y < raw.height; ++y)
    for (int x = 0; x < raw.width; ++x) {
      const double black = meta.black_level[(y & 1) * 2 + (x & 1)];
      const double v = (static_cast<double>(raw.at(y, x)) - black) / (meta.white_level - black);
      out.data(0, y, x) = static_cast<float>(std::max(0.0, v));
    }
  return out;
}

BayerMosaic crop_to_rggb(const BayerMosaic& m) {
  if (m.height() < 4 || m.width() < 4) throw Error(ErrorCode::TooSmall, "mosaic must be at least 4x4");
  const auto [dy, dx] = red_offset(m.cfa);
  const int h = (m.height() - dy) & ~1;
  const int w = (m.width() - dx) & ~1;
  BayerMosaic out{crop(m.data, dy, dx, h, w), CfaPattern::RGGB, m.meta};
  for (int cy = 0; cy < 2; ++cy)
    for (int cx = 0; cx < 2; ++cx)
      out.meta.black_level[cy * 2 + cx] = m.meta.black_level[((cy + dy) & 1) * 2 + ((cx + dx) & 1)];
  return out;
}

PackedBayer pack_planes(const BayerMosaic& m) {
  if (m.cfa != CfaPattern::RGGB) throw Error(ErrorCode::NotRggb, "pack_planes needs an RGGB mosaic");
  if (m.height() % 2 != 0 || m.width() % 2 != 0)
    throw Error(ErrorCode::OddDims, "pack_planes needs even dimensions");
  const int h = m.height() / 2, w = m.width() / 2;
  PackedBayer p{PlanarF(4, h, w), m.height(), m.width()};
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      p.planes(0, i, j) = m.at(2 * i, 2 * j);
      p.planes(1, i, j) = m.at(2 * i, 2 * j + 1);
      p.planes(2, i, j) = m.at(2 * i + 1, 2 * j);
      p.planes(3, i, j) = m.at(2 * i + 1, 2 * j + 1);
    }
  return p;
}

BayerMosaic unpack_planes(const PackedBayer& p) {
  if (p.planes.channels() != 4) throw Error(ErrorCode::BadChannels, "packed Bayer needs 4 planes");
  if (p.height != 2 * p.planes.height() || p.width != 2 * p.planes.width())
    throw Error(ErrorCode::ShapeMismatch, "packed plane size does not match mosaic size");
  BayerMosaic m{PlanarF(1, p.height, p.width), CfaPattern::RGGB, {}};
  for (int i = 0; i < p.planes.height(); ++i)
    for (int j = 0; j < p.planes.width(); ++j) {
      m.data(0, 2 * i, 2 * j) = p.planes(0, i, j);
      m.data(0, 2 * i, 2 * j + 1) = p.planes(1, i, j);
      m.data(0, 2 * i + 1, 2 * j) = p.planes(2, i, j);
      m.data(0, 2 * i + 1, 2 * j + 1) = p.planes(3, i, j);
    }
  return m;
}

}  // namespace rnip
