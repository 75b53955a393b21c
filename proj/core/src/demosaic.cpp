#include "rnip/demosaic.hpp"

#include <cmath>

namespace rnip {

namespace {

void check_input(const BayerMosaic& m) {
  if (m.cfa != CfaPattern::RGGB) throw Error(ErrorCode::NotRggb, "demosaic needs an RGGB mosaic");
  if (m.height() % 2 != 0 || m.width() % 2 != 0) throw Error(ErrorCode::OddDims, "demosaic needs even dimensions");
  if (m.height() < 4 || m.width() < 4) throw Error(ErrorCode::TooSmall, "demosaic needs at least 4x4");
}

inline int mirror(int i, int n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * (n - 1) - i;
  return i;
}

// Mosaic accessor with phase-preserving mirrored borders.
struct Sampler {
  const PlanarF& p;
  int h, w;
  explicit Sampler(const PlanarF& plane) : p(plane), h(plane.height()), w(plane.width()) {}
  float operator()(int y, int x) const { return p(0, mirror(y, h), mirror(x, w)); }
};

struct PlaneSampler {
  const PlanarF& p;
  int c;
  float operator()(int y, int x) const { return p(c, mirror(y, p.height()), mirror(x, p.width())); }
};

float avg4(float a, float b, float c, float d) { return 0.25f * ((a + b) + (c + d)); }

}  // namespace

LinearRgbImage demosaic_bilinear(const BayerMosaic& m) {
  check_input(m);
  const Sampler s(m.data);
  const int h = m.height(), w = m.width();
  LinearRgbImage out{PlanarF(3, h, w), ColorSpace::CamRGB};
  auto& o = out.pixels;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const float c = s(y, x);
      const float orth = avg4(s(y - 1, x), s(y + 1, x), s(y, x - 1), s(y, x + 1));
      const float diag = avg4(s(y - 1, x - 1), s(y - 1, x + 1), s(y + 1, x - 1), s(y + 1, x + 1));
      const float horiz = 0.5f * (s(y, x - 1) + s(y, x + 1));
      const float vert = 0.5f * (s(y - 1, x) + s(y + 1, x));
      const bool even_row = (y & 1) == 0, even_col = (x & 1) == 0;
      if (even_row && even_col) {  // R
        o(0, y, x) = c, o(1, y, x) = orth, o(2, y, x) = diag;
      } else if (even_row) {  // G in a red row
        o(0, y, x) = horiz, o(1, y, x) = c, o(2, y, x) = vert;
      } else if (even_col) {  // G in a blue row
        o(0, y, x) = vert, o(1, y, x) = c, o(2, y, x) = horiz;
      } else {  // B
        o(0, y, x) = diag, o(1, y, x) = orth, o(2, y, x) = c;
      }
    }
  return out;
}

LinearRgbImage demosaic_edge_aware(const BayerMosaic& m) {
  check_input(m);
  const Sampler s(m.data);
  const int h = m.height(), w = m.width();
  LinearRgbImage out{PlanarF(3, h, w), ColorSpace::CamRGB};
  auto& o = out.pixels;

  // Green.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (((y + x) & 1) == 1) {
        o(1, y, x) = s(y, x);
        continue;
      }
      const float gl = s(y, x - 1), gr = s(y, x + 1), gu = s(y - 1, x), gd = s(y + 1, x);
      const float dh = std::abs(gl - gr), dv = std::abs(gu - gd);
      if (dh < dv)
        o(1, y, x) = 0.5f * (gl + gr);
      else if (dv < dh)
        o(1, y, x) = 0.5f * (gu + gd);
      else
        o(1, y, x) = avg4(gl, gr, gu, gd);
    }

  // Color differences at the native sites; zero elsewhere (never read there).
  PlanarF diff(2, h, w);
  for (int y = 0; y < h; y += 2)
    for (int x = 0; x < w; x += 2) {
      diff(0, y, x) = s(y, x) - o(1, y, x);
      diff(1, y + 1, x + 1) = s(y + 1, x + 1) - o(1, y + 1, x + 1);
    }
  const PlaneSampler dr{diff, 0}, db{diff, 1};

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const float g = o(1, y, x);
      const bool even_row = (y & 1) == 0, even_col = (x & 1) == 0;
      if (even_row && even_col) {
        o(0, y, x) = s(y, x);
        o(2, y, x) = g + avg4(db(y - 1, x - 1), db(y - 1, x + 1), db(y + 1, x - 1), db(y + 1, x + 1));
      } else if (!even_row && !even_col) {
        o(0, y, x) = g + avg4(dr(y - 1, x - 1), dr(y - 1, x + 1), dr(y + 1, x - 1), dr(y + 1, x + 1));
        o(2, y, x) = s(y, x);
      } else if (even_row) {
        o(0, y, x) = g + 0.5f * (dr(y, x - 1) + dr(y, x + 1));
        o(2, y, x) = g + 0.5f * (db(y - 1, x) + db(y + 1, x));
      } else {
        o(0, y, x) = g + 0.5f * (dr(y - 1, x) + dr(y + 1, x));
        o(2, y, x) = g + 0.5f * (db(y, x - 1) + db(y, x + 1));
      }
    }
  return out;
}

BayerMosaic mosaic_rggb(const PlanarF& rgb) {
  if (rgb.channels() != 3) throw Error(ErrorCode::BadChannels, "mosaic_rggb needs 3 channels");
  BayerMosaic m{PlanarF(1, rgb.height(), rgb.width()), CfaPattern::RGGB, {}};
  for (int y = 0; y < rgb.height(); ++y)
    for (int x = 0; x < rgb.width(); ++x) {
      const int c = ((y & 1) == 0 && (x & 1) == 0) ? 0 : ((y & 1) == 1 && (x & 1) == 1) ? 2 : 1;
      m.data(0, y, x) = rgb(c, y, x);
    }
  return m;
}

}  // namespace rnip
