#pragma once

#include <array>
#include <cmath>

#include "rnip/error.hpp"
#include "rnip/image.hpp"

namespace rnip {

struct LinearRgbImage;

// Row-major 3x3 matrix. Pixels are column vectors: v_out = M * v_in.
struct ColorMatrix3 {
  std::array<double, 9> m{};

  static ColorMatrix3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

  double& operator()(int r, int c) { return m[r * 3 + c]; }
  double operator()(int r, int c) const { return m[r * 3 + c]; }

  double determinant() const;
  bool is_finite() const;
  ColorMatrix3 transposed() const;
  // Throws SingularMatrix when |det| <= 1e-12.
  ColorMatrix3 inverse() const;

  bool operator==(const ColorMatrix3&) const = default;
};

ColorMatrix3 operator*(const ColorMatrix3& a, const ColorMatrix3& b);
ColorMatrix3 operator*(double s, const ColorMatrix3& a);
std::array<double, 3> operator*(const ColorMatrix3& a, const std::array<double, 3>& v);

// XYZ -> Rec.2020 under D65.
ColorMatrix3 xyz_to_rec2020_matrix();

// M_xyz->rec2020 * inverse(xyz_to_camrgb): maps camera RGB to linear Rec.2020.
ColorMatrix3 camrgb_to_rec2020_matrix(const ColorMatrix3& xyz_to_camrgb);

template <typename T>
Planar<T> apply_color_matrix(const Planar<T>& img, const ColorMatrix3& m) {
  if (img.channels() != 3) throw Error(ErrorCode::BadChannels, "color matrix needs 3 channels");
  Planar<T> out(3, img.height(), img.width());
  const auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  auto o0 = out.plane(0), o1 = out.plane(1), o2 = out.plane(2);
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    const double v0 = r[i], v1 = g[i], v2 = b[i];
    o0[i] = static_cast<T>(m.m[0] * v0 + m.m[1] * v1 + m.m[2] * v2);
    o1[i] = static_cast<T>(m.m[3] * v0 + m.m[4] * v1 + m.m[5] * v2);
    o2[i] = static_cast<T>(m.m[6] * v0 + m.m[7] * v1 + m.m[8] * v2);
  }
  return out;
}

// The caller decides the resulting color space tag.
LinearRgbImage apply_color_matrix(const LinearRgbImage& img, const ColorMatrix3& m);

}  // namespace rnip
