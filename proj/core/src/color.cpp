#include "rnip/color.hpp"

#include "rnip/raw.hpp"

namespace rnip {

double ColorMatrix3::determinant() const {
  const auto& a = m;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

bool ColorMatrix3::is_finite() const {
  for (double v : m)
    if (!std::isfinite(v)) return false;
  return true;
}

ColorMatrix3 ColorMatrix3::transposed() const {
  ColorMatrix3 t;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ColorMatrix3 ColorMatrix3::inverse() const {
  const double det = determinant();
  if (!is_finite() || !std::isfinite(det) || std::abs(det) <= 1e-12)
    throw Error(ErrorCode::SingularMatrix, "determinant " + std::to_string(det));
  const auto& a = m;
  ColorMatrix3 inv{{
      a[4] * a[8] - a[5] * a[7], a[2] * a[7] - a[1] * a[8], a[1] * a[5] - a[2] * a[4],
      a[5] * a[6] - a[3] * a[8], a[0] * a[8] - a[2] * a[6], a[2] * a[3] - a[0] * a[5],
      a[3] * a[7] - a[4] * a[6], a[1] * a[6] - a[0] * a[7], a[0] * a[4] - a[1] * a[3],
  }};
  for (double& v : inv.m) v /= det;
  return inv;
}

ColorMatrix3 operator*(const ColorMatrix3& a, const ColorMatrix3& b) {
  ColorMatrix3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
  return out;
}

ColorMatrix3 operator*(double s, const ColorMatrix3& a) {
  ColorMatrix3 out = a;
  for (double& v : out.m) v *= s;
  return out;
}

std::array<double, 3> operator*(const ColorMatrix3& a, const std::array<double, 3>& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
          a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
          a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}

ColorMatrix3 xyz_to_rec2020_matrix() {
  return {{1.7167, -0.3557, -0.2534,  //
           -0.6667, 1.6165, 0.0158,   //
           0.0176, -0.0428, 0.9422}};
}

ColorMatrix3 camrgb_to_rec2020_matrix(const ColorMatrix3& xyz_to_camrgb) {
  return xyz_to_rec2020_matrix() * xyz_to_camrgb.inverse();
}

LinearRgbImage apply_color_matrix(const LinearRgbImage& img, const ColorMatrix3& m) {
  return {apply_color_matrix(img.pixels, m), img.space};
}

}  // namespace rnip
