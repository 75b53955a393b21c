#include "rnip/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "rnip/error.hpp"

namespace rnip {

namespace {

using Buf = std::vector<double>;

std::array<double, msssim::kWindow> gaussian_window() {
  std::array<double, msssim::kWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < msssim::kWindow; ++i) {
    const double d = i - msssim::kWindow / 2;
    sum += g[i] = std::exp(-d * d / (2.0 * msssim::kSigma * msssim::kSigma));
  }
  for (double& v : g) v /= sum;
  return g;
}

const std::array<double, msssim::kWindow>& window() {
  static const auto w = gaussian_window();
  return w;
}

// Separable valid correlation: h x w -> (h-10) x (w-10).
Buf filter_valid(const Buf& in, int h, int w) {
  const auto& g = window();
  const int k = msssim::kWindow, ow = w - k + 1, oh = h - k + 1;
  Buf tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      const double* src = &in[static_cast<std::size_t>(y) * w + x];
      for (int i = 0; i < k; ++i) acc += g[i] * src[i];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  Buf out(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int i = 0; i < k; ++i) {
      const double gi = g[i];
      const double* src = &tmp[static_cast<std::size_t>(y + i) * ow];
      double* dst = &out[static_cast<std::size_t>(y) * ow];
      for (int x = 0; x < ow; ++x) dst[x] += gi * src[x];
    }
  return out;
}

// Adjoint of filter_valid: (h-10) x (w-10) -> h x w.
Buf filter_valid_adjoint(const Buf& in, int h, int w) {
  const auto& g = window();
  const int k = msssim::kWindow, ow = w - k + 1, oh = h - k + 1;
  Buf tmp(static_cast<std::size_t>(h) * ow, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int i = 0; i < k; ++i) {
      const double gi = g[i];
      const double* src = &in[static_cast<std::size_t>(y) * ow];
      double* dst = &tmp[static_cast<std::size_t>(y + i) * ow];
      for (int x = 0; x < ow; ++x) dst[x] += gi * src[x];
    }
  Buf out(static_cast<std::size_t>(h) * w, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      const double v = tmp[static_cast<std::size_t>(y) * ow + x];
      double* dst = &out[static_cast<std::size_t>(y) * w + x];
      for (int i = 0; i < k; ++i) dst[i] += g[i] * v;
    }
  return out;
}

Buf pool2(const Buf& in, int h, int w) {
  const int oh = h / 2, ow = w / 2;
  Buf out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      const double* r0 = &in[static_cast<std::size_t>(2 * y) * w + 2 * x];
      const double* r1 = r0 + w;
      out[static_cast<std::size_t>(y) * ow + x] = 0.25 * ((r0[0] + r0[1]) + (r1[0] + r1[1]));
    }
  return out;
}

void pool2_adjoint_add(const Buf& g, int h, int w, Buf& out) {
  const int oh = h / 2, ow = w / 2;
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      const double v = 0.25 * g[static_cast<std::size_t>(y) * ow + x];
      double* r0 = &out[static_cast<std::size_t>(2 * y) * w + 2 * x];
      double* r1 = r0 + w;
      r0[0] += v, r0[1] += v, r1[0] += v, r1[1] += v;
    }
}

struct ScaleStats {
  int h = 0, w = 0;
  Buf x, y;
  Buf mux, muy, sxx, syy, sxy;
  double cs = 0.0;
  double ssim = 0.0;
};

ScaleStats scale_stats(Buf x, Buf y, int h, int w) {
  constexpr double c1 = msssim::kK1 * msssim::kK1;
  constexpr double c2 = msssim::kK2 * msssim::kK2;
  ScaleStats s;
  s.h = h, s.w = w;
  const std::size_t n = x.size();
  Buf xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) xx[i] = x[i] * x[i], yy[i] = y[i] * y[i], xy[i] = x[i] * y[i];
  s.mux = filter_valid(x, h, w);
  s.muy = filter_valid(y, h, w);
  s.sxx = filter_valid(xx, h, w);
  s.syy = filter_valid(yy, h, w);
  s.sxy = filter_valid(xy, h, w);
  double cs_sum = 0.0, ssim_sum = 0.0;
  for (std::size_t i = 0; i < s.mux.size(); ++i) {
    const double mx = s.mux[i], my = s.muy[i];
    s.sxx[i] -= mx * mx;
    s.syy[i] -= my * my;
    s.sxy[i] -= mx * my;
    const double cs = (2.0 * s.sxy[i] + c2) / (s.sxx[i] + s.syy[i] + c2);
    const double l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
    cs_sum += cs;
    ssim_sum += l * cs;
  }
  s.cs = cs_sum / static_cast<double>(s.mux.size());
  s.ssim = ssim_sum / static_cast<double>(s.mux.size());
  s.x = std::move(x);
  s.y = std::move(y);
  return s;
}

// Gradient of mean(cs) (with_luminance = false) or mean(l * cs) with respect
// to y at this scale, scaled by `coef`.
Buf scale_grad(const ScaleStats& s, double coef, bool with_luminance) {
  constexpr double c1 = msssim::kK1 * msssim::kK1;
  constexpr double c2 = msssim::kK2 * msssim::kK2;
  const std::size_t m = s.mux.size();
  const double g = coef / static_cast<double>(m);
  Buf a(m), b(m), mu(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double mx = s.mux[i], my = s.muy[i];
    const double num = 2.0 * s.sxy[i] + c2, den = s.sxx[i] + s.syy[i] + c2;
    double lum = 1.0, dl_dmuy = 0.0;
    if (with_luminance) {
      const double p = 2.0 * mx * my + c1, q = mx * mx + my * my + c1;
      lum = p / q;
      dl_dmuy = 2.0 * mx / q - p * 2.0 * my / (q * q);
    }
    const double cs = num / den;
    const double d_sxy = g * lum * 2.0 / den;
    const double d_syy = -g * lum * num / (den * den);
    a[i] = d_sxy;
    b[i] = d_syy;
    mu[i] = -d_sxy * mx - 2.0 * d_syy * my + g * cs * dl_dmuy;
  }
  const Buf adj_a = filter_valid_adjoint(a, s.h, s.w);
  const Buf adj_b = filter_valid_adjoint(b, s.h, s.w);
  const Buf adj_mu = filter_valid_adjoint(mu, s.h, s.w);
  Buf out(s.x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.x[i] * adj_a[i] + 2.0 * s.y[i] * adj_b[i] + adj_mu[i];
  return out;
}

// Single-channel MS-SSIM; fills grad (size h*w) when non-null.
double ms_ssim_channel(std::span<const double> x0, std::span<const double> y0, int h, int w, double* grad) {
  std::array<ScaleStats, msssim::kScales> scales;
  Buf x(x0.begin(), x0.end()), y(y0.begin(), y0.end());
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  for (double& v : y) v = std::clamp(v, 0.0, 1.0);
  int sh = h, sw = w;
  for (int j = 0; j < msssim::kScales; ++j) {
    Buf nx, ny;
    if (j + 1 < msssim::kScales) nx = pool2(x, sh, sw), ny = pool2(y, sh, sw);
    scales[j] = scale_stats(std::move(x), std::move(y), sh, sw);
    x = std::move(nx), y = std::move(ny);
    sh /= 2, sw /= 2;
  }
  std::array<double, msssim::kScales> terms{};
  for (int j = 0; j < msssim::kScales; ++j)
    terms[j] = std::max(0.0, j + 1 < msssim::kScales ? scales[j].cs : scales[j].ssim);
  double value = 1.0;
  for (int j = 0; j < msssim::kScales; ++j) value *= std::pow(terms[j], msssim::kWeights[j]);

  if (grad == nullptr) return value;
  std::fill(grad, grad + static_cast<std::ptrdiff_t>(h) * w, 0.0);
  if (value <= 0.0) return value;
  // Walk from the coarsest scale back up, pulling the accumulated gradient
  // through each pooling step.
  Buf acc;
  for (int j = msssim::kScales - 1; j >= 0; --j) {
    const auto& s = scales[j];
    const double coef = value * msssim::kWeights[j] / terms[j];
    Buf gj = scale_grad(s, coef, j + 1 == msssim::kScales);
    if (!acc.empty()) pool2_adjoint_add(acc, s.h, s.w, gj);
    acc = std::move(gj);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) grad[i] = (y0[i] >= 0.0 && y0[i] <= 1.0) ? acc[i] : 0.0;
  return value;
}

void check_msssim_shapes(const PlanarD& a, const PlanarD& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "ms_ssim needs equal shapes");
  if (a.height() < msssim::kMinSide || a.width() < msssim::kMinSide)
    throw Error(ErrorCode::TooSmall, "ms_ssim needs at least " + std::to_string(msssim::kMinSide) + " pixels per side");
}

}  // namespace

double ms_ssim_with_grad(const PlanarD& reference, const PlanarD& test, PlanarD* grad) {
  check_msssim_shapes(reference, test);
  if (grad) *grad = PlanarD(test.channels(), test.height(), test.width());
  double sum = 0.0;
  for (int c = 0; c < test.channels(); ++c)
    sum += ms_ssim_channel(reference.plane(c), test.plane(c), test.height(), test.width(),
                           grad ? grad->plane(c).data() : nullptr);
  const double inv = 1.0 / test.channels();
  if (grad)
    for (double& v : grad->data()) v *= inv;
  return sum * inv;
}

double ms_ssim(const PlanarD& a, const PlanarD& b) { return ms_ssim_with_grad(a, b, nullptr); }

double ms_ssim(const PlanarF& a, const PlanarF& b) {
  return ms_ssim(planar_cast<double>(a), planar_cast<double>(b));
}

double l1(const PlanarF& a, const PlanarF& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "l1 needs equal shapes");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(static_cast<double>(a.data()[i]) - b.data()[i]);
  return s / static_cast<double>(a.size());
}

double psnr(const PlanarF& a, const PlanarF& b, double peak) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "psnr needs equal shapes");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a.data()[i]) - b.data()[i];
    s += d * d;
  }
  const double mse = s / static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double analytic_bpp(std::span<const double> likelihoods, double image_pixels) {
  if (!(image_pixels > 0.0)) throw Error(ErrorCode::BadProbability, "image_pixels must be positive");
  double bits = 0.0;
  for (double p : likelihoods) {
    if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::BadProbability, "probability " + std::to_string(p));
    bits -= std::log2(p);
  }
  return bits / image_pixels;
}

void write_rd_csv(std::ostream& out, const std::vector<RdPoint>& points) {
  out << "label,lambda,bpp,msssim\n";
  const auto old = out.precision(10);
  for (const auto& p : points) out << p.label << ',' << p.lambda << ',' << p.bpp << ',' << p.msssim << '\n';
  out.precision(old);
}

}  // namespace rnip
