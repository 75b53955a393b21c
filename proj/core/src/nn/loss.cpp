#include "rnip/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rnip/metrics.hpp"

namespace rnip::nn {

namespace {

double gamma_fwd(double v) { return v > 0.0 ? std::pow(v, 1.0 / kLossGamma) : v; }
double gamma_deriv(double v) { return v > 0.0 ? std::pow(v, 1.0 / kLossGamma - 1.0) / kLossGamma : 1.0; }

}  // namespace

RdLossTerms rd_loss(const PlanarD& x_hat, const PlanarD& x, const LossMask* mask, double rate_bpp,
                    const RdLossOptions& opts, PlanarD* grad) {
  if (!x_hat.same_shape(x) || x.channels() != 3)
    throw Error(ErrorCode::ShapeMismatch, "loss operands must be 3-channel images of equal size");
  if (mask && (mask->height != x.height() || mask->width != x.width()))
    throw Error(ErrorCode::ShapeMismatch, "loss mask size differs from the image");

  PlanarD a = opts.camrgb_to_rec2020 ? apply_color_matrix(x_hat, *opts.camrgb_to_rec2020) : x_hat;
  const PlanarD pre_gamma = opts.gamma_before_loss ? a : PlanarD{};
  PlanarD b = x;
  if (opts.gamma_before_loss) {
    for (double& v : a.data()) v = gamma_fwd(v);
    for (double& v : b.data()) v = gamma_fwd(v);
  }
  const std::size_t plane = static_cast<std::size_t>(x.height()) * x.width();
  if (mask) {
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < plane; ++i)
        if (!mask->mask[i]) a.data()[c * plane + i] = b.data()[c * plane + i];
  }

  const double ms = ms_ssim_with_grad(b, a, grad);
  RdLossTerms t;
  // MS-SSIM clamps its inputs, which would hide NaN; surface it instead.
  auto finite = [](const PlanarD& p) { return std::all_of(p.data().begin(), p.data().end(), [](double v) { return std::isfinite(v); }); };
  t.distortion = finite(a) && finite(b) ? 1.0 - ms : std::numeric_limits<double>::quiet_NaN();
  t.rate_bpp = rate_bpp;
  t.total = t.distortion + opts.lambda * rate_bpp;
  if (!grad) return t;

  PlanarD& g = *grad;
  for (double& v : g.data()) v = -v;
  if (mask) {
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < plane; ++i)
        if (!mask->mask[i]) g.data()[c * plane + i] = 0.0;
  }
  if (opts.gamma_before_loss)
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] *= gamma_deriv(pre_gamma.data()[i]);
  if (opts.camrgb_to_rec2020) g = apply_color_matrix(g, opts.camrgb_to_rec2020->transposed());
  return t;
}

}  // namespace rnip::nn
