#include "rnip/nn/layers.hpp"

#include <cmath>

#include <Eigen/Core>

#include "rnip/rng.hpp"

namespace rnip::nn {

std::string Shape::str() const {
  return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," + std::to_string(w) + ")";
}

template <typename T>
void init_he_uniform(Parameter<T>& p, int fan_in, double negative_slope, std::uint64_t seed) {
  const double bound = std::sqrt(6.0 / ((1.0 + negative_slope * negative_slope) * fan_in));
  SplitMix64 g(seed);
  for (T& v : p.value.data()) v = static_cast<T>(g.uniform(-bound, bound));
}

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using CMapMat = Eigen::Map<const RowMat<T>>;

template <typename T>
void im2col(const T* x, int c, int h, int w, int k, int stride, int pad, int oh, int ow, T* cols) {
  const std::size_t p = static_cast<std::size_t>(oh) * ow;
  for (int ci = 0; ci < c; ++ci)
    for (int ki = 0; ki < k; ++ki)
      for (int kj = 0; kj < k; ++kj) {
        T* row = cols + ((static_cast<std::size_t>(ci) * k + ki) * k + kj) * p;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride - pad + ki;
          T* dst = row + static_cast<std::size_t>(oy) * ow;
          if (iy < 0 || iy >= h) {
            std::fill(dst, dst + ow, T{});
            continue;
          }
          const T* src = x + (static_cast<std::size_t>(ci) * h + iy) * w;
          if (stride == 1) {
            const int lo = std::min(ow, std::max(0, pad - kj)), hi = std::min(ow, w + pad - kj);
            for (int ox = 0; ox < lo; ++ox) dst[ox] = T{};
            for (int ox = lo; ox < hi; ++ox) dst[ox] = src[ox - pad + kj];
            for (int ox = std::max(lo, hi); ox < ow; ++ox) dst[ox] = T{};
          } else {
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride - pad + kj;
              dst[ox] = (ix >= 0 && ix < w) ? src[ix] : T{};
            }
          }
        }
      }
}

template <typename T>
void col2im(const T* cols, int c, int h, int w, int k, int stride, int pad, int oh, int ow, T* x) {
  const std::size_t p = static_cast<std::size_t>(oh) * ow;
  std::fill(x, x + static_cast<std::size_t>(c) * h * w, T{});
  for (int ci = 0; ci < c; ++ci)
    for (int ki = 0; ki < k; ++ki)
      for (int kj = 0; kj < k; ++kj) {
        const T* row = cols + ((static_cast<std::size_t>(ci) * k + ki) * k + kj) * p;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride - pad + ki;
          if (iy < 0 || iy >= h) continue;
          const T* src = row + static_cast<std::size_t>(oy) * ow;
          T* dst = x + (static_cast<std::size_t>(ci) * h + iy) * w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride - pad + kj;
            if (ix >= 0 && ix < w) dst[ix] += src[ox];
          }
        }
      }
}

}  // namespace

template <typename T>
Conv2d<T>::Conv2d(std::string name, int in_channels, int out_channels, int kernel, int stride, int padding)
    : cin_(in_channels),
      cout_(out_channels),
      k_(kernel),
      stride_(stride),
      pad_(padding),
      weight_(name + ".weight", {out_channels, in_channels, kernel, kernel}),
      bias_(name + ".bias", {1, out_channels, 1, 1}) {}

template <typename T>
Shape Conv2d<T>::output_shape(const Shape& in) const {
  return {in.n, cout_, (in.h + 2 * pad_ - k_) / stride_ + 1, (in.w + 2 * pad_ - k_) / stride_ + 1};
}

template <typename T>
double Conv2d<T>::macs(double in_h, double in_w) const {
  return (in_h / stride_) * (in_w / stride_) * cin_ * cout_ * k_ * k_;
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& x) {
  const Shape& s = x.shape();
  if (s.c != cin_) throw Error(ErrorCode::ShapeMismatch, weight_.name + ": input " + s.str());
  const Shape os = output_shape(s);
  Tensor<T> y(os);
  input_ = x;
  const int kk = cin_ * k_ * k_;
  const std::size_t p = static_cast<std::size_t>(os.h) * os.w;
  const bool direct = k_ == 1 && stride_ == 1 && pad_ == 0;
  if (!direct) cols_.resize(static_cast<std::size_t>(kk) * p);
  CMapMat<T> wm(weight_.value.data().data(), cout_, kk);
  for (int n = 0; n < s.n; ++n) {
    const T* cols = x.item(n);
    if (!direct) {
      im2col(x.item(n), cin_, s.h, s.w, k_, stride_, pad_, os.h, os.w, cols_.data());
      cols = cols_.data();
    }
    MapMat<T> ym(y.item(n), cout_, static_cast<Eigen::Index>(p));
    ym.noalias() = wm * CMapMat<T>(cols, kk, static_cast<Eigen::Index>(p));
    for (int co = 0; co < cout_; ++co) ym.row(co).array() += bias_.value.data()[co];
  }
  forward_macs_ = static_cast<std::uint64_t>(s.n) * p * kk * cout_;
  return y;
}

template <typename T>
Tensor<T> Conv2d<T>::backward(const Tensor<T>& gy, bool need_input_grad) {
  const Shape& s = input_.shape();
  const Shape os = output_shape(s);
  if (gy.shape() != os) throw Error(ErrorCode::ShapeMismatch, weight_.name + ": grad " + gy.shape().str());
  const int kk = cin_ * k_ * k_;
  const auto p = static_cast<Eigen::Index>(os.h) * os.w;
  const bool direct = k_ == 1 && stride_ == 1 && pad_ == 0;
  Tensor<T> gx;
  if (need_input_grad) gx = Tensor<T>(s);
  std::vector<T> dcols(need_input_grad && !direct ? static_cast<std::size_t>(kk) * p : 0);
  MapMat<T> dw(weight_.grad.data().data(), cout_, kk);
  CMapMat<T> wm(weight_.value.data().data(), cout_, kk);
  for (int n = 0; n < s.n; ++n) {
    const T* cols = input_.item(n);
    if (!direct) {
      cols_.resize(static_cast<std::size_t>(kk) * p);
      im2col(input_.item(n), cin_, s.h, s.w, k_, stride_, pad_, os.h, os.w, cols_.data());
      cols = cols_.data();
    }
    CMapMat<T> g(gy.item(n), cout_, p);
    dw.noalias() += g * CMapMat<T>(cols, kk, p).transpose();
    // Plain loop: Eigen reductions start at the first aligned element, which
    // would make the sum depend on where the buffer happens to be allocated.
    for (int co = 0; co < cout_; ++co) {
      const T* row = gy.item(n) + static_cast<std::size_t>(co) * p;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < p; ++i) acc += row[i];
      bias_.grad.data()[co] += static_cast<T>(acc);
    }
    if (!need_input_grad) continue;
    if (direct) {
      MapMat<T>(gx.item(n), kk, p).noalias() = wm.transpose() * g;
    } else {
      MapMat<T>(dcols.data(), kk, p).noalias() = wm.transpose() * g;
      col2im(dcols.data(), cin_, s.h, s.w, k_, stride_, pad_, os.h, os.w, gx.item(n));
    }
  }
  return gx;
}

template <typename T>
Tensor<T> LeakyRelu<T>::forward(const Tensor<T>& x) {
  input_ = x;
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const T v = x.data()[i];
    y.data()[i] = v > T{} ? v : slope_ * v;
  }
  return y;
}

template <typename T>
Tensor<T> LeakyRelu<T>::backward(const Tensor<T>& g) const {
  Tensor<T> gx(g.shape());
  for (std::size_t i = 0; i < g.size(); ++i) gx.data()[i] = input_.data()[i] > T{} ? g.data()[i] : slope_ * g.data()[i];
  return gx;
}

template <typename T>
Tensor<T> MaxPool2<T>::forward(const Tensor<T>& x) {
  const Shape& s = x.shape();
  if (s.h % 2 || s.w % 2) throw Error(ErrorCode::DivisibilityError, "max pool needs even size, got " + s.str());
  in_shape_ = s;
  Tensor<T> y({s.n, s.c, s.h / 2, s.w / 2});
  argmax_.resize(y.size());
  std::size_t o = 0;
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (int i = 0; i < s.h / 2; ++i)
        for (int j = 0; j < s.w / 2; ++j, ++o) {
          const std::size_t base = ((static_cast<std::size_t>(n) * s.c + c) * s.h + 2 * i) * s.w + 2 * j;
          std::size_t best = base;
          for (std::size_t cand : {base + 1, base + s.w, base + s.w + 1})
            if (x.data()[cand] > x.data()[best]) best = cand;
          y.data()[o] = x.data()[best];
          argmax_[o] = static_cast<std::uint32_t>(best - static_cast<std::size_t>(n) * s.item_size());
        }
  return y;
}

template <typename T>
Tensor<T> MaxPool2<T>::backward(const Tensor<T>& g) const {
  Tensor<T> gx(in_shape_);
  const std::size_t per = g.shape().item_size();
  for (std::size_t o = 0; o < g.size(); ++o) {
    const std::size_t n = o / per;
    gx.data()[n * in_shape_.item_size() + argmax_[o]] += g.data()[o];
  }
  return gx;
}

template <typename T>
Tensor<T> upsample_nearest2(const Tensor<T>& x) {
  const Shape& s = x.shape();
  Tensor<T> y({s.n, s.c, 2 * s.h, 2 * s.w});
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (int i = 0; i < 2 * s.h; ++i)
        for (int j = 0; j < 2 * s.w; ++j) y.at(n, c, i, j) = x.at(n, c, i / 2, j / 2);
  return y;
}

template <typename T>
Tensor<T> upsample_nearest2_backward(const Tensor<T>& g) {
  const Shape& s = g.shape();
  Tensor<T> gx({s.n, s.c, s.h / 2, s.w / 2});
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (int i = 0; i < s.h; ++i)
        for (int j = 0; j < s.w; ++j) gx.at(n, c, i / 2, j / 2) += g.at(n, c, i, j);
  return gx;
}

template <typename T>
Tensor<T> pixel_shuffle(const Tensor<T>& x, int r) {
  const Shape& s = x.shape();
  if (r < 1 || s.c % (r * r) != 0)
    throw Error(ErrorCode::BadChannels, "pixel_shuffle: " + std::to_string(s.c) + " channels, r=" + std::to_string(r));
  const int oc = s.c / (r * r);
  Tensor<T> y({s.n, oc, s.h * r, s.w * r});
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < oc; ++c)
      for (int di = 0; di < r; ++di)
        for (int dj = 0; dj < r; ++dj)
          for (int i = 0; i < s.h; ++i)
            for (int j = 0; j < s.w; ++j) y.at(n, c, r * i + di, r * j + dj) = x.at(n, c * r * r + di * r + dj, i, j);
  return y;
}

template <typename T>
Tensor<T> pixel_unshuffle(const Tensor<T>& x, int r) {
  const Shape& s = x.shape();
  if (r < 1 || s.h % r || s.w % r) throw Error(ErrorCode::BadChannels, "pixel_unshuffle: size not divisible");
  const int h = s.h / r, w = s.w / r;
  Tensor<T> y({s.n, s.c * r * r, h, w});
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (int di = 0; di < r; ++di)
        for (int dj = 0; dj < r; ++dj)
          for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) y.at(n, c * r * r + di * r + dj, i, j) = x.at(n, c, r * i + di, r * j + dj);
  return y;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  if (sa.n != sb.n || sa.h != sb.h || sa.w != sb.w)
    throw Error(ErrorCode::ShapeMismatch, "concat " + sa.str() + " with " + sb.str());
  Tensor<T> y({sa.n, sa.c + sb.c, sa.h, sa.w});
  for (int n = 0; n < sa.n; ++n) {
    std::copy_n(a.item(n), sa.item_size(), y.item(n));
    std::copy_n(b.item(n), sb.item_size(), y.item(n) + sa.item_size());
  }
  return y;
}

template <typename T>
void split_channels(const Tensor<T>& g, int ca, Tensor<T>& ga, Tensor<T>& gb) {
  const Shape& s = g.shape();
  ga = Tensor<T>({s.n, ca, s.h, s.w});
  gb = Tensor<T>({s.n, s.c - ca, s.h, s.w});
  for (int n = 0; n < s.n; ++n) {
    std::copy_n(g.item(n), ga.shape().item_size(), ga.item(n));
    std::copy_n(g.item(n) + ga.shape().item_size(), gb.shape().item_size(), gb.item(n));
  }
}

#define RNIP_INSTANTIATE(T)                                                               \
  template void init_he_uniform<T>(Parameter<T>&, int, double, std::uint64_t);            \
  template class Conv2d<T>;                                                               \
  template class LeakyRelu<T>;                                                            \
  template class MaxPool2<T>;                                                             \
  template Tensor<T> upsample_nearest2<T>(const Tensor<T>&);                              \
  template Tensor<T> upsample_nearest2_backward<T>(const Tensor<T>&);                     \
  template Tensor<T> pixel_shuffle<T>(const Tensor<T>&, int);                             \
  template Tensor<T> pixel_unshuffle<T>(const Tensor<T>&, int);                           \
  template Tensor<T> concat_channels<T>(const Tensor<T>&, const Tensor<T>&);              \
  template void split_channels<T>(const Tensor<T>&, int, Tensor<T>&, Tensor<T>&);

RNIP_INSTANTIATE(float)
RNIP_INSTANTIATE(double)

}  // namespace rnip::nn
