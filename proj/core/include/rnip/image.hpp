#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace rnip {

// Planar C x H x W image with row-major planes.
template <typename T>
class Planar {
 public:
  using value_type = T;

  Planar() = default;
  Planar(int channels, int height, int width, T fill = T{})
      : channels_(channels),
        height_(height),
        width_(width),
        data_(static_cast<std::size_t>(channels) * height * width, fill) {}

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int c, int y, int x) {
    assert(c >= 0 && c < channels_ && y >= 0 && y < height_ && x >= 0 && x < width_);
    return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }
  const T& operator()(int c, int y, int x) const {
    assert(c >= 0 && c < channels_ && y >= 0 && y < height_ && x >= 0 && x < width_);
    return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }

  std::span<T> plane(int c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const T> plane(int c) const { return {data_.data() + c * plane_size(), plane_size()}; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(const Planar& o) const {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }

  bool operator==(const Planar&) const = default;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

using PlanarF = Planar<float>;
using PlanarD = Planar<double>;

template <typename To, typename From>
Planar<To> planar_cast(const Planar<From>& src) {
  Planar<To> out(src.channels(), src.height(), src.width());
  std::transform(src.data().begin(), src.data().end(), out.data().begin(),
                 [](From v) { return static_cast<To>(v); });
  return out;
}

// Copies the window [y0, y0+h) x [x0, x0+w) of every channel.
template <typename T>
Planar<T> crop(const Planar<T>& src, int y0, int x0, int h, int w) {
  assert(y0 >= 0 && x0 >= 0 && y0 + h <= src.height() && x0 + w <= src.width());
  Planar<T> out(src.channels(), h, w);
  for (int c = 0; c < src.channels(); ++c)
    for (int y = 0; y < h; ++y)
      std::copy_n(&src(c, y0 + y, x0), w, &out(c, y, 0));
  return out;
}

}  // namespace rnip
