#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rnip/error.hpp"
#include "rnip/image.hpp"

namespace rnip::nn {

struct Shape {
  int n = 0, c = 0, h = 0, w = 0;

  std::size_t numel() const { return static_cast<std::size_t>(n) * c * h * w; }
  std::size_t item_size() const { return static_cast<std::size_t>(c) * h * w; }
  bool operator==(const Shape&) const = default;
  std::string str() const;
};

// Dense NCHW tensor.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{}) : shape_(shape), data_(shape.numel(), fill) {}

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  T& at(int n, int c, int y, int x) {
    assert(n < shape_.n && c < shape_.c && y < shape_.h && x < shape_.w);
    return data_[((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x];
  }
  T at(int n, int c, int y, int x) const {
    assert(n < shape_.n && c < shape_.c && y < shape_.h && x < shape_.w);
    return data_[((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x];
  }

  T* item(int n) { return data_.data() + static_cast<std::size_t>(n) * shape_.item_size(); }
  const T* item(int n) const { return data_.data() + static_cast<std::size_t>(n) * shape_.item_size(); }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  Shape shape_;
  std::vector<T> data_;
};

template <typename To, typename From>
Tensor<To> tensor_cast(const Tensor<From>& t) {
  Tensor<To> out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) out.data()[i] = static_cast<To>(t.data()[i]);
  return out;
}

// Batch-of-one tensor from a planar image and back.
template <typename T, typename S>
Tensor<T> from_planar(const Planar<S>& p) {
  Tensor<T> t({1, p.channels(), p.height(), p.width()});
  for (std::size_t i = 0; i < p.size(); ++i) t.data()[i] = static_cast<T>(p.data()[i]);
  return t;
}

template <typename S, typename T>
Planar<S> to_planar(const Tensor<T>& t, int n = 0) {
  const Shape& s = t.shape();
  Planar<S> p(s.c, s.h, s.w);
  const T* src = t.item(n);
  for (std::size_t i = 0; i < p.size(); ++i) p.data()[i] = static_cast<S>(src[i]);
  return p;
}

}  // namespace rnip::nn
