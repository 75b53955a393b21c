#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "rnip/image.hpp"

namespace rnip::testing {

// Closed-form 3 x 256 x 256 pair k, mirrored by tests/oracles/msssim_reference.py.
inline std::pair<PlanarD, PlanarD> msssim_fixture(int k) {
  constexpr int n = 256;
  const double pi = std::numbers::pi;
  PlanarD a(3, n, n), b(3, n, n);
  const int fa = 1 + k, fb = 3 + 2 * k, fy = k % 3 + 1;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double va = 0.5 + 0.25 * std::sin(2 * pi * (fa * x + fy * y) / n + 0.7 * c) +
                          0.15 * std::cos(2 * pi * x * y / (n * (40.0 + 5 * k)));
        const double vb = va * (0.8 + 0.02 * k) + 0.1 * std::sin(2 * pi * fb * (x - y) / n + c) +
                          0.05 * (k - 4.5) / 4.5;
        a(c, y, x) = std::clamp(va, 0.0, 1.0);
        b(c, y, x) = std::clamp(vb, 0.0, 1.0);
      }
  return {a, b};
}

// 16-pixel checkerboard (0.2 / 0.8) and its 3x3 box blur with clamped borders.
inline std::pair<PlanarD, PlanarD> checkerboard_fixture() {
  constexpr int n = 256;
  PlanarD a(3, n, n), b(3, n, n);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) a(c, y, x) = ((y / 16) + (x / 16)) % 2 == 0 ? 0.8 : 0.2;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) acc += a(c, std::clamp(y + dy, 0, n - 1), std::clamp(x + dx, 0, n - 1));
        b(c, y, x) = acc / 9.0;
      }
  return {a, b};
}

// Reference values from tests/oracles/msssim_reference.py (pytorch_msssim, float64).
inline constexpr double kMsssimReference[10] = {0.823031998298, 0.740283030121, 0.767124353133, 0.774313611807,
                                                0.812404342786, 0.851416929043, 0.860717583032, 0.887422028677,
                                                0.908944750499, 0.917890002104};
inline constexpr double kCheckerboardReference = 0.963381190294;

}  // namespace rnip::testing
