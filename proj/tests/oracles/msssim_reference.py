"""Reference MS-SSIM values for the fixed test pairs.

Uses the pytorch_msssim package (Gaussian window 11 / sigma 1.5, valid
filtering, 2x2 average pooling) in float64. The pairs are closed-form so the
C++ tests rebuild them exactly; see tests/common/fixtures.hpp.

    pip install pytorch_msssim
    python3 tests/oracles/msssim_reference.py
"""

import math

import torch
from pytorch_msssim import ms_ssim

SIZE = 256


def pair(k):
    a = torch.zeros(1, 3, SIZE, SIZE, dtype=torch.float64)
    b = torch.zeros_like(a)
    fa, fb, fy = 1 + k, 3 + 2 * k, k % 3 + 1
    for c in range(3):
        for y in range(SIZE):
            for x in range(SIZE):
                va = (0.5 + 0.25 * math.sin(2 * math.pi * (fa * x + fy * y) / SIZE + 0.7 * c)
                      + 0.15 * math.cos(2 * math.pi * x * y / (SIZE * (40 + 5 * k))))
                vb = (va * (0.8 + 0.02 * k) + 0.1 * math.sin(2 * math.pi * fb * (x - y) / SIZE + c)
                      + 0.05 * (k - 4.5) / 4.5)
                a[0, c, y, x] = min(max(va, 0.0), 1.0)
                b[0, c, y, x] = min(max(vb, 0.0), 1.0)
    return a, b


def checkerboard_pair():
    """16-pixel checkerboard (0.2 / 0.8) against its 3x3 box blur with clamped borders."""
    a = torch.zeros(1, 3, SIZE, SIZE, dtype=torch.float64)
    for y in range(SIZE):
        for x in range(SIZE):
            a[0, :, y, x] = 0.8 if ((y // 16) + (x // 16)) % 2 == 0 else 0.2
    b = torch.zeros_like(a)
    for y in range(SIZE):
        for x in range(SIZE):
            acc = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy = min(max(y + dy, 0), SIZE - 1)
                    xx = min(max(x + dx, 0), SIZE - 1)
                    acc += a[0, 0, yy, xx].item()
            b[0, :, y, x] = acc / 9.0
    return a, b


def score(a, b):
    return ms_ssim(a, b, data_range=1.0, size_average=True, win_size=11, win_sigma=1.5).item()


def main():
    for k in range(10):
        print(f"{k} {score(*pair(k)):.12f}")
    print(f"checkerboard {score(*checkerboard_pair()):.12f}")


if __name__ == "__main__":
    main()
