#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "rnip/raw.hpp"

namespace rnip {

struct AlignmentParams {
  int max_shift = 128;
  double discard_threshold = 0.035;
  int min_overlap = 64;
};

// clean(y, x) corresponds to noisy(y + shift_y, x + shift_x).
struct AlignmentResult {
  int shift_y = 0;
  int shift_x = 0;
  double loss = 0.0;
  bool discarded = false;
  int evaluations = 0;
};

struct GainMatch {
  PlanarF scaled;
  double gain = 1.0;
};

// Scales noisy so that its mean equals the clean mean.
GainMatch match_gain(const PlanarF& noisy, const PlanarF& clean);

// Mean absolute difference over all channels of the region where both
// images are defined after shifting. Throws TooSmall below min_overlap.
double shifted_l1(const PlanarF& noisy, const PlanarF& clean, int shift_y, int shift_x, int min_overlap = 1);

// Greedy 3x3 descent from (0,0), bounded by max_shift on each axis.
AlignmentResult align_pair(const PlanarF& noisy, const PlanarF& clean, const AlignmentParams& params = {});

// Both images cropped to their overlap under the given shift.
struct AlignedPair {
  PlanarF noisy;
  PlanarF clean;
  int clean_y0 = 0;
  int clean_x0 = 0;
};
AlignedPair apply_shift(const PlanarF& noisy, const PlanarF& clean, int shift_y, int shift_x);

// 1 = pixel contributes to the loss.
struct LossMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> mask;

  std::uint8_t at(int y, int x) const { return mask[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int y, int x) { return mask[static_cast<std::size_t>(y) * width + x]; }
  std::size_t included() const;
  bool operator==(const LossMask&) const = default;
};

struct MaskParams {
  double l1_threshold = 0.4;
  double percentile = 99.99;
  double overexposure = 0.99;
  int opening_size = 3;
};

// Exclusion rules: per-pixel L1 (channel mean) above l1_threshold or above
// the pair's own percentile, or any clean channel >= overexposure. The
// exclusion set is then opened with a square element; the mask is its
// complement.
LossMask build_loss_mask(const PlanarF& noisy_aligned, const PlanarF& clean, const MaskParams& params = {});

// Square-element binary opening; out-of-bounds neighbors are ignored.
std::vector<std::uint8_t> binary_opening(const std::vector<std::uint8_t>& set, int height, int width, int size);

// Linear-interpolated percentile (q in [0, 100]).
double percentile(std::vector<double> values, double q);

enum class PatchKind { Rgb, Bayer };

struct Patch {
  int origin_y = 0;
  int origin_x = 0;
  int size = 0;
  bool operator==(const Patch&) const = default;
};

struct PatchSet {
  std::vector<Patch> patches;
  int stride = 0;
};

int patch_size(PatchKind kind);
int patch_stride(PatchKind kind);

// Overlapping grid; patches with more than max_masked of their area excluded
// are dropped. The mask must match the image size.
PatchSet extract_patches(const LossMask& mask, PatchKind kind, double max_masked = 0.5);
PatchSet extract_patches(const LossMask& mask, int size, int stride, double max_masked = 0.5);

struct BayerShift {
  int shift_y = 0;
  int shift_x = 0;
  bool trim_y = false;
  bool trim_x = false;
  bool operator==(const BayerShift&) const = default;
};

// Floor division by two; odd components request one extra trimmed row/column.
BayerShift halve_shift_for_bayer(int shift_y, int shift_x);

// Mask file: "RNIPMASK", H and W as u32 LE, then H*W bits packed MSB-first.
void write_mask(const std::filesystem::path& path, const LossMask& mask);
LossMask read_mask(const std::filesystem::path& path);

// Patch export: "RNIPPATC", C, H, W as u32 LE, then planar f32 LE.
void write_rawpatch(const std::filesystem::path& path, const PlanarF& patch);
PlanarF read_rawpatch(const std::filesystem::path& path);

}  // namespace rnip
