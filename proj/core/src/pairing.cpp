#include "rnip/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "binary_io.hpp"

namespace rnip {

GainMatch match_gain(const PlanarF& noisy, const PlanarF& clean) {
  if (!noisy.same_shape(clean)) throw Error(ErrorCode::ShapeMismatch, "match_gain needs equal shapes");
  const double mn = std::accumulate(noisy.data().begin(), noisy.data().end(), 0.0) / noisy.size();
  const double mc = std::accumulate(clean.data().begin(), clean.data().end(), 0.0) / clean.size();
  if (!(mn > 1e-9)) throw Error(ErrorCode::DegenerateImage, "noisy image mean is not positive");
  GainMatch out{PlanarF(noisy.channels(), noisy.height(), noisy.width()), mc / mn};
  std::transform(noisy.data().begin(), noisy.data().end(), out.scaled.data().begin(),
                 [g = out.gain](float v) { return static_cast<float>(g * v); });
  return out;
}

double shifted_l1(const PlanarF& noisy, const PlanarF& clean, int sy, int sx, int min_overlap) {
  if (!noisy.same_shape(clean)) throw Error(ErrorCode::ShapeMismatch, "alignment needs equal shapes");
  const int h = clean.height(), w = clean.width();
  const int y0 = std::max(0, -sy), y1 = std::min(h, h - sy);
  const int x0 = std::max(0, -sx), x1 = std::min(w, w - sx);
  if (y1 - y0 < min_overlap || x1 - x0 < min_overlap)
    throw Error(ErrorCode::TooSmall, "overlap below " + std::to_string(min_overlap) + " pixels");
  double sum = 0.0;
  for (int c = 0; c < clean.channels(); ++c)
    for (int y = y0; y < y1; ++y) {
      const float* a = &clean(c, y, 0);
      const float* b = &noisy(c, y + sy, 0);
      double row = 0.0;
      for (int x = x0; x < x1; ++x) row += std::abs(a[x] - b[x + sx]);
      sum += row;
    }
  return sum / (static_cast<double>(y1 - y0) * (x1 - x0) * clean.channels());
}

AlignmentResult align_pair(const PlanarF& noisy, const PlanarF& clean, const AlignmentParams& params) {
  if (!noisy.same_shape(clean)) throw Error(ErrorCode::ShapeMismatch, "alignment needs equal shapes");
  if (clean.height() < params.min_overlap || clean.width() < params.min_overlap)
    throw Error(ErrorCode::TooSmall, "images smaller than the minimum overlap");
  // The search window shrinks on small images so every candidate keeps the minimum overlap.
  const int limit_y = std::min(params.max_shift, clean.height() - params.min_overlap);
  const int limit_x = std::min(params.max_shift, clean.width() - params.min_overlap);

  std::map<std::pair<int, int>, double> seen;
  AlignmentResult r;
  auto loss_at = [&](int sy, int sx) {
    auto [it, inserted] = seen.try_emplace({sy, sx}, 0.0);
    if (inserted) {
      it->second = shifted_l1(noisy, clean, sy, sx, params.min_overlap);
      ++r.evaluations;
    }
    return it->second;
  };

  int by = 0, bx = 0;
  double best = loss_at(0, 0);
  for (;;) {
    int ny = by, nx = bx;
    double nbest = best;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dy == 0 && dx == 0) continue;
        const int cy = by + dy, cx = bx + dx;
        if (std::abs(cy) > limit_y || std::abs(cx) > limit_x) continue;
        const double l = loss_at(cy, cx);
        if (l < nbest) nbest = l, ny = cy, nx = cx;
      }
    if (ny == by && nx == bx) break;
    by = ny, bx = nx, best = nbest;
  }
  r.shift_y = by;
  r.shift_x = bx;
  r.loss = best;
  r.discarded = best > params.discard_threshold;
  return r;
}

AlignedPair apply_shift(const PlanarF& noisy, const PlanarF& clean, int sy, int sx) {
  if (!noisy.same_shape(clean)) throw Error(ErrorCode::ShapeMismatch, "apply_shift needs equal shapes");
  const int h = clean.height(), w = clean.width();
  const int y0 = std::max(0, -sy), y1 = std::min(h, h - sy);
  const int x0 = std::max(0, -sx), x1 = std::min(w, w - sx);
  if (y1 <= y0 || x1 <= x0) throw Error(ErrorCode::TooSmall, "shift leaves no overlap");
  return {crop(noisy, y0 + sy, x0 + sx, y1 - y0, x1 - x0), crop(clean, y0, x0, y1 - y0, x1 - x0), y0, x0};
}

std::size_t LossMask::included() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double vlo = values[lo];
  double vhi = vlo;
  if (hi != lo) vhi = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(hi), values.end());
  return vlo + (pos - static_cast<double>(lo)) * (vhi - vlo);
}

namespace {

// One pass of a 1-D min (erode) or max (dilate) over a window of `size`,
// along rows (horizontal) or columns. Out-of-bounds samples are ignored.
std::vector<std::uint8_t> morph_pass(const std::vector<std::uint8_t>& in, int h, int w, int size, bool dilate,
                                     bool horizontal) {
  std::vector<std::uint8_t> out(in.size());
  const int r = size / 2;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t acc = dilate ? 0 : 1;
      for (int d = -r; d <= r; ++d) {
        const int yy = horizontal ? y : y + d;
        const int xx = horizontal ? x + d : x;
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        const std::uint8_t v = in[static_cast<std::size_t>(yy) * w + xx];
        acc = dilate ? (acc | v) : (acc & v);
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return out;
}

}  // namespace

std::vector<std::uint8_t> binary_opening(const std::vector<std::uint8_t>& set, int h, int w, int size) {
  if (size <= 1) return set;
  auto eroded = morph_pass(morph_pass(set, h, w, size, false, true), h, w, size, false, false);
  return morph_pass(morph_pass(eroded, h, w, size, true, true), h, w, size, true, false);
}

LossMask build_loss_mask(const PlanarF& noisy, const PlanarF& clean, const MaskParams& params) {
  if (!noisy.same_shape(clean)) throw Error(ErrorCode::ShapeMismatch, "mask needs equal shapes");
  const int h = clean.height(), w = clean.width(), nc = clean.channels();
  const std::size_t n = clean.plane_size();
  std::vector<double> l1(n, 0.0);
  for (int c = 0; c < nc; ++c) {
    const auto a = noisy.plane(c), b = clean.plane(c);
    for (std::size_t i = 0; i < n; ++i) l1[i] += std::abs(static_cast<double>(a[i]) - b[i]);
  }
  for (double& v : l1) v /= nc;
  const double cutoff = percentile(l1, params.percentile);

  std::vector<std::uint8_t> excluded(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool ex = l1[i] > params.l1_threshold || l1[i] > cutoff;
    for (int c = 0; c < nc && !ex; ++c) ex = clean.plane(c)[i] >= params.overexposure;
    excluded[i] = ex ? 1 : 0;
  }
  excluded = binary_opening(excluded, h, w, params.opening_size);
  LossMask m{h, w, std::vector<std::uint8_t>(n)};
  for (std::size_t i = 0; i < n; ++i) m.mask[i] = excluded[i] ? 0 : 1;
  return m;
}

int patch_size(PatchKind kind) { return kind == PatchKind::Rgb ? 1024 : 512; }
int patch_stride(PatchKind kind) { return kind == PatchKind::Rgb ? 256 : 128; }

PatchSet extract_patches(const LossMask& mask, PatchKind kind, double max_masked) {
  return extract_patches(mask, patch_size(kind), patch_stride(kind), max_masked);
}

PatchSet extract_patches(const LossMask& mask, int size, int stride, double max_masked) {
  PatchSet set{{}, stride};
  const int h = mask.height, w = mask.width;
  if (size <= 0 || stride <= 0 || h < size || w < size) return set;
  // Summed-area table of excluded pixels.
  std::vector<std::int64_t> sat(static_cast<std::size_t>(h + 1) * (w + 1), 0);
  auto S = [&](int y, int x) -> std::int64_t& { return sat[static_cast<std::size_t>(y) * (w + 1) + x]; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) S(y + 1, x + 1) = S(y, x + 1) + S(y + 1, x) - S(y, x) + (mask.at(y, x) ? 0 : 1);
  const double area = static_cast<double>(size) * size;
  for (int y = 0; y + size <= h; y += stride)
    for (int x = 0; x + size <= w; x += stride) {
      const auto ex = S(y + size, x + size) - S(y, x + size) - S(y + size, x) + S(y, x);
      if (static_cast<double>(ex) / area > max_masked) continue;
      set.patches.push_back({y, x, size});
    }
  return set;
}

BayerShift halve_shift_for_bayer(int sy, int sx) {
  auto floor_half = [](int v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); };
  return {floor_half(sy), floor_half(sx), (sy & 1) != 0, (sx & 1) != 0};
}

void write_mask(const std::filesystem::path& path, const LossMask& mask) {
  std::vector<unsigned char> out{'R', 'N', 'I', 'P', 'M', 'A', 'S', 'K'};
  detail::put_u32(out, static_cast<std::uint32_t>(mask.height));
  detail::put_u32(out, static_cast<std::uint32_t>(mask.width));
  const std::size_t n = mask.mask.size();
  std::vector<unsigned char> bits((n + 7) / 8, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (mask.mask[i]) bits[i / 8] |= static_cast<unsigned char>(0x80u >> (i % 8));
  out.insert(out.end(), bits.begin(), bits.end());
  detail::write_file(path, out);
}

LossMask read_mask(const std::filesystem::path& path) {
  detail::ByteReader r(detail::read_file(path), path.string());
  r.expect_magic("RNIPMASK");
  LossMask m;
  m.height = static_cast<int>(r.u32());
  m.width = static_cast<int>(r.u32());
  const std::size_t n = static_cast<std::size_t>(m.height) * m.width;
  const unsigned char* bits = r.take((n + 7) / 8);
  m.mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.mask[i] = (bits[i / 8] >> (7 - i % 8)) & 1u;
  return m;
}

void write_rawpatch(const std::filesystem::path& path, const PlanarF& patch) {
  std::vector<unsigned char> out{'R', 'N', 'I', 'P', 'P', 'A', 'T', 'C'};
  detail::put_u32(out, static_cast<std::uint32_t>(patch.channels()));
  detail::put_u32(out, static_cast<std::uint32_t>(patch.height()));
  detail::put_u32(out, static_cast<std::uint32_t>(patch.width()));
  out.reserve(out.size() + patch.size() * 4);
  for (float v : patch.data()) detail::put_f32(out, v);
  detail::write_file(path, out);
}

PlanarF read_rawpatch(const std::filesystem::path& path) {
  detail::ByteReader r(detail::read_file(path), path.string());
  r.expect_magic("RNIPPATC");
  const int c = static_cast<int>(r.u32()), h = static_cast<int>(r.u32()), w = static_cast<int>(r.u32());
  PlanarF p(c, h, w);
  for (float& v : p.data()) v = r.f32();
  return p;
}

}  // namespace rnip
