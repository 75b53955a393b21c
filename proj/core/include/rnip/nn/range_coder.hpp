#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rnip::nn {

inline constexpr int kCdfPrecision = 16;
inline constexpr std::uint32_t kCdfTotal = 1u << kCdfPrecision;

// Integer CDF over symbols 0..n-1: cdf[0] = 0, cdf[n] = kCdfTotal, and every
// symbol has a frequency of at least one.
struct QuantizedCdf {
  std::vector<std::uint32_t> cdf;

  int symbols() const { return static_cast<int>(cdf.size()) - 1; }
  std::uint32_t freq(int s) const { return cdf[s + 1] - cdf[s]; }
  // Ideal code length of s in bits under this model.
  double bits(int s) const;
};

// Quantizes a probability vector. Deterministic for a given input.
QuantizedCdf quantize_pmf(std::span<const double> pmf);
QuantizedCdf uniform_cdf(int symbols);

// Carry-propagating range coder with a 32-bit range and 64-bit low.
class RangeEncoder {
 public:
  void encode(int symbol, const QuantizedCdf& cdf);
  // Flushes the coder state and returns the byte stream.
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> bytes);
  int decode(const QuantizedCdf& cdf);

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
};

// Stream with a 4-byte little-endian symbol count header. Symbol i is coded
// with cdfs[model_of(i)]; an empty input yields the header alone.
std::vector<std::uint8_t> range_encode(std::span<const int> symbols, std::span<const QuantizedCdf> cdfs,
                                       std::span<const int> model_of);
std::vector<int> range_decode(std::span<const std::uint8_t> stream, std::span<const QuantizedCdf> cdfs,
                              std::span<const int> model_of, std::size_t count);

// Single shared model.
std::vector<std::uint8_t> range_encode(std::span<const int> symbols, const QuantizedCdf& cdf);
std::vector<int> range_decode(std::span<const std::uint8_t> stream, const QuantizedCdf& cdf, std::size_t count);

}  // namespace rnip::nn
