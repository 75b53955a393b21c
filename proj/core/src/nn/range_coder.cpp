#include "rnip/nn/range_coder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rnip/error.hpp"

namespace rnip::nn {

double QuantizedCdf::bits(int s) const {
  return kCdfPrecision - std::log2(static_cast<double>(freq(s)));
}

QuantizedCdf quantize_pmf(std::span<const double> pmf) {
  const int n = static_cast<int>(pmf.size());
  if (n < 1 || static_cast<std::uint32_t>(n) > kCdfTotal / 2)
    throw Error(ErrorCode::BadProbability, "pmf size " + std::to_string(n));
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorCode::BadProbability, "negative or non-finite pmf entry");
    sum += p;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::BadProbability, "pmf sums to zero");
  const double spread = static_cast<double>(kCdfTotal - static_cast<std::uint32_t>(n));
  std::vector<std::uint32_t> freq(n);
  std::vector<double> frac(n);
  std::uint64_t used = 0;
  for (int i = 0; i < n; ++i) {
    const double scaled = pmf[i] / sum * spread;
    const double fl = std::floor(scaled);
    freq[i] = 1 + static_cast<std::uint32_t>(fl);
    frac[i] = scaled - fl;
    used += freq[i];
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::uint64_t k = 0; used < kCdfTotal; ++k, ++used) ++freq[order[k % n]];
  QuantizedCdf q;
  q.cdf.resize(n + 1, 0);
  for (int i = 0; i < n; ++i) q.cdf[i + 1] = q.cdf[i] + freq[i];
  return q;
}

QuantizedCdf uniform_cdf(int symbols) {
  std::vector<double> pmf(symbols, 1.0);
  return quantize_pmf(pmf);
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t temp = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(temp + carry));
      temp = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>((low_ >> 24) & 0xFF);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void RangeEncoder::encode(int symbol, const QuantizedCdf& cdf) {
  if (symbol < 0 || symbol >= cdf.symbols())
    throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(symbol));
  range_ >>= kCdfPrecision;
  low_ += static_cast<std::uint64_t>(cdf.cdf[symbol]) * range_;
  range_ *= cdf.freq(symbol);
  while (range_ < (1u << 24)) {
    range_ <<= 8;
    shift_low();
  }
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> bytes) : in_(bytes) {
  for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() { return pos_ < in_.size() ? in_[pos_++] : 0; }

int RangeDecoder::decode(const QuantizedCdf& cdf) {
  range_ >>= kCdfPrecision;
  const std::uint32_t value = std::min(code_ / range_, kCdfTotal - 1);
  const auto it = std::upper_bound(cdf.cdf.begin(), cdf.cdf.end(), value);
  const int s = static_cast<int>(it - cdf.cdf.begin()) - 1;
  code_ -= cdf.cdf[s] * range_;
  range_ *= cdf.freq(s);
  while (range_ < (1u << 24)) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return s;
}

namespace {

void put_count(std::vector<std::uint8_t>& out, std::size_t n) {
  const auto v = static_cast<std::uint32_t>(n);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::size_t get_count(std::span<const std::uint8_t> stream) {
  if (stream.size() < 4) throw Error(ErrorCode::ParseError, "bitstream shorter than its header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(stream[i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> range_encode(std::span<const int> symbols, std::span<const QuantizedCdf> cdfs,
                                       std::span<const int> model_of) {
  if (model_of.size() != symbols.size()) throw Error(ErrorCode::ShapeMismatch, "model index per symbol required");
  std::vector<std::uint8_t> out;
  put_count(out, symbols.size());
  if (symbols.empty()) return out;
  RangeEncoder enc;
  for (std::size_t i = 0; i < symbols.size(); ++i) enc.encode(symbols[i], cdfs[model_of[i]]);
  const auto body = enc.finish();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::vector<int> range_decode(std::span<const std::uint8_t> stream, std::span<const QuantizedCdf> cdfs,
                              std::span<const int> model_of, std::size_t count) {
  const std::size_t stored = get_count(stream);
  if (stored != count)
    throw Error(ErrorCode::ParseError, "bitstream holds " + std::to_string(stored) + " symbols, expected " +
                                           std::to_string(count));
  if (model_of.size() != count) throw Error(ErrorCode::ShapeMismatch, "model index per symbol required");
  std::vector<int> out(count);
  if (count == 0) return out;
  RangeDecoder dec(stream.subspan(4));
  for (std::size_t i = 0; i < count; ++i) out[i] = dec.decode(cdfs[model_of[i]]);
  return out;
}

std::vector<std::uint8_t> range_encode(std::span<const int> symbols, const QuantizedCdf& cdf) {
  std::vector<int> model(symbols.size(), 0);
  return range_encode(symbols, std::span<const QuantizedCdf>(&cdf, 1), model);
}

std::vector<int> range_decode(std::span<const std::uint8_t> stream, const QuantizedCdf& cdf, std::size_t count) {
  std::vector<int> model(count, 0);
  return range_decode(stream, std::span<const QuantizedCdf>(&cdf, 1), model, count);
}

}  // namespace rnip::nn
