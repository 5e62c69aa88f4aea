#include "msketch/compress.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace msk {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'K', '1'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagExtremaStale = 0x01;
constexpr std::uint8_t kFlagCompressed = 0x02;

// Exponent field codes 0 and 1 are reserved for zero and infinity.
constexpr std::uint64_t kExpZero = 0;
constexpr std::uint64_t kExpInf = 1;
constexpr std::uint64_t kExpOffset = 2;

class BitWriter {
 public:
  void write(std::uint64_t v, int bits) {
    for (int i = 0; i < bits; ++i) {
      if (pos_ % 8 == 0) bytes_.push_back(0);
      if ((v >> i) & 1) bytes_.back() |= static_cast<std::uint8_t>(1u << (pos_ % 8));
      ++pos_;
    }
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint64_t read(int bits) {
    std::uint64_t v = 0;
    for (int i = 0; i < bits; ++i) {
      const size_t byte = pos_ / 8;
      if (byte >= bytes_.size()) throw FormatError("compressed payload truncated");
      if ((bytes_[byte] >> (pos_ % 8)) & 1) v |= 1ull << i;
      ++pos_;
    }
    return v;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  size_t pos_ = 0;
};

std::vector<double> field_values(const MomentsSketch& s) {
  std::vector<double> v;
  v.reserve(2 + 2 * s.order());
  v.push_back(s.min());
  v.push_back(s.max());
  v.insert(v.end(), s.power_sums().begin(), s.power_sums().end());
  v.insert(v.end(), s.log_sums().begin(), s.log_sums().end());
  return v;
}

int bits_for(std::uint64_t n) {
  int b = 0;
  while (n > 0) {
    ++b;
    n >>= 1;
  }
  return std::max(b, 1);
}

}  // namespace

CompressedSketch encode_low_precision(const MomentsSketch& sketch,
                                      int bits_per_value, std::mt19937_64& rng) {
  if (bits_per_value < kMinBitsPerValue || bits_per_value > kMaxBitsPerValue)
    throw std::invalid_argument("encode_low_precision: bits_per_value out of range");

  CompressedSketch cs;
  cs.order = sketch.order();
  cs.count = sketch.count();
  cs.bits_per_value = bits_per_value;
  cs.extrema_stale = sketch.extrema_stale();

  const std::vector<double> values = field_values(sketch);

  if (bits_per_value == 64) {
    cs.exp_bits = 0;
    cs.payload.resize(values.size() * 8);
    std::memcpy(cs.payload.data(), values.data(), cs.payload.size());
    return cs;
  }

  // Exponent range over the representable values, with one slot of headroom
  // for significand rounding that carries into the next binade.
  int e_lo = std::numeric_limits<int>::max();
  int e_hi = std::numeric_limits<int>::min();
  for (double v : values) {
    if (v == 0.0 || std::isinf(v)) continue;
    int e;
    std::frexp(v, &e);
    e_lo = std::min(e_lo, e);
    e_hi = std::max(e_hi, e);
  }
  if (e_lo > e_hi) {  // only zeros and infinities present
    e_lo = 0;
    e_hi = 0;
  }
  e_hi += 1;
  cs.exp_base = e_lo;
  cs.exp_bits = bits_for(static_cast<std::uint64_t>(e_hi - e_lo) + kExpOffset);
  const int frac_bits = bits_per_value - 1 - cs.exp_bits;
  if (frac_bits < 1)
    throw std::invalid_argument(
        "encode_low_precision: bits_per_value too small for this sketch's "
        "exponent range");

  BitWriter w;
  const double scale = std::ldexp(1.0, frac_bits + 1);  // significand quantum^-1
  for (double v : values) {
    const std::uint64_t sign = std::signbit(v) ? 1 : 0;
    w.write(sign, 1);
    if (v == 0.0) {
      w.write(kExpZero, cs.exp_bits);
      w.write(0, frac_bits);
      continue;
    }
    if (std::isinf(v)) {
      w.write(kExpInf, cs.exp_bits);
      w.write(0, frac_bits);
      continue;
    }
    int e;
    double m = std::abs(std::frexp(v, &e));  // m in [0.5, 1)
    double y = m * scale;                    // in [2^frac_bits, 2^(frac_bits+1))
    std::uint64_t f = static_cast<std::uint64_t>(std::floor(y));
    const double frac = y - static_cast<double>(f);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < frac) ++f;
    if (f >= (1ull << (frac_bits + 1))) {  // rounded up into the next binade
      f >>= 1;
      ++e;
    }
    w.write(static_cast<std::uint64_t>(e - e_lo) + kExpOffset, cs.exp_bits);
    w.write(f - (1ull << frac_bits), frac_bits);  // implicit leading bit
  }
  cs.payload = w.take();
  return cs;
}

MomentsSketch decode(const CompressedSketch& cs) {
  MomentsSketch out(cs.order);
  const size_t n_values = 2 + 2 * static_cast<size_t>(cs.order);
  std::vector<double> values(n_values);

  if (cs.exp_bits == 0) {
    if (cs.payload.size() != n_values * 8)
      throw FormatError("compressed payload: wrong raw length");
    std::memcpy(values.data(), cs.payload.data(), cs.payload.size());
  } else {
    const int frac_bits = cs.bits_per_value - 1 - cs.exp_bits;
    BitReader r(cs.payload);
    for (size_t i = 0; i < n_values; ++i) {
      const bool neg = r.read(1) != 0;
      const std::uint64_t ecode = r.read(cs.exp_bits);
      const std::uint64_t f = r.read(frac_bits);
      double v;
      if (ecode == kExpZero) {
        v = 0.0;
      } else if (ecode == kExpInf) {
        v = std::numeric_limits<double>::infinity();
      } else {
        const int e = static_cast<int>(ecode - kExpOffset) + cs.exp_base;
        const double m =
            static_cast<double>(f + (1ull << frac_bits)) / std::ldexp(1.0, frac_bits + 1);
        v = std::ldexp(m, e);
      }
      values[i] = neg ? -v : v;
    }
  }

  // Rebuild through a serialized image so field layout stays in one place.
  std::vector<std::uint8_t> img;
  img.insert(img.end(), kMagic, kMagic + 4);
  img.push_back(kVersion);
  img.push_back(cs.extrema_stale ? kFlagExtremaStale : 0);
  img.push_back(static_cast<std::uint8_t>(cs.order & 0xff));
  img.push_back(static_cast<std::uint8_t>(cs.order >> 8));
  for (int i = 0; i < 8; ++i) img.push_back(static_cast<std::uint8_t>(cs.count >> (8 * i)));
  for (double v : values) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) img.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  return MomentsSketch::deserialize(img);
}

std::vector<std::uint8_t> CompressedSketch::serialize() const {
  std::vector<std::uint8_t> b;
  b.insert(b.end(), kMagic, kMagic + 4);
  b.push_back(kVersion);
  b.push_back(static_cast<std::uint8_t>(kFlagCompressed |
                                        (extrema_stale ? kFlagExtremaStale : 0)));
  b.push_back(static_cast<std::uint8_t>(order & 0xff));
  b.push_back(static_cast<std::uint8_t>(order >> 8));
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(count >> (8 * i)));
  b.push_back(static_cast<std::uint8_t>(bits_per_value));
  b.push_back(static_cast<std::uint8_t>(static_cast<std::int16_t>(exp_base) & 0xff));
  b.push_back(static_cast<std::uint8_t>(static_cast<std::int16_t>(exp_base) >> 8));
  b.push_back(static_cast<std::uint8_t>(exp_bits));
  const std::uint32_t len = static_cast<std::uint32_t>(payload.size());
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  b.insert(b.end(), payload.begin(), payload.end());
  return b;
}

CompressedSketch CompressedSketch::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 24 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("compressed sketch: bad magic or truncated");
  size_t p = 4;
  if (bytes[p++] != kVersion) throw FormatError("compressed sketch: unsupported version");
  const std::uint8_t flags = bytes[p++];
  if (!(flags & kFlagCompressed)) throw FormatError("compressed sketch: flag missing");
  CompressedSketch cs;
  cs.extrema_stale = (flags & kFlagExtremaStale) != 0;
  cs.order = bytes[p] | (bytes[p + 1] << 8);
  p += 2;
  if (cs.order < 1 || cs.order > kMaxOrder)
    throw FormatError("compressed sketch: bad order");
  cs.count = 0;
  for (int i = 0; i < 8; ++i) cs.count |= static_cast<std::uint64_t>(bytes[p + i]) << (8 * i);
  p += 8;
  cs.bits_per_value = bytes[p++];
  cs.exp_base = static_cast<std::int16_t>(bytes[p] | (bytes[p + 1] << 8));
  p += 2;
  cs.exp_bits = bytes[p++];
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(bytes[p + i]) << (8 * i);
  p += 4;
  if (bytes.size() != p + len) throw FormatError("compressed sketch: wrong length");
  cs.payload.assign(bytes.begin() + p, bytes.end());
  return cs;
}

}  // namespace msk
