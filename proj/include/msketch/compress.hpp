#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "msketch/sketch.hpp"

namespace msk {

/// Reduced-precision representation of a sketch: the float fields (min, max,
/// power sums, log sums) are stored with a quantized significand and an
/// exponent field narrowed to the range actually present in the sketch.
/// Significands are rounded randomly without bias, so errors average out
/// across many merged sketches.
struct CompressedSketch {
  int order = 1;
  std::uint64_t count = 0;
  int bits_per_value = 64;
  bool extrema_stale = false;
  int exp_base = 0;  // smallest stored binary exponent
  int exp_bits = 0;  // 0 means raw 64-bit payload
  std::vector<std::uint8_t> payload;

  std::vector<std::uint8_t> serialize() const;
  static CompressedSketch deserialize(std::span<const std::uint8_t> bytes);
};

inline constexpr int kMinBitsPerValue = 8;
inline constexpr int kMaxBitsPerValue = 64;

/// Quantize a sketch to bits_per_value bits per float field. bits_per_value
/// of 64 stores the fields verbatim (decode is then bit-exact).
CompressedSketch encode_low_precision(const MomentsSketch& sketch,
                                      int bits_per_value, std::mt19937_64& rng);

MomentsSketch decode(const CompressedSketch& cs);

}  // namespace msk
