#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace msk {

// Thrown when serialized bytes are malformed (bad magic, version, length).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Highest moment power supported; beyond this double precision cannot
// produce usable moments for any data placement.
inline constexpr int kMaxOrder = 20;

/// Fixed-size mergeable summary of a dataset: extrema, count, and the first
/// k unscaled power sums and log-power sums. Plain value type; copy freely.
class MomentsSketch {
 public:
  explicit MomentsSketch(int order);

  int order() const { return order_; }
  std::uint64_t count() const { return count_; }
  bool empty() const { return count_ == 0; }
  double min() const { return min_; }
  double max() const { return max_; }

  /// True after subtract(): min/max no longer reflect the live contents and
  /// must be refreshed via set_extrema() before estimation.
  bool extrema_stale() const { return extrema_stale_; }

  /// power_sums()[i-1] = sum of x^i; log_sums()[i-1] = sum of log^i(x) over
  /// the strictly positive inputs.
  const std::vector<double>& power_sums() const { return power_sums_; }
  const std::vector<double>& log_sums() const { return log_sums_; }

  void accumulate(double x);
  void merge(const MomentsSketch& other);

  /// Turnstile removal of a previously merged pane. Counts and sums are
  /// subtracted element-wise; extrema become stale (deletions are not
  /// invertible for min/max).
  void subtract(const MomentsSketch& pane);

  /// Supply externally recomputed extrema (e.g. over live window panes).
  void set_extrema(double new_min, double new_max);

  std::vector<std::uint8_t> serialize() const;
  static MomentsSketch deserialize(std::span<const std::uint8_t> bytes);

  bool operator==(const MomentsSketch&) const = default;

 private:
  void reset_empty();

  int order_ = 1;
  std::uint64_t count_ = 0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  bool extrema_stale_ = false;
  std::vector<double> power_sums_;
  std::vector<double> log_sums_;
#ifdef MSKETCH_COMPENSATED_SUMS
  std::vector<double> power_comp_;
  std::vector<double> log_comp_;
#endif
};

MomentsSketch merged(const MomentsSketch& a, const MomentsSketch& b);

/// Left-to-right sequential reduction; bit-exact for a fixed input order.
MomentsSketch merge_all(std::span<const MomentsSketch> parts, int order);

/// Sharded tree reduction across `threads` workers. Agrees with merge_all up
/// to floating point reassociation.
MomentsSketch merge_parallel(std::span<const MomentsSketch> parts, int order,
                             int threads);

}  // namespace msk
