#include "msketch/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <thread>

namespace msk {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'K', '1'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagExtremaStale = 0x01;

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xff));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_f64(std::vector<std::uint8_t>& b, double v) {
  put_u64(b, std::bit_cast<std::uint64_t>(v));
}

struct ByteReader {
  std::span<const std::uint8_t> data;
  size_t pos = 0;
  std::uint8_t u8() {
    if (pos + 1 > data.size()) throw FormatError("sketch bytes truncated");
    return data[pos++];
  }
  std::uint16_t u16() {
    const std::uint16_t lo = u8();
    const std::uint16_t hi = u8();
    return static_cast<std::uint16_t>(lo | (hi << 8));
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

MomentsSketch::MomentsSketch(int order) : order_(order) {
  if (order < 1 || order > kMaxOrder)
    throw std::invalid_argument("MomentsSketch: order must be in [1, 20]");
  power_sums_.assign(order, 0.0);
  log_sums_.assign(order, 0.0);
#ifdef MSKETCH_COMPENSATED_SUMS
  power_comp_.assign(order, 0.0);
  log_comp_.assign(order, 0.0);
#endif
}

void MomentsSketch::reset_empty() {
  count_ = 0;
  min_ = std::numeric_limits<double>::infinity();
  max_ = -std::numeric_limits<double>::infinity();
  extrema_stale_ = false;
  std::fill(power_sums_.begin(), power_sums_.end(), 0.0);
  std::fill(log_sums_.begin(), log_sums_.end(), 0.0);
#ifdef MSKETCH_COMPENSATED_SUMS
  std::fill(power_comp_.begin(), power_comp_.end(), 0.0);
  std::fill(log_comp_.begin(), log_comp_.end(), 0.0);
#endif
}

namespace {
#ifdef MSKETCH_COMPENSATED_SUMS
// Neumaier variant of Kahan summation.
inline void add_compensated(double& sum, double& comp, double v) {
  double t = sum + v;
  if (std::abs(sum) >= std::abs(v))
    comp += (sum - t) + v;
  else
    comp += (v - t) + sum;
  sum = t;
}
#endif
}  // namespace

void MomentsSketch::accumulate(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("accumulate: value must be finite");
  min_ = std::min(min_, x);
  max_ = std::max(max_, x);
  ++count_;
  double p = 1.0;
  for (int i = 0; i < order_; ++i) {
    p *= x;
#ifdef MSKETCH_COMPENSATED_SUMS
    add_compensated(power_sums_[i], power_comp_[i], p);
#else
    power_sums_[i] += p;
#endif
  }
  if (x > 0.0) {
    const double lx = std::log(x);
    double q = 1.0;
    for (int i = 0; i < order_; ++i) {
      q *= lx;
#ifdef MSKETCH_COMPENSATED_SUMS
      add_compensated(log_sums_[i], log_comp_[i], q);
#else
      log_sums_[i] += q;
#endif
    }
  }
}

void MomentsSketch::merge(const MomentsSketch& other) {
  if (other.order_ != order_)
    throw std::invalid_argument("merge: sketch orders differ");
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
  extrema_stale_ = extrema_stale_ || other.extrema_stale_;
  count_ += other.count_;
  for (int i = 0; i < order_; ++i) {
    power_sums_[i] += other.power_sums_[i];
    log_sums_[i] += other.log_sums_[i];
#ifdef MSKETCH_COMPENSATED_SUMS
    power_sums_[i] += other.power_comp_[i];
    log_sums_[i] += other.log_comp_[i];
#endif
  }
}

void MomentsSketch::subtract(const MomentsSketch& pane) {
  if (pane.order_ != order_)
    throw std::invalid_argument("subtract: sketch orders differ");
  if (pane.count_ > count_)
    throw std::invalid_argument("subtract: pane count exceeds window count");
  count_ -= pane.count_;
  if (count_ == 0) {
    reset_empty();
    return;
  }
  for (int i = 0; i < order_; ++i) {
    power_sums_[i] -= pane.power_sums_[i];
    log_sums_[i] -= pane.log_sums_[i];
  }
  extrema_stale_ = true;
}

void MomentsSketch::set_extrema(double new_min, double new_max) {
  if (count_ == 0) {
    reset_empty();
    return;
  }
  if (!std::isfinite(new_min) || !std::isfinite(new_max) || new_min > new_max)
    throw std::invalid_argument("set_extrema: need finite min <= max");
  min_ = new_min;
  max_ = new_max;
  extrema_stale_ = false;
}

std::vector<std::uint8_t> MomentsSketch::serialize() const {
  std::vector<std::uint8_t> b;
  b.reserve(16 + 16 + 16 * order_);
  b.insert(b.end(), kMagic, kMagic + 4);
  b.push_back(kVersion);
  b.push_back(extrema_stale_ ? kFlagExtremaStale : 0);
  put_u16(b, static_cast<std::uint16_t>(order_));
  put_u64(b, count_);
  put_f64(b, min_);
  put_f64(b, max_);
  for (int i = 0; i < order_; ++i) {
    double s = power_sums_[i];
#ifdef MSKETCH_COMPENSATED_SUMS
    s += power_comp_[i];
#endif
    put_f64(b, s);
  }
  for (int i = 0; i < order_; ++i) {
    double s = log_sums_[i];
#ifdef MSKETCH_COMPENSATED_SUMS
    s += log_comp_[i];
#endif
    put_f64(b, s);
  }
  return b;
}

MomentsSketch MomentsSketch::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r{bytes};
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("sketch bytes: bad magic");
  r.pos = 4;
  if (r.u8() != kVersion) throw FormatError("sketch bytes: unsupported version");
  const std::uint8_t flags = r.u8();
  if (flags & ~kFlagExtremaStale) throw FormatError("sketch bytes: unknown flags");
  const int order = r.u16();
  if (order < 1 || order > kMaxOrder) throw FormatError("sketch bytes: bad order");
  const size_t expect = 16 + 16 + 16 * static_cast<size_t>(order);
  if (bytes.size() != expect) throw FormatError("sketch bytes: wrong length");
  MomentsSketch s(order);
  s.count_ = r.u64();
  s.min_ = r.f64();
  s.max_ = r.f64();
  s.extrema_stale_ = (flags & kFlagExtremaStale) != 0;
  for (int i = 0; i < order; ++i) s.power_sums_[i] = r.f64();
  for (int i = 0; i < order; ++i) s.log_sums_[i] = r.f64();
  return s;
}

MomentsSketch merged(const MomentsSketch& a, const MomentsSketch& b) {
  MomentsSketch out = a;
  out.merge(b);
  return out;
}

MomentsSketch merge_all(std::span<const MomentsSketch> parts, int order) {
  MomentsSketch out(order);
  for (const auto& p : parts) out.merge(p);
  return out;
}

MomentsSketch merge_parallel(std::span<const MomentsSketch> parts, int order,
                             int threads) {
  if (threads <= 1 || parts.size() < 2) return merge_all(parts, order);
  threads = std::min<int>(threads, static_cast<int>(parts.size()));
  std::vector<MomentsSketch> partial(threads, MomentsSketch(order));
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const size_t chunk = (parts.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      const size_t lo = t * chunk;
      const size_t hi = std::min(parts.size(), lo + chunk);
      for (size_t i = lo; i < hi; ++i) partial[t].merge(parts[i]);
    });
  }
  for (auto& w : workers) w.join();
  return merge_all(partial, order);
}

}  // namespace msk
