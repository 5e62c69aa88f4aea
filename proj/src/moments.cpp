#include "msketch/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msketch/chebyshev.hpp"

namespace msk {

int max_stable_order(double center) {
  const double k = 13.06 / (0.78 + std::log10(std::abs(center) + 1.0));
  return std::clamp(static_cast<int>(std::floor(k)), 2, kMaxOrder);
}

std::vector<double> scaled_power_moments(std::span<const double> power_sums,
                                         std::uint64_t count, const ScaleMap& map,
                                         int k) {
  if (count == 0) throw std::invalid_argument("scaled_power_moments: empty sketch");
  if (k > static_cast<int>(power_sums.size()))
    throw std::invalid_argument("scaled_power_moments: order exceeds stored sums");

  // mean((x-c)/r)^j = r^-j * sum_i C(j,i) (-c)^(j-i) * mean(x^i).
  // The alternating binomial sum is where the precision goes; do it in long
  // double to keep the raw-sum rounding as the dominant error term.
  const long double c = map.center;
  const long double r = map.halfwidth;
  const long double n = static_cast<long double>(count);

  std::vector<long double> raw(k + 1);
  raw[0] = 1.0L;
  for (int i = 1; i <= k; ++i) raw[i] = static_cast<long double>(power_sums[i - 1]) / n;

  // Pascal triangle up to row k.
  std::vector<std::vector<long double>> binom(k + 1);
  for (int j = 0; j <= k; ++j) {
    binom[j].assign(j + 1, 1.0L);
    for (int i = 1; i < j; ++i) binom[j][i] = binom[j - 1][i - 1] + binom[j - 1][i];
  }

  std::vector<double> out(k + 1);
  for (int j = 0; j <= k; ++j) {
    long double acc = 0.0L;
    long double cpow = 1.0L;  // (-c)^(j-i) built from i=j downwards
    for (int i = j; i >= 0; --i) {
      acc += binom[j][i] * raw[i] * cpow;
      cpow *= -c;
    }
    long double rj = 1.0L;
    for (int i = 0; i < j; ++i) rj *= r;
    out[j] = static_cast<double>(acc / rj);
  }
  return out;
}

std::vector<double> power_to_chebyshev(std::span<const double> scaled_moments) {
  const int k = static_cast<int>(scaled_moments.size()) - 1;
  const auto table = cheb::monomial_table(k);
  std::vector<double> out(k + 1);
  for (int i = 0; i <= k; ++i) {
    long double acc = 0.0L;
    for (int j = 0; j <= i; ++j)
      acc += static_cast<long double>(table[i][j]) * scaled_moments[j];
    out[i] = static_cast<double>(acc);
  }
  return out;
}

ChebyshevMoments to_chebyshev_moments(const MomentsSketch& sketch) {
  return to_chebyshev_moments(sketch, sketch.order(), sketch.order());
}

ChebyshevMoments to_chebyshev_moments(const MomentsSketch& sketch, int k1_cap,
                                      int k2_cap) {
  if (sketch.empty()) throw std::invalid_argument("to_chebyshev_moments: empty sketch");
  if (sketch.extrema_stale())
    throw std::invalid_argument("to_chebyshev_moments: extrema are stale");
  if (!(sketch.min() < sketch.max()))
    throw std::invalid_argument("to_chebyshev_moments: degenerate support");

  ChebyshevMoments m;
  m.count = sketch.count();
  BasisSpec& b = m.basis;
  b.x_min = sketch.min();
  b.x_max = sketch.max();
  b.s1 = {0.5 * (b.x_max + b.x_min), 0.5 * (b.x_max - b.x_min)};
  b.log_valid = b.x_min > 0.0;
  b.k1 = std::clamp(k1_cap, 0, sketch.order());
  b.k2 = b.log_valid ? std::clamp(k2_cap, 0, sketch.order()) : 0;
  if (b.total() < 1) throw std::invalid_argument("to_chebyshev_moments: no basis");

  m.values.reserve(b.total());
  if (b.k1 > 0) {
    const auto scaled =
        scaled_power_moments(sketch.power_sums(), sketch.count(), b.s1, b.k1);
    const auto cheb = power_to_chebyshev(scaled);
    m.values.insert(m.values.end(), cheb.begin() + 1, cheb.end());
  }
  if (b.k2 > 0) {
    const double lmin = std::log(b.x_min);
    const double lmax = std::log(b.x_max);
    b.s2 = {0.5 * (lmax + lmin), 0.5 * (lmax - lmin)};
    const auto scaled =
        scaled_power_moments(sketch.log_sums(), sketch.count(), b.s2, b.k2);
    const auto cheb = power_to_chebyshev(scaled);
    m.values.insert(m.values.end(), cheb.begin() + 1, cheb.end());
  }
  return m;
}

}  // namespace msk
