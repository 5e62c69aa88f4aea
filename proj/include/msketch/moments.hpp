#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msketch/sketch.hpp"

namespace msk {

/// Affine map between a data interval and [-1, 1].
struct ScaleMap {
  double center = 0.0;
  double halfwidth = 1.0;
  double to_unit(double x) const { return (x - center) / halfwidth; }
  double from_unit(double u) const { return center + halfwidth * u; }
};

/// Basis description for estimation: k1 polynomial moments of the scaled
/// data and k2 polynomial moments of the scaled log data.
struct BasisSpec {
  int k1 = 0;
  int k2 = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  bool log_valid = false;  // x_min > 0, so log moments are usable
  ScaleMap s1;             // [x_min, x_max] -> [-1, 1]
  ScaleMap s2;             // [log x_min, log x_max] -> [-1, 1]
  int total() const { return k1 + k2; }
};

/// Sample averages of the Chebyshev basis functions: values[i] for i < k1 is
/// mean T_{i+1}(s1(x)); the remaining k2 entries are mean T_{j}(s2(log x)).
struct ChebyshevMoments {
  BasisSpec basis;
  std::vector<double> values;
  std::uint64_t count = 0;
};

/// Highest moment order that stays numerically meaningful in double
/// precision for data scaled to [c-1, c+1], clamped to [2, 20].
int max_stable_order(double center);

/// (1/n) * sum ((x - center)/halfwidth)^j for j = 0..k, computed from the
/// unscaled power sums by binomial expansion (extended precision inside).
std::vector<double> scaled_power_moments(std::span<const double> power_sums,
                                         std::uint64_t count, const ScaleMap& map,
                                         int k);

/// Change of basis from scaled power moments m_j = mean u^j to Chebyshev
/// moments mean T_i(u), i = 0..k.
std::vector<double> power_to_chebyshev(std::span<const double> scaled_moments);

/// Full-order conversion of sketch statistics. Orders can be capped
/// separately for the standard and log families (0 disables a family; caps
/// above sketch.order() are clamped). Requires count > 0 and min < max.
ChebyshevMoments to_chebyshev_moments(const MomentsSketch& sketch);
ChebyshevMoments to_chebyshev_moments(const MomentsSketch& sketch, int k1_cap,
                                      int k2_cap);

}  // namespace msk
