#pragma once

#include "msketch/sketch.hpp"

namespace msk {

/// Sound lower/upper bounds on rank(t) = #{x in D : x < t} over every
/// dataset consistent with the sketch statistics.
struct RankBounds {
  double lower = 0.0;
  double upper = 0.0;
  double t = 0.0;
  bool degraded = false;  // rtt_bound fell back to the Markov result
  double width() const { return upper - lower; }
};

/// Best Markov-inequality bound over all moment orders and the shift,
/// reflection, and (for positive data) log transforms of the values.
RankBounds markov_bound(const MomentsSketch& sketch, double t);

/// Tighter bounds from the full moment vector via canonical representations
/// of the truncated moment problem, run on the standard and (when valid) log
/// moments with the tighter interval returned. Numerical failure degrades to
/// markov_bound with the degraded flag set.
RankBounds rtt_bound(const MomentsSketch& sketch, double t);

/// Worst-case quantile error of the estimate q_hat at level phi: the largest
/// |rank/count - phi| over the rtt_bound rank interval at q_hat.
double quantile_error_bound(const MomentsSketch& sketch, double q_hat, double phi);

/// Bounds-only quantile estimate: the value t at which the midpoint of the
/// rank interval crosses phi * count. Used as a low-confidence fallback when
/// the maximum-entropy solve fails.
double bounds_quantile_estimate(const MomentsSketch& sketch, double phi);

}  // namespace msk
