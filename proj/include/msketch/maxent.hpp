#pragma once

#include <stdexcept>
#include <vector>

#include "msketch/moments.hpp"
#include "msketch/sketch.hpp"

namespace msk {

/// Thrown when pdf/cdf/quantile is requested from a fit that did not
/// converge.
class EstimateUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double moment_match_tol = 1e-9;  // gradient max-norm stopping rule
  double kappa_max = 1e4;          // condition-number cap for basis selection
  int quadrature_degree = 128;     // Chebyshev approximation degree (power of 2)
  int max_iterations = 200;
  double ls_decrease = 0.1;  // backtracking sufficient-decrease fraction
  double ls_shrink = 0.5;
  int ls_max_steps = 40;
  // Cap moment orders by the floating-point stability of the shifted data
  // (see max_stable_order) before basis selection.
  bool apply_stability_cap = true;
};

/// Solved exponential-family density exp(theta . basis) together with a
/// cached Chebyshev expansion used for cdf and quantile evaluation.
/// theta is laid out [theta_0, standard 1..k1, log 1..k2].
class MaxEntDistribution {
 public:
  bool converged() const { return converged_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }
  const BasisSpec& basis() const { return basis_; }
  const std::vector<double>& theta() const { return theta_; }

  /// Density expansion over the scaled primary variable (the log domain when
  /// k2 > 0, the data domain otherwise), normalized to unit mass.
  const std::vector<double>& density_coeffs() const { return density_; }
  bool log_primary() const { return log_primary_; }

  bool is_point_mass() const { return point_mass_; }
  double point_mass_value() const { return point_value_; }

  double pdf(double x) const;
  double cdf(double x) const;
  /// Value q with |cdf(q) - phi| <= 1e-8, bracketed in [x_min, x_max].
  double quantile(double phi) const;

 private:
  friend MaxEntDistribution solve_maxent(const ChebyshevMoments&, const SolverConfig&);
  friend MaxEntDistribution point_mass_distribution(double value);

  double cdf_unit(double v) const;  // cdf in the scaled primary variable
  void require_converged() const;

  BasisSpec basis_;
  std::vector<double> theta_;
  bool converged_ = false;
  double residual_ = 0.0;
  int iterations_ = 0;
  bool log_primary_ = false;
  bool point_mass_ = false;
  double point_value_ = 0.0;
  double mass_ = 1.0;            // integral of exp(theta . m) before normalizing
  std::vector<double> density_;  // unit-mass density coefficients
  std::vector<double> cdf_coeffs_;
  double cdf_at_lo_ = 0.0;
};

/// Degenerate-support result: every quantile equals `value`.
MaxEntDistribution point_mass_distribution(double value);

/// Greedy (k1, k2) choice keeping the condition number of the Hessian at
/// theta = 0 below kappa_max; candidates whose observed moment is closer to
/// the uniform reference moment are preferred.
BasisSpec select_moment_counts(const ChebyshevMoments& full, const SolverConfig& config);

/// Prefix restriction of full-order moments to a selected basis.
ChebyshevMoments restrict_moments(const ChebyshevMoments& full, const BasisSpec& sel);

/// Damped Newton solve of the maximum-entropy moment-matching problem.
/// Non-convergence is reported through the returned object, never thrown.
MaxEntDistribution solve_maxent(const ChebyshevMoments& moments,
                                const SolverConfig& config);

/// Full pipeline: conversion, stability cap, basis selection, solve.
/// Degenerate support (min == max) yields a point-mass distribution.
MaxEntDistribution estimate(const MomentsSketch& sketch,
                            const SolverConfig& config = {});

double estimate_quantile(const MaxEntDistribution& dist, double phi);

/// Hessian condition number at theta = 0 for a basis, as used by the
/// selection heuristic.
double hessian_condition_at_zero(const BasisSpec& basis, int quadrature_degree);

namespace detail {
// Gradient and Hessian of the potential at theta (external layout); exposed
// for verification against finite differences and direct quadrature.
struct PotentialDerivatives {
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<std::vector<double>> hessian;
  bool valid = false;
};
PotentialDerivatives potential_derivatives(const ChebyshevMoments& moments,
                                           const std::vector<double>& theta,
                                           const SolverConfig& config);
double potential_value(const ChebyshevMoments& moments, const std::vector<double>& theta,
                       const SolverConfig& config);
}  // namespace detail

}  // namespace msk
