#pragma once

#include <span>
#include <vector>

// Chebyshev polynomial utilities: coefficient tables, series arithmetic,
// Clenshaw evaluation, and interpolation at Clenshaw-Curtis nodes via a
// type-I discrete cosine transform.
//
// A series is a plain coefficient vector c with f(u) = sum_j c[j] T_j(u).

namespace msk::cheb {

// T_m(u) for u in [-1,1] (argument clamped; recurrence-based).
double eval_poly(int m, double u);

// integral of T_m over [-1,1]: 0 for odd m, 2/(1-m^2) for even m.
double integral(int m);

// Clenshaw evaluation of sum c[j] T_j(u).
double eval_series(std::span<const double> c, double u);

// Rows 0..k of the monomial expansion of T_i; row i has i+1 entries.
// Coefficients are integers, exact in double through i = 20.
std::vector<std::vector<double>> monomial_table(int k);

// Product of two series, truncated to max_degree.
std::vector<double> multiply(std::span<const double> a, std::span<const double> b,
                             int max_degree);

// Coefficients A of an antiderivative: d/du sum A[j] T_j = sum c[j] T_j.
// A[0] is left at zero; callers anchor the constant themselves.
std::vector<double> antiderivative(std::span<const double> c);

// Clenshaw-Curtis nodes u_j = cos(pi j / n), j = 0..n (descending from +1).
std::vector<double> nodes(int n);

// Quadrature weights w_j such that sum w_j f(u_j) integrates the degree-n
// interpolant of f exactly over [-1,1].
std::vector<double> quadrature_weights(int n);

// DCT-I based Chebyshev interpolation on the n+1 Clenshaw-Curtis nodes.
// Owns FFTW buffers and a plan; one instance per concurrent user.
class Interpolator {
 public:
  explicit Interpolator(int degree);
  ~Interpolator();
  Interpolator(const Interpolator&) = delete;
  Interpolator& operator=(const Interpolator&) = delete;

  int degree() const { return degree_; }

  // values[j] = f(cos(pi j / degree)); returns series coefficients c[0..degree]
  // with f(u) ~= sum c[j] T_j(u).
  std::vector<double> coefficients(std::span<const double> values);

 private:
  int degree_;
  double* in_;
  double* out_;
  void* plan_;
};

}  // namespace msk::cheb
