#include "msketch/chebyshev.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace msk::cheb {

namespace {
// The FFTW planner is not reentrant; plan creation/destruction is serialized.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double eval_poly(int m, double u) {
  u = std::clamp(u, -1.0, 1.0);
  if (m == 0) return 1.0;
  double prev = 1.0, cur = u;
  for (int i = 2; i <= m; ++i) {
    double next = 2.0 * u * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double integral(int m) {
  if (m % 2 == 1) return 0.0;
  return 2.0 / (1.0 - static_cast<double>(m) * m);
}

double eval_series(std::span<const double> c, double u) {
  if (c.empty()) return 0.0;
  double b1 = 0.0, b2 = 0.0;
  for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j) {
    double b0 = 2.0 * u * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + c[0];
}

std::vector<std::vector<double>> monomial_table(int k) {
  std::vector<std::vector<double>> t(k + 1);
  t[0] = {1.0};
  if (k >= 1) t[1] = {0.0, 1.0};
  for (int i = 2; i <= k; ++i) {
    t[i].assign(i + 1, 0.0);
    for (int j = 0; j < i; ++j) t[i][j + 1] += 2.0 * t[i - 1][j];
    for (int j = 0; j < i - 1; ++j) t[i][j] -= t[i - 2][j];
  }
  return t;
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b,
                             int max_degree) {
  // T_i T_j = (T_{i+j} + T_{|i-j|}) / 2
  std::vector<double> out(max_degree + 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      double v = 0.5 * a[i] * b[j];
      if (v == 0.0) continue;
      size_t hi = i + j;
      size_t lo = i > j ? i - j : j - i;
      if (hi <= static_cast<size_t>(max_degree)) out[hi] += v;
      if (lo <= static_cast<size_t>(max_degree)) out[lo] += v;
    }
  }
  return out;
}

std::vector<double> antiderivative(std::span<const double> c) {
  // int T_0 = T_1, int T_1 = T_2/4, int T_n = T_{n+1}/(2(n+1)) - T_{n-1}/(2(n-1))
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<double> a(n + 2, 0.0);
  if (n >= 0) a[1] += c[0];
  if (n >= 1) a[2] += c[1] / 4.0;
  for (int j = 2; j <= n; ++j) {
    a[j + 1] += c[j] / (2.0 * (j + 1));
    a[j - 1] -= c[j] / (2.0 * (j - 1));
  }
  return a;
}

std::vector<double> nodes(int n) {
  std::vector<double> u(n + 1);
  for (int j = 0; j <= n; ++j) u[j] = std::cos(M_PI * j / n);
  // pin the endpoints so support boundaries are exact
  u[0] = 1.0;
  u[n] = -1.0;
  if (n % 2 == 0) u[n / 2] = 0.0;
  return u;
}

std::vector<double> quadrature_weights(int n) {
  // w_j = sum_k coef(k,j) * integral(T_k), where coef(k,j) is the linear map
  // from node values to interpolation coefficients (see coefficients()).
  std::vector<double> w(n + 1, 0.0);
  for (int j = 0; j <= n; ++j) {
    double acc = 0.0;
    for (int k = 0; k <= n; k += 2) {
      double coef = (2.0 / n) * std::cos(M_PI * j * k / n);
      if (k == 0 || k == n) coef *= 0.5;
      if (j == 0 || j == n) coef *= 0.5;
      acc += coef * integral(k);
    }
    w[j] = acc;
  }
  return w;
}

Interpolator::Interpolator(int degree) : degree_(degree) {
  if (degree < 2) throw std::invalid_argument("Interpolator: degree must be >= 2");
  in_ = fftw_alloc_real(degree + 1);
  out_ = fftw_alloc_real(degree + 1);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_r2r_1d(degree + 1, in_, out_, FFTW_REDFT00, FFTW_ESTIMATE);
}

Interpolator::~Interpolator() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

std::vector<double> Interpolator::coefficients(std::span<const double> values) {
  if (values.size() != static_cast<size_t>(degree_ + 1))
    throw std::invalid_argument("Interpolator: wrong number of node values");
  const int n = degree_;
  std::copy(values.begin(), values.end(), in_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  // REDFT00: out[k] = in[0] + (-1)^k in[n] + 2 sum_{j=1}^{n-1} in[j] cos(pi jk/n)
  std::vector<double> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = out_[k] / n;
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

}  // namespace msk::cheb
