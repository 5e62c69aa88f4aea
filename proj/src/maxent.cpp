#include "msketch/maxent.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "msketch/chebyshev.hpp"

namespace msk {

namespace {

constexpr double kExpArgLimit = 700.0;  // exp() overflow guard

// Rows 0..k of T_a evaluated at each argument (arguments already in [-1,1]).
std::vector<std::vector<double>> cheb_rows(std::span<const double> args, int k) {
  std::vector<std::vector<double>> rows(k + 1, std::vector<double>(args.size()));
  for (size_t j = 0; j < args.size(); ++j) {
    rows[0][j] = 1.0;
    if (k >= 1) rows[1][j] = args[j];
    for (int a = 2; a <= k; ++a)
      rows[a][j] = 2.0 * args[j] * rows[a - 1][j] - rows[a - 2][j];
  }
  return rows;
}

// Node values of every basis function, external order [1, std 1..k1,
// log 1..k2], over the primary-domain Clenshaw-Curtis nodes.
std::vector<std::vector<double>> basis_node_values(const BasisSpec& b,
                                                   std::span<const double> nodes) {
  const bool log_primary = b.k2 > 0;
  std::vector<std::vector<double>> funcs;
  funcs.reserve(1 + b.total());
  if (!log_primary) {
    auto rows = cheb_rows(nodes, b.k1);
    for (int a = 0; a <= b.k1; ++a) funcs.push_back(std::move(rows[a]));
    return funcs;
  }
  // Primary variable is v = s2(log x); the standard basis functions become
  // T_a(s1(exp(s2^-1(v)))).
  std::vector<double> warp_args(nodes.size());
  for (size_t j = 0; j < nodes.size(); ++j) {
    const double x = std::exp(b.s2.from_unit(nodes[j]));
    warp_args[j] = std::clamp(b.s1.to_unit(x), -1.0, 1.0);
  }
  auto std_rows = cheb_rows(warp_args, b.k1);
  auto log_rows = cheb_rows(nodes, b.k2);
  funcs.push_back(std::move(log_rows[0]));
  for (int a = 1; a <= b.k1; ++a) funcs.push_back(std::move(std_rows[a]));
  for (int a = 1; a <= b.k2; ++a) funcs.push_back(std::move(log_rows[a]));
  return funcs;
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// Chebyshev moment of the uniform density on [-1,1], the reference the
// greedy selection compares against.
double uniform_reference_moment(int i) {
  if (i % 2 == 1) return 0.0;
  return 1.0 / (1.0 - static_cast<double>(i) * i);
}

// Classic Brent root finder on [a, b]; fa, fb must bracket.
double brent_root(const std::function<double(double)>& fn, double a, double b,
                  double fa, double fb, double xtol, double ftol) {
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + xtol;
    const double mid = 0.5 * (c - b);
    if (std::abs(fb) <= ftol || std::abs(mid) <= tol) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic / secant step
      const double s = fb / fa;
      double pp, qq;
      if (a == c) {
        pp = 2.0 * mid * s;
        qq = 1.0 - s;
      } else {
        const double r1 = fa / fc, r2 = fb / fc;
        pp = s * (2.0 * mid * r1 * (r1 - r2) - (b - a) * (r2 - 1.0));
        qq = (r1 - 1.0) * (r2 - 1.0) * (s - 1.0);
      }
      if (pp > 0.0) qq = -qq;
      pp = std::abs(pp);
      if (2.0 * pp < std::min(3.0 * mid * qq - std::abs(tol * qq), std::abs(e * qq))) {
        e = d;
        d = pp / qq;
      } else {
        d = mid;
        e = d;
      }
    } else {
      d = mid;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (mid > 0 ? tol : -tol);
    fb = fn(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

// Solver state shared across Newton iterations for one problem instance.
class NewtonProblem {
 public:
  NewtonProblem(const ChebyshevMoments& m, const SolverConfig& cfg)
      : basis_(m.basis),
        log_primary_(m.basis.k2 > 0),
        p_(log_primary_ ? m.basis.k2 : m.basis.k1),
        q_(log_primary_ ? m.basis.k1 : 0),
        dim_(1 + p_ + q_),
        n_(cfg.quadrature_degree),
        nodes_(cheb::nodes(n_)),
        weights_(cheb::quadrature_weights(n_)),
        interp_(n_) {
    m_need_ = q_ > 0 ? 2 * n_ : std::max(2 * p_, 1);
    integrals_.resize(m_need_ + n_ + 1);
    for (size_t i = 0; i < integrals_.size(); ++i)
      integrals_[i] = cheb::integral(static_cast<int>(i));

    auto funcs = basis_node_values(basis_, nodes_);
    // internal order: [const, poly 1..p, warp 1..q]
    values_.push_back(std::move(funcs[0]));
    if (log_primary_) {
      for (int a = 1; a <= basis_.k2; ++a)
        values_.push_back(std::move(funcs[basis_.k1 + a]));
      for (int b = 1; b <= basis_.k1; ++b) values_.push_back(std::move(funcs[b]));
    } else {
      for (int a = 1; a <= basis_.k1; ++a) values_.push_back(std::move(funcs[a]));
    }

    mu_.assign(dim_, 0.0);
    mu_[0] = 1.0;
    for (int a = 1; a <= p_; ++a)
      mu_[a] = log_primary_ ? m.values[basis_.k1 + a - 1] : m.values[a - 1];
    for (int b = 1; b <= q_; ++b) mu_[p_ + b] = m.values[b - 1];

    if (q_ > 0) {
      warp_coeffs_.resize(q_);
      for (int b = 0; b < q_; ++b)
        warp_coeffs_[b] = interp_.coefficients(values_[1 + p_ + b]);
      warp_products_.assign(q_, std::vector<std::vector<double>>(q_));
      for (int a = 0; a < q_; ++a)
        for (int b = a; b < q_; ++b) {
          warp_products_[a][b] =
              cheb::multiply(warp_coeffs_[a], warp_coeffs_[b], 2 * n_);
          if (b != a) warp_products_[b][a] = warp_products_[a][b];
        }
    }

    f_.resize(n_ + 1);
  }

  int dim() const { return dim_; }
  const std::vector<double>& targets() const { return mu_; }

  // internal <-> external theta layout
  int external_index(int i) const {
    if (i == 0) return 0;
    if (!log_primary_) return i;
    if (i <= p_) return basis_.k1 + i;  // log family
    return i - p_;                      // standard family
  }

  // f(v) = exp(theta . m(v)) at the quadrature nodes. Returns false if the
  // exponent overflows anywhere.
  bool eval_density(const Eigen::VectorXd& theta) {
    for (int j = 0; j <= n_; ++j) {
      double z = theta[0];
      for (int i = 1; i < dim_; ++i) z += theta[i] * values_[i][j];
      if (!std::isfinite(z) || z > kExpArgLimit) return false;
      f_[j] = std::exp(z);
    }
    return true;
  }

  // Potential value at the current density (after eval_density).
  double potential(const Eigen::VectorXd& theta) const {
    double integral = 0.0;
    for (int j = 0; j <= n_; ++j) integral += weights_[j] * f_[j];
    double dot = 0.0;
    for (int i = 0; i < dim_; ++i) dot += theta[i] * mu_[i];
    return integral - dot;
  }

  // Gradient and Hessian via the degree-n expansion of f. Requires a prior
  // successful eval_density. Returns false on non-finite intermediates.
  bool derivatives(Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
    coeffs_ = interp_.coefficients(f_);
    G_.assign(m_need_ + 1, 0.0);
    for (int m = 0; m <= m_need_; ++m) {
      double acc = 0.0;
      for (int b = 0; b <= n_; ++b)
        acc += coeffs_[b] * 0.5 *
               (integrals_[m + b] + integrals_[std::abs(m - b)]);
      G_[m] = acc;
    }

    grad.resize(dim_);
    hess.resize(dim_, dim_);
    grad[0] = G_[0] - mu_[0];
    for (int a = 1; a <= p_; ++a) grad[a] = G_[a] - mu_[a];
    for (int b = 1; b <= q_; ++b) {
      double acc = 0.0;
      for (int m = 0; m <= n_; ++m) acc += warp_coeffs_[b - 1][m] * G_[m];
      grad[p_ + b] = acc - mu_[p_ + b];
    }

    hess(0, 0) = G_[0];
    for (int a = 1; a <= p_; ++a) hess(0, a) = hess(a, 0) = G_[a];
    for (int b = 1; b <= q_; ++b)
      hess(0, p_ + b) = hess(p_ + b, 0) = grad[p_ + b] + mu_[p_ + b];
    for (int a = 1; a <= p_; ++a)
      for (int a2 = a; a2 <= p_; ++a2)
        hess(a, a2) = hess(a2, a) = 0.5 * (G_[a + a2] + G_[std::abs(a - a2)]);
    for (int a = 1; a <= p_; ++a)
      for (int b = 1; b <= q_; ++b) {
        double acc = 0.0;
        for (int m = 0; m <= n_; ++m)
          acc += warp_coeffs_[b - 1][m] * 0.5 *
                 (G_[a + m] + G_[std::abs(a - m)]);
        hess(a, p_ + b) = hess(p_ + b, a) = acc;
      }
    for (int b = 1; b <= q_; ++b)
      for (int b2 = b; b2 <= q_; ++b2) {
        const auto& prod = warp_products_[b - 1][b2 - 1];
        double acc = 0.0;
        for (size_t m = 0; m < prod.size(); ++m) acc += prod[m] * G_[m];
        hess(p_ + b, p_ + b2) = hess(p_ + b2, p_ + b) = acc;
      }

    return grad.allFinite() && hess.allFinite();
  }

  const std::vector<double>& density_coeffs() const { return coeffs_; }
  double mass() const { return G_.empty() ? 0.0 : G_[0]; }

 private:
  BasisSpec basis_;
  bool log_primary_;
  int p_, q_, dim_, n_;
  int m_need_ = 0;
  std::vector<double> nodes_, weights_, integrals_;
  std::vector<std::vector<double>> values_;        // internal order
  std::vector<std::vector<double>> warp_coeffs_;   // expansions of warp funcs
  std::vector<std::vector<std::vector<double>>> warp_products_;
  cheb::Interpolator interp_;
  std::vector<double> mu_;
  std::vector<double> f_, coeffs_, G_;
};

}  // namespace

double hessian_condition_at_zero(const BasisSpec& basis, int quadrature_degree) {
  const auto nodes = cheb::nodes(quadrature_degree);
  const auto w = cheb::quadrature_weights(quadrature_degree);
  const auto funcs = basis_node_values(basis, nodes);
  const int d = static_cast<int>(funcs.size());
  Eigen::MatrixXd gram(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      double acc = 0.0;
      for (size_t j = 0; j < nodes.size(); ++j) acc += w[j] * funcs[a][j] * funcs[b][j];
      gram(a, b) = gram(b, a) = acc;
    }
  return condition_number(gram);
}

BasisSpec select_moment_counts(const ChebyshevMoments& full, const SolverConfig& cfg) {
  const BasisSpec& fb = full.basis;
  const int avail1 = fb.k1;
  const int avail2 = fb.log_valid ? fb.k2 : 0;

  const auto nodes = cheb::nodes(cfg.quadrature_degree);
  const auto w = cheb::quadrature_weights(cfg.quadrature_degree);

  // Gram matrices at theta = 0 for both possible primary geometries; greedy
  // candidates with k2 = 0 are judged in the data domain, others in the log
  // domain (matching how the solve would be set up).
  auto make_gram = [&](const BasisSpec& b) {
    const auto funcs = basis_node_values(b, nodes);
    const int d = static_cast<int>(funcs.size());
    Eigen::MatrixXd g(d, d);
    for (int a = 0; a < d; ++a)
      for (int c = a; c < d; ++c) {
        double acc = 0.0;
        for (size_t j = 0; j < nodes.size(); ++j)
          acc += w[j] * funcs[a][j] * funcs[c][j];
        g(a, c) = g(c, a) = acc;
      }
    return g;
  };

  BasisSpec std_only = fb;
  std_only.k1 = avail1;
  std_only.k2 = 0;
  const Eigen::MatrixXd gram_std = avail1 > 0 ? make_gram(std_only) : Eigen::MatrixXd();
  BasisSpec with_log = fb;
  with_log.k1 = avail1;
  with_log.k2 = avail2;
  const Eigen::MatrixXd gram_log = avail2 > 0 ? make_gram(with_log) : Eigen::MatrixXd();

  auto candidate_condition = [&](int k1, int k2) {
    if (k2 == 0) {
      Eigen::MatrixXd sub = gram_std.topLeftCorner(1 + k1, 1 + k1);
      return condition_number(sub);
    }
    std::vector<int> idx;
    idx.push_back(0);
    for (int a = 1; a <= k1; ++a) idx.push_back(a);
    for (int a = 1; a <= k2; ++a) idx.push_back(avail1 + a);
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b) sub(a, b) = gram_log(idx[a], idx[b]);
    return condition_number(sub);
  };

  int k1 = 0, k2 = 0;
  while (true) {
    struct Cand {
      double dist;
      bool is_log;
    };
    std::vector<Cand> cands;
    if (k1 < avail1)
      cands.push_back({std::abs(full.values[k1] - uniform_reference_moment(k1 + 1)),
                       false});
    if (k2 < avail2)
      cands.push_back(
          {std::abs(full.values[avail1 + k2] - uniform_reference_moment(k2 + 1)),
           true});
    if (cands.empty()) break;
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      return !a.is_log;  // ties prefer the standard moment
    });
    bool accepted = false;
    for (const Cand& c : cands) {
      const int n1 = k1 + (c.is_log ? 0 : 1);
      const int n2 = k2 + (c.is_log ? 1 : 0);
      if (candidate_condition(n1, n2) <= cfg.kappa_max) {
        k1 = n1;
        k2 = n2;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (k1 + k2 == 0) {
    if (avail1 > 0)
      k1 = 1;
    else
      k2 = 1;
  }

  BasisSpec sel = fb;
  sel.k1 = k1;
  sel.k2 = k2;
  return sel;
}

ChebyshevMoments restrict_moments(const ChebyshevMoments& full, const BasisSpec& sel) {
  if (sel.k1 > full.basis.k1 || sel.k2 > full.basis.k2)
    throw std::invalid_argument("restrict_moments: selection exceeds available order");
  ChebyshevMoments out;
  out.basis = sel;
  out.count = full.count;
  out.values.reserve(sel.total());
  for (int a = 0; a < sel.k1; ++a) out.values.push_back(full.values[a]);
  for (int a = 0; a < sel.k2; ++a) out.values.push_back(full.values[full.basis.k1 + a]);
  return out;
}

MaxEntDistribution point_mass_distribution(double value) {
  MaxEntDistribution d;
  d.point_mass_ = true;
  d.point_value_ = value;
  d.converged_ = true;
  d.basis_.x_min = d.basis_.x_max = value;
  return d;
}

MaxEntDistribution solve_maxent(const ChebyshevMoments& moments,
                                const SolverConfig& cfg) {
  NewtonProblem prob(moments, cfg);
  const int d = prob.dim();

  MaxEntDistribution out;
  out.basis_ = moments.basis;
  out.log_primary_ = moments.basis.k2 > 0;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd grad(d);
  Eigen::MatrixXd hess(d, d);

  bool ok = prob.eval_density(theta);
  double value = ok ? prob.potential(theta) : 0.0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iter = 0;

  while (ok && iter < cfg.max_iterations) {
    if (!prob.derivatives(grad, hess)) break;
    residual = grad.cwiseAbs().maxCoeff();
    if (residual <= cfg.moment_match_tol) {
      converged = true;
      break;
    }
    ++iter;

    // Newton direction, with a growing ridge if the Hessian is not
    // numerically positive definite.
    Eigen::VectorXd dir;
    {
      double ridge = 1e-10 * hess.trace() / d;
      bool solved = false;
      Eigen::MatrixXd h = hess;
      for (int attempt = 0; attempt <= 8; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(h);
        if (llt.info() == Eigen::Success) {
          dir = llt.solve(-grad);
          if (dir.allFinite()) {
            solved = true;
            break;
          }
        }
        h = hess + ridge * Eigen::MatrixXd::Identity(d, d);
        ridge *= 2.0;
      }
      if (!solved) break;
    }

    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      dir = -grad;
      slope = -grad.squaredNorm();
      if (!(slope < 0.0)) break;
    }

    double alpha = 1.0;
    bool stepped = false;
    for (int ls = 0; ls < cfg.ls_max_steps; ++ls) {
      Eigen::VectorXd trial = theta + alpha * dir;
      if (prob.eval_density(trial)) {
        const double trial_value = prob.potential(trial);
        if (std::isfinite(trial_value) &&
            trial_value <= value + cfg.ls_decrease * alpha * slope) {
          theta = trial;
          value = trial_value;
          stepped = true;
          break;
        }
      }
      alpha *= cfg.ls_shrink;
    }
    if (!stepped) break;
    // a successful step leaves the density evaluated at the new theta
  }

  // Refresh the expansion at the final iterate so the cached density is
  // consistent with theta, and re-verify convergence there.
  if (ok && prob.eval_density(theta) && prob.derivatives(grad, hess)) {
    residual = grad.cwiseAbs().maxCoeff();
    converged = residual <= cfg.moment_match_tol;
  } else {
    converged = false;
  }

  out.iterations_ = iter;
  out.residual_ = residual;
  out.converged_ = converged;
  out.theta_.assign(1 + moments.basis.total(), 0.0);
  for (int i = 0; i < d; ++i) out.theta_[prob.external_index(i)] = theta[i];

  if (converged) {
    out.mass_ = prob.mass();
    out.density_ = prob.density_coeffs();
    for (double& c : out.density_) c /= out.mass_;
    out.cdf_coeffs_ = cheb::antiderivative(out.density_);
    out.cdf_at_lo_ = cheb::eval_series(out.cdf_coeffs_, -1.0);
  }
  return out;
}

MaxEntDistribution estimate(const MomentsSketch& sketch, const SolverConfig& cfg) {
  if (sketch.empty()) throw std::invalid_argument("estimate: empty sketch");
  if (sketch.extrema_stale())
    throw std::invalid_argument("estimate: extrema are stale; call set_extrema");
  if (sketch.min() == sketch.max())
    return point_mass_distribution(sketch.min());

  int k1_cap = sketch.order();
  int k2_cap = sketch.order();
  if (cfg.apply_stability_cap) {
    const double c1 = (sketch.max() + sketch.min()) / (sketch.max() - sketch.min());
    k1_cap = std::min(k1_cap, max_stable_order(c1));
    if (sketch.min() > 0.0) {
      const double lmin = std::log(sketch.min());
      const double lmax = std::log(sketch.max());
      if (lmax > lmin) {
        const double c2 = (lmax + lmin) / (lmax - lmin);
        k2_cap = std::min(k2_cap, max_stable_order(c2));
      }
    }
  }
  const auto full = to_chebyshev_moments(sketch, k1_cap, k2_cap);
  const auto basis = select_moment_counts(full, cfg);
  return solve_maxent(restrict_moments(full, basis), cfg);
}

double estimate_quantile(const MaxEntDistribution& dist, double phi) {
  return dist.quantile(phi);
}

void MaxEntDistribution::require_converged() const {
  if (!converged_)
    throw EstimateUnavailable("maximum-entropy fit did not converge");
}

double MaxEntDistribution::cdf_unit(double v) const {
  const double raw = cheb::eval_series(cdf_coeffs_, std::clamp(v, -1.0, 1.0));
  return std::clamp(raw - cdf_at_lo_, 0.0, 1.0);
}

double MaxEntDistribution::pdf(double x) const {
  require_converged();
  if (point_mass_)
    return x == point_value_ ? std::numeric_limits<double>::infinity() : 0.0;
  if (x < basis_.x_min || x > basis_.x_max) return 0.0;
  x = std::clamp(x, basis_.x_min, basis_.x_max);
  double z = theta_[0];
  if (basis_.k1 > 0) {
    const double y = std::clamp(basis_.s1.to_unit(x), -1.0, 1.0);
    double prev = 1.0, cur = y;
    for (int a = 1; a <= basis_.k1; ++a) {
      z += theta_[a] * cur;
      const double next = 2.0 * y * cur - prev;
      prev = cur;
      cur = next;
    }
  }
  if (basis_.k2 > 0) {
    const double y = std::clamp(basis_.s2.to_unit(std::log(x)), -1.0, 1.0);
    double prev = 1.0, cur = y;
    for (int a = 1; a <= basis_.k2; ++a) {
      z += theta_[basis_.k1 + a] * cur;
      const double next = 2.0 * y * cur - prev;
      prev = cur;
      cur = next;
    }
  }
  const double jacobian = log_primary_
                              ? 1.0 / (basis_.s2.halfwidth * x)
                              : 1.0 / basis_.s1.halfwidth;
  return std::exp(z) / mass_ * jacobian;
}

double MaxEntDistribution::cdf(double x) const {
  require_converged();
  if (point_mass_) return x < point_value_ ? 0.0 : 1.0;
  if (x <= basis_.x_min) return 0.0;
  if (x >= basis_.x_max) return 1.0;
  const double v = log_primary_ ? basis_.s2.to_unit(std::log(x)) : basis_.s1.to_unit(x);
  return cdf_unit(v);
}

double MaxEntDistribution::quantile(double phi) const {
  require_converged();
  if (!(phi >= 0.0 && phi <= 1.0))
    throw std::invalid_argument("quantile: phi must be in [0, 1]");
  if (point_mass_) return point_value_;
  if (phi == 0.0) return basis_.x_min;
  if (phi == 1.0) return basis_.x_max;
  auto fn = [&](double v) { return cdf_unit(v) - phi; };
  const double fa = fn(-1.0), fb = fn(1.0);
  if (fa >= 0.0) return basis_.x_min;
  if (fb <= 0.0) return basis_.x_max;
  const double v = brent_root(fn, -1.0, 1.0, fa, fb, 1e-14, 1e-9);
  return log_primary_ ? std::exp(basis_.s2.from_unit(v)) : basis_.s1.from_unit(v);
}

namespace detail {

PotentialDerivatives potential_derivatives(const ChebyshevMoments& moments,
                                           const std::vector<double>& theta_ext,
                                           const SolverConfig& cfg) {
  NewtonProblem prob(moments, cfg);
  const int d = prob.dim();
  Eigen::VectorXd theta(d);
  for (int i = 0; i < d; ++i) theta[i] = theta_ext[prob.external_index(i)];
  PotentialDerivatives out;
  if (!prob.eval_density(theta)) return out;
  out.value = prob.potential(theta);
  Eigen::VectorXd g(d);
  Eigen::MatrixXd h(d, d);
  if (!prob.derivatives(g, h)) return out;
  out.gradient.assign(d, 0.0);
  out.hessian.assign(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) {
    out.gradient[prob.external_index(i)] = g[i];
    for (int j = 0; j < d; ++j)
      out.hessian[prob.external_index(i)][prob.external_index(j)] = h(i, j);
  }
  out.valid = true;
  return out;
}

double potential_value(const ChebyshevMoments& moments,
                       const std::vector<double>& theta_ext, const SolverConfig& cfg) {
  NewtonProblem prob(moments, cfg);
  const int d = prob.dim();
  Eigen::VectorXd theta(d);
  for (int i = 0; i < d; ++i) theta[i] = theta_ext[prob.external_index(i)];
  if (!prob.eval_density(theta)) return std::numeric_limits<double>::infinity();
  return prob.potential(theta);
}

}  // namespace detail

}  // namespace msk
