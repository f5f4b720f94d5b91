#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "geks/dataset.hpp"
#include "geks/errors.hpp"
#include "geks/matrix.hpp"

namespace geks {

struct IrlsOptions {
  std::size_t max_iter = 100;
  double tol = 1e-10;  // max abs coefficient change
};

// Fitted covariates-only logistic model and the derived quantities both
// tests consume: mu0 (fitted probabilities), d1 = mu0*(1-mu0),
// d2 = s*d1, and the weighted projection P0 that removes the covariate
// directions.
struct NullFit {
  std::vector<double> beta;
  std::vector<double> mu0;
  std::vector<double> d1;
  std::vector<double> d2;
  Matrix p0;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

constexpr double kMuClamp = 1e-10;
constexpr double kBetaBound = 1e3;

inline double log1pexp(double x) {
  if (x > 35.0) return x;          // log(1+e^x) = x to double precision
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

inline double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

inline double bernoulli_loglik(const std::vector<int>& y, const std::vector<double>& eta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    ll += static_cast<double>(y[i]) * eta[i] - log1pexp(eta[i]);
  return ll;
}

}  // namespace detail

// P0 = W0 - W0 X (X' W0 X)^-1 X' W0 with W0 = diag(d1). Symmetric PSD and
// annihilates the columns of X.
inline Matrix build_p0(const Dataset& data, const std::vector<double>& mu0,
                       const std::vector<double>& d1) {
  const std::size_t n = data.n();
  if (mu0.size() != n || d1.size() != n)
    throw DimensionMismatch("build_p0: mu0/d1 length must equal n");
  for (double m : mu0)
    if (!(m > 0.0 && m < 1.0))
      throw InvalidParameter("build_p0: fitted probabilities must lie in (0,1)");

  const Matrix& x = data.x();
  // a = W0 X
  Matrix a(n, data.q());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < data.q(); ++j) a(i, j) = d1[i] * x(i, j);

  const Matrix xtwx = weighted_gram(x, d1);
  const SpdFactor f = spd_factor(xtwx);  // NotPositiveDefinite => collinear X
  const Matrix b = f.solve_matrix(transpose(a));  // (X'W0X)^-1 (W0X)'

  Matrix p0 = matmul(a, b);
  for (auto& v : p0.data()) v = -v;
  for (std::size_t i = 0; i < n; ++i) p0(i, i) += d1[i];
  // enforce exact symmetry against accumulation order differences
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (p0(i, j) + p0(j, i));
      p0(i, j) = p0(j, i) = avg;
    }
  return p0;
}

// Maximum likelihood fit of logit(p_i) = x_i' beta by Newton iteration with
// step halving. Deterministic: beta starts at zero with the intercept at
// logit(mean(y)).
inline NullFit fit_null(const Dataset& data, const IrlsOptions& opts = {}) {
  const std::size_t n = data.n();
  const std::size_t q = data.q();
  const Matrix& x = data.x();
  const std::vector<int>& y = data.y();

  if (numerical_rank(x) < q)
    throw RankDeficientCovariates("fit_null: covariate matrix is rank deficient (rank " +
                                  std::to_string(numerical_rank(x)) + " < q=" +
                                  std::to_string(q) + ")");

  double ybar = 0.0;
  for (int yi : y) ybar += yi;
  ybar /= static_cast<double>(n);

  std::vector<double> beta(q, 0.0);
  beta[0] = std::log(ybar / (1.0 - ybar));

  std::vector<double> eta = matvec(x, beta);
  double ll = detail::bernoulli_loglik(y, eta);

  std::vector<double> mu(n), w(n);
  NullFit fit;
  for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      mu[i] = std::clamp(detail::logistic(eta[i]), detail::kMuClamp, 1.0 - detail::kMuClamp);
      w[i] = mu[i] * (1.0 - mu[i]);
    }
    // score and information
    std::vector<double> grad(q, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = static_cast<double>(y[i]) - mu[i];
      for (std::size_t j = 0; j < q; ++j) grad[j] += x(i, j) * r;
    }
    const SpdFactor h = spd_factor(weighted_gram(x, w));
    const std::vector<double> delta = h.solve(grad);

    // step halving if the full Newton step lowers the log-likelihood
    double step = 1.0;
    std::vector<double> beta_new(q), eta_new;
    double ll_new = 0.0;
    for (int halving = 0; halving <= 20; ++halving) {
      for (std::size_t j = 0; j < q; ++j) beta_new[j] = beta[j] + step * delta[j];
      eta_new = matvec(x, beta_new);
      ll_new = detail::bernoulli_loglik(y, eta_new);
      if (ll_new >= ll - 1e-10 * (1.0 + std::abs(ll))) break;
      step *= 0.5;
    }

    double max_change = 0.0;
    for (std::size_t j = 0; j < q; ++j)
      max_change = std::max(max_change, std::abs(step * delta[j]));

    beta = beta_new;
    eta = std::move(eta_new);
    ll = ll_new;
    fit.iterations = iter;
    if (max_change < opts.tol) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged)
    throw ConvergenceFailure("fit_null: no convergence after " +
                             std::to_string(opts.max_iter) + " iterations");

  for (double b : beta)
    if (std::abs(b) > detail::kBetaBound)
      throw PerfectSeparation("fit_null: coefficient magnitude " + std::to_string(std::abs(b)) +
                              " exceeds " + std::to_string(detail::kBetaBound));

  fit.beta = beta;
  fit.mu0.resize(n);
  fit.d1.resize(n);
  fit.d2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = detail::logistic(eta[i]);
    if (m <= detail::kMuClamp || m >= 1.0 - detail::kMuClamp)
      throw PerfectSeparation("fit_null: fitted probability pinned at clamp bound for row " +
                              std::to_string(i));
    fit.mu0[i] = m;
    fit.d1[i] = m * (1.0 - m);
    fit.d2[i] = data.s()[i] * fit.d1[i];
  }
  fit.p0 = build_p0(data, fit.mu0, fit.d1);
  return fit;
}

}  // namespace geks
