#pragma once

// Independent reference implementations used only by the test suites.
// Everything here is deliberately straight-line and long double so that a
// defect in the library cannot hide in a shared code path.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "geks/dataset.hpp"
#include "geks/matrix.hpp"

namespace oracle {

using ld = long double;
using ldvec = std::vector<ld>;

// row-major long double matrix
struct LdMat {
  std::size_t rows = 0, cols = 0;
  ldvec data;
  LdMat() = default;
  LdMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0L) {}
  ld& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  ld operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

inline LdMat to_ld(const geks::Matrix& m) {
  LdMat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline LdMat ld_matmul(const LdMat& a, const LdMat& b) {
  if (a.cols != b.rows) throw std::runtime_error("oracle matmul shape");
  LdMat c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const ld aik = a(i, k);
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline LdMat ld_transpose(const LdMat& m) {
  LdMat t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline ld ld_trace(const LdMat& m) {
  ld t = 0.0L;
  for (std::size_t i = 0; i < m.rows; ++i) t += m(i, i);
  return t;
}

// Gaussian elimination with partial pivoting; solves a x = b in place.
inline ldvec ld_solve(LdMat a, ldvec b) {
  const std::size_t n = a.rows;
  if (a.cols != n || b.size() != n) throw std::runtime_error("oracle solve shape");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0L) throw std::runtime_error("oracle solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const ld f = a(i, k) / a(k, k);
      if (f == 0.0L) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  ldvec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    ld acc = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= a(ii, j) * x[j];
    x[ii] = acc / a(ii, ii);
  }
  return x;
}

inline LdMat ld_inverse(const LdMat& a) {
  const std::size_t n = a.rows;
  LdMat inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    ldvec e(n, 0.0L);
    e[j] = 1.0L;
    const ldvec col = ld_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// ---------------------------------------------------------------------
// Logistic regression by plain Newton iteration in long double, started at
// zero; independent of the library's start, clamping and step control.
inline ldvec newton_logistic(const geks::Matrix& x, const std::vector<int>& y,
                             ld tol = 1e-14L, int max_iter = 200) {
  const std::size_t n = x.rows(), q = x.cols();
  ldvec beta(q, 0.0L);
  for (int iter = 0; iter < max_iter; ++iter) {
    ldvec grad(q, 0.0L);
    LdMat hess(q, q);
    for (std::size_t i = 0; i < n; ++i) {
      ld eta = 0.0L;
      for (std::size_t j = 0; j < q; ++j) eta += beta[j] * (ld)x(i, j);
      const ld mu = 1.0L / (1.0L + std::exp(-eta));
      const ld w = mu * (1.0L - mu);
      const ld r = (ld)y[i] - mu;
      for (std::size_t j = 0; j < q; ++j) {
        grad[j] += (ld)x(i, j) * r;
        for (std::size_t k = 0; k < q; ++k) hess(j, k) += w * (ld)x(i, j) * (ld)x(i, k);
      }
    }
    const ldvec delta = ld_solve(hess, grad);
    ld worst = 0.0L;
    for (std::size_t j = 0; j < q; ++j) {
      beta[j] += delta[j];
      worst = std::max(worst, std::fabs(delta[j]));
    }
    if (worst < tol) return beta;
  }
  throw std::runtime_error("oracle newton_logistic: no convergence");
}

inline ldvec logistic_mu(const geks::Matrix& x, const ldvec& beta) {
  ldvec mu(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    ld eta = 0.0L;
    for (std::size_t j = 0; j < x.cols(); ++j) eta += beta[j] * (ld)x(i, j);
    mu[i] = 1.0L / (1.0L + std::exp(-eta));
  }
  return mu;
}

// ---------------------------------------------------------------------
// Adaptive Simpson quadrature in long double.
namespace detail {
inline ld simpson(const std::function<ld(ld)>& f, ld a, ld b, ld fa, ld fm, ld fb) {
  return (b - a) / 6.0L * (fa + 4.0L * fm + fb);
}

inline ld adaptive_simpson(const std::function<ld(ld)>& f, ld a, ld b, ld fa, ld fm, ld fb,
                           ld whole, ld tol, int depth) {
  const ld m = 0.5L * (a + b);
  const ld lm = 0.5L * (a + m), rm = 0.5L * (m + b);
  const ld flm = f(lm), frm = f(rm);
  const ld left = simpson(f, a, m, fa, flm, fm);
  const ld right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0L * tol)
    return left + right + (left + right - whole) / 15.0L;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5L * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
}
}  // namespace detail

inline ld integrate(const std::function<ld(ld)>& f, ld a, ld b, ld tol = 1e-12L) {
  if (a == b) return 0.0L;
  const ld fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
  const ld whole = detail::simpson(f, a, b, fa, fm, fb);
  return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Lower regularized incomplete gamma by quadrature of the density. The
// substitution t = u^m with m >= 2/a keeps the integrand differentiable
// at zero for small shape parameters.
inline ld reg_lower_gamma_quad(ld a, ld x) {
  if (x <= 0.0L) return 0.0L;
  const int m = std::max(1, (int)std::ceil((double)(2.0L / a)));
  const ld mm = (ld)m;
  auto g = [&](ld u) -> ld {
    if (u <= 0.0L) return 0.0L;
    const ld t = std::pow(u, mm);
    return mm * std::pow(u, mm * a - 1.0L) * std::exp(-t);
  };
  const ld upper = std::pow(x, 1.0L / mm);
  const ld integral = integrate(g, 0.0L, upper, 1e-14L);
  return integral / std::tgamma(a);
}

// Upper tail by quadrature on [x, cutoff].
inline ld reg_upper_gamma_quad(ld a, ld x) {
  auto g = [&](ld t) -> ld { return std::pow(t, a - 1.0L) * std::exp(-t); };
  const ld cutoff = x + 60.0L + 10.0L * a;
  return integrate(g, x, cutoff, 1e-14L) / std::tgamma(a);
}

inline ld chi2_cdf_quad(ld x, ld dof) { return reg_lower_gamma_quad(0.5L * dof, 0.5L * x); }

// ---------------------------------------------------------------------
// Central-difference Hessian of a scalar function of several variables.
inline LdMat fd_hessian(const std::function<ld(const ldvec&)>& f, const ldvec& theta0, ld h) {
  const std::size_t d = theta0.size();
  LdMat hess(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j; k < d; ++k) {
      ldvec t = theta0;
      auto eval = [&](ld dj, ld dk) {
        t = theta0;
        t[j] += dj;
        t[k] += dk;
        return f(t);
      };
      ld v;
      if (j == k) {
        const ld f0 = f(theta0);
        v = (eval(h, 0) - 2.0L * f0 + eval(-h, 0)) / (h * h);
      } else {
        v = (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h)) / (4.0L * h * h);
      }
      hess(j, k) = hess(k, j) = v;
    }
  return hess;
}

// Log-likelihood of the full interaction model at theta = (beta, a, b).
inline ld full_model_loglik(const geks::Dataset& data, const ldvec& theta) {
  const std::size_t q = data.q(), p = data.p();
  ld ll = 0.0L;
  for (std::size_t i = 0; i < data.n(); ++i) {
    ld eta = 0.0L;
    for (std::size_t j = 0; j < q; ++j) eta += theta[j] * (ld)data.x()(i, j);
    for (std::size_t j = 0; j < p; ++j)
      eta += (ld)data.z()(i, j) *
             (theta[q + j] + (ld)data.s()[i] * theta[q + p + j]);
    // stable log(1 + e^eta)
    const ld lse = eta > 35.0L ? eta : std::log1p(std::exp(eta));
    ll += (ld)data.y()[i] * eta - lse;
  }
  return ll;
}

// Closed-form inverse square root of a 2x2 symmetric matrix, long double.
inline LdMat inv_sqrt_2x2(ld a, ld b, ld c) {
  const ld mid = 0.5L * (a + c);
  const ld rad = std::sqrt(0.25L * (a - c) * (a - c) + b * b);
  const ld l1 = mid + rad, l2 = mid - rad;
  if (l2 <= 0.0L) throw std::runtime_error("oracle inv_sqrt_2x2: not positive definite");
  const ld i1 = 1.0L / std::sqrt(l1), i2 = 1.0L / std::sqrt(l2);
  LdMat r(2, 2);
  if (rad == 0.0L) {
    r(0, 0) = r(1, 1) = i1;
    return r;
  }
  ld v0 = b, v1 = l1 - a;
  const ld w0 = l1 - c, w1 = b;
  if (w0 * w0 + w1 * w1 > v0 * v0 + v1 * v1) {
    v0 = w0;
    v1 = w1;
  }
  const ld nrm = std::sqrt(v0 * v0 + v1 * v1);
  const ld cs = v0 / nrm, sn = v1 / nrm;
  r(0, 0) = cs * cs * i1 + sn * sn * i2;
  r(1, 1) = sn * sn * i1 + cs * cs * i2;
  r(0, 1) = r(1, 0) = cs * sn * (i1 - i2);
  return r;
}

}  // namespace oracle
