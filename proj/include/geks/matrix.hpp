#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geks/errors.hpp"

namespace geks {

// Dense row-major matrix of doubles. Constructors taking data reject
// NaN/Inf entries; element access is unchecked.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionMismatch("matrix data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    for (double v : data_)
      if (!std::isfinite(v)) throw InvalidParameter("matrix entries must be finite");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged initializer list");
      for (double v : r) {
        if (!std::isfinite(v)) throw InvalidParameter("matrix entries must be finite");
        data_.push_back(v);
      }
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_.data() + i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_.data() + i * cols_, cols_);
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double max_abs(const Matrix& m) {
  double v = 0.0;
  for (double x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matmul: " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " times " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = &c(i, 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = &b(k, 0);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

inline Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

inline std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  if (m.cols() != x.size()) throw DimensionMismatch("matvec: incompatible sizes");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    const double* mi = &m(i, 0);
    for (std::size_t j = 0; j < m.cols(); ++j) acc += mi[j] * x[j];
    y[i] = acc;
  }
  return y;
}

// A' diag(w) A without materialising the weighted copy.
inline Matrix weighted_gram(const Matrix& a, std::span<const double> w) {
  if (a.rows() != w.size()) throw DimensionMismatch("weighted_gram: weight length");
  const std::size_t k = a.cols();
  Matrix g(k, k);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double wi = w[i];
    const double* ai = &a(i, 0);
    for (std::size_t r = 0; r < k; ++r) {
      const double wr = wi * ai[r];
      for (std::size_t c = r; c < k; ++c) g(r, c) += wr * ai[c];
    }
  }
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < r; ++c) g(r, c) = g(c, r);
  return g;
}

// A' diag(w) B
inline Matrix weighted_cross(const Matrix& a, const Matrix& b, std::span<const double> w) {
  if (a.rows() != b.rows() || a.rows() != w.size())
    throw DimensionMismatch("weighted_cross: row counts");
  Matrix g(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double wi = w[i];
    const double* ai = &a(i, 0);
    const double* bi = &b(i, 0);
    for (std::size_t r = 0; r < a.cols(); ++r) {
      const double wr = wi * ai[r];
      for (std::size_t c = 0; c < b.cols(); ++c) g(r, c) += wr * bi[c];
    }
  }
  return g;
}

// tr(A B) = sum_ij A_ij B_ji, without forming the product.
inline double trace_prod(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || b.cols() != a.rows())
    throw DimensionMismatch("trace_prod: shapes must be k x m and m x k");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * b(j, i);
  return acc;
}

// Cholesky factor of a symmetric positive definite matrix; solves share the
// factorisation. Reconstruction l() * l()' equals the input up to roundoff.
class SpdFactor {
 public:
  SpdFactor(std::size_t dim, std::vector<double> lower)
      : dim_(dim), l_(std::move(lower)) {}

  std::size_t dimension() const { return dim_; }

  // Lower-triangular factor as a dense matrix (upper part zero).
  Matrix lower() const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = l_[i * dim_ + j];
    return m;
  }

  // Solve m x = b where m = L L'.
  std::vector<double> solve(std::span<const double> b) const {
    if (b.size() != dim_) throw DimensionMismatch("SpdFactor::solve: rhs length");
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = x[i];
      for (std::size_t j = 0; j < i; ++j) acc -= l_[i * dim_ + j] * x[j];
      x[i] = acc / l_[i * dim_ + i];
    }
    for (std::size_t ii = dim_; ii-- > 0;) {
      double acc = x[ii];
      for (std::size_t j = ii + 1; j < dim_; ++j) acc -= l_[j * dim_ + ii] * x[j];
      x[ii] = acc / l_[ii * dim_ + ii];
    }
    return x;
  }

  // Solve m X = B column by column.
  Matrix solve_matrix(const Matrix& b) const {
    if (b.rows() != dim_) throw DimensionMismatch("SpdFactor::solve_matrix: rhs rows");
    Matrix x(dim_, b.cols());
    std::vector<double> col(dim_);
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t i = 0; i < dim_; ++i) col[i] = b(i, j);
      std::vector<double> sol = solve(col);
      for (std::size_t i = 0; i < dim_; ++i) x(i, j) = sol[i];
    }
    return x;
  }

 private:
  std::size_t dim_;
  std::vector<double> l_;  // row-major, lower triangle used
};

namespace detail {
inline void require_symmetric(const Matrix& m, double tol, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(what) + ": matrix must be square");
  const double scale = std::max(1.0, max_abs(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol * scale)
        throw InvalidParameter(std::string(what) + ": matrix is not symmetric");
}
}  // namespace detail

inline SpdFactor spd_factor(const Matrix& m) {
  detail::require_symmetric(m, 1e-10, "spd_factor");
  const std::size_t n = m.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, m(i, i));
  const double pivot_floor =
      static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;

  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (d <= pivot_floor)
      throw NotPositiveDefinite("spd_factor: pivot " + std::to_string(d) +
                                " at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = m(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = acc / ljj;
    }
  }
  return SpdFactor(n, std::move(l));
}

// Rank by Householder QR with column pivoting; a diagonal of R counts as
// nonzero iff its magnitude exceeds tol (default: max(rows, cols) * eps *
// largest diagonal magnitude).
inline std::size_t numerical_rank(const Matrix& m, std::optional<double> tol = std::nullopt) {
  const std::size_t r = m.rows(), c = m.cols();
  if (r == 0 || c == 0) return 0;
  Matrix a = m;
  const std::size_t steps = std::min(r, c);
  std::vector<double> rdiag;
  rdiag.reserve(steps);

  for (std::size_t k = 0; k < steps; ++k) {
    // pivot: column with largest remaining norm
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < c; ++j) {
      double nrm = 0.0;
      for (std::size_t i = k; i < r; ++i) nrm += a(i, j) * a(i, j);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = j;
      }
    }
    if (best != k)
      for (std::size_t i = 0; i < r; ++i) std::swap(a(i, k), a(i, best));

    double sigma = 0.0;
    for (std::size_t i = k; i < r; ++i) sigma += a(i, k) * a(i, k);
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) {
      rdiag.push_back(0.0);
      continue;
    }
    const double alpha = a(k, k) >= 0.0 ? -sigma : sigma;
    // Householder vector v = x - alpha e1, stored in place of column k
    a(k, k) -= alpha;
    double vtv = 0.0;
    for (std::size_t i = k; i < r; ++i) vtv += a(i, k) * a(i, k);
    if (vtv > 0.0) {
      const double beta = 2.0 / vtv;
      for (std::size_t j = k + 1; j < c; ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < r; ++i) dot += a(i, k) * a(i, j);
        const double f = beta * dot;
        for (std::size_t i = k; i < r; ++i) a(i, j) -= f * a(i, k);
      }
    }
    rdiag.push_back(std::abs(alpha));
  }

  double largest = 0.0;
  for (double d : rdiag) largest = std::max(largest, d);
  const double threshold =
      tol ? *tol
          : static_cast<double>(std::max(r, c)) *
                std::numeric_limits<double>::epsilon() * largest;
  std::size_t rank = 0;
  for (double d : rdiag)
    if (d > threshold) ++rank;
  return rank;
}

// Inverse square root of a 2x2 symmetric positive definite matrix via its
// closed-form eigendecomposition. Result R satisfies R m R = I.
inline Matrix sym_inv_sqrt_2x2(const Matrix& m, double tol) {
  if (m.rows() != 2 || m.cols() != 2)
    throw DimensionMismatch("sym_inv_sqrt_2x2: matrix must be 2x2");
  detail::require_symmetric(m, 1e-10, "sym_inv_sqrt_2x2");

  const double a = m(0, 0), c = m(1, 1);
  const double b = 0.5 * (m(0, 1) + m(1, 0));
  const double mid = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  const double lmax = mid + rad;
  const double lmin = mid - rad;
  if (lmax <= 0.0 || lmin <= tol * lmax)
    throw DegenerateCovariance("sym_inv_sqrt_2x2: eigenvalues " + std::to_string(lmin) +
                               ", " + std::to_string(lmax) + " are degenerate");

  const double imax = 1.0 / std::sqrt(lmax);
  const double imin = 1.0 / std::sqrt(lmin);
  if (rad == 0.0) {
    Matrix r(2, 2);
    r(0, 0) = r(1, 1) = imax;
    return r;
  }
  // eigenvector for lmax; pick the better-conditioned expression
  double v0 = b, v1 = lmax - a;
  const double w0 = lmax - c, w1 = b;
  if (w0 * w0 + w1 * w1 > v0 * v0 + v1 * v1) {
    v0 = w0;
    v1 = w1;
  }
  const double nrm = std::hypot(v0, v1);
  const double cs = v0 / nrm, sn = v1 / nrm;

  Matrix r(2, 2);
  r(0, 0) = cs * cs * imax + sn * sn * imin;
  r(1, 1) = sn * sn * imax + cs * cs * imin;
  r(0, 1) = r(1, 0) = cs * sn * (imax - imin);
  return r;
}

}  // namespace geks
