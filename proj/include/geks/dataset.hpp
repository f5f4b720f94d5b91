#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "geks/errors.hpp"
#include "geks/matrix.hpp"

namespace geks {

// Case/control cohort. X carries an all-ones intercept in column 0 and must
// contain the environment vector s as one of its columns; Z holds one row of
// genotype dosages per individual.
class Dataset {
 public:
  Dataset(std::vector<int> y, Matrix x, std::vector<double> s, Matrix z)
      : y_(std::move(y)), x_(std::move(x)), s_(std::move(s)), z_(std::move(z)) {
    const std::size_t n = y_.size();
    if (n == 0) throw DimensionMismatch("dataset is empty");
    if (x_.rows() != n || s_.size() != n || z_.rows() != n)
      throw DimensionMismatch("y, X, s, Z must agree on the number of individuals (n=" +
                              std::to_string(n) + ", X rows=" + std::to_string(x_.rows()) +
                              ", s=" + std::to_string(s_.size()) +
                              ", Z rows=" + std::to_string(z_.rows()) + ")");
    if (x_.cols() == 0) throw DimensionMismatch("X must have at least the intercept column");

    bool any_case = false, any_control = false;
    for (int yi : y_) {
      if (yi != 0 && yi != 1) throw InvalidParameter("outcomes must be 0 or 1");
      (yi == 1 ? any_case : any_control) = true;
    }
    if (!any_case || !any_control)
      throw ConstantOutcome("outcome vector must contain both cases and controls");

    if (!x_.all_finite() || !z_.all_finite())
      throw InvalidParameter("covariates and genotypes must be finite");
    for (double v : s_)
      if (!std::isfinite(v)) throw InvalidParameter("environment values must be finite");

    for (std::size_t i = 0; i < n; ++i)
      if (x_(i, 0) != 1.0)
        throw InvalidParameter("X column 0 must be an all-ones intercept");

    env_col_ = find_env_column();
  }

  std::size_t n() const { return y_.size(); }
  std::size_t q() const { return x_.cols(); }
  std::size_t p() const { return z_.cols(); }

  const std::vector<int>& y() const { return y_; }
  const Matrix& x() const { return x_; }
  const std::vector<double>& s() const { return s_; }
  const Matrix& z() const { return z_; }
  std::size_t env_col() const { return env_col_; }

  // y - mu as doubles.
  std::vector<double> residuals(const std::vector<double>& mu) const {
    std::vector<double> r(n());
    for (std::size_t i = 0; i < n(); ++i) r[i] = static_cast<double>(y_[i]) - mu[i];
    return r;
  }

 private:
  std::size_t find_env_column() const {
    for (std::size_t j = 0; j < x_.cols(); ++j) {
      bool match = true;
      for (std::size_t i = 0; i < n(); ++i)
        if (x_(i, j) != s_[i]) {
          match = false;
          break;
        }
      if (match) return j;
    }
    throw InvalidParameter("X must contain the environment vector s as a column");
  }

  std::vector<int> y_;
  Matrix x_;
  std::vector<double> s_;
  Matrix z_;
  std::size_t env_col_ = 0;
};

}  // namespace geks
