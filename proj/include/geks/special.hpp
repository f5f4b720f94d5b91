#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "geks/errors.hpp"

namespace geks {

// Chi-square degrees of freedom. Fractional values are first-class: the
// moment-matched surrogates use nu = 2 * mu*^2, which is rarely integral.
struct ChiSquareParams {
  double dof;
  explicit ChiSquareParams(double d) : dof(d) {
    if (!std::isfinite(d) || d <= 0.0)
      throw InvalidParameter("chi-square dof must be positive and finite, got " +
                             std::to_string(d));
  }
};

namespace detail {

constexpr int kGammaMaxIter = 500;
constexpr double kGammaEps = 1e-16;

// Lower regularized gamma by power series, valid and fast for x < a + 1.
inline double gamma_series(double a, double x, double log_prefactor) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n <= kGammaMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps)
      return sum * std::exp(log_prefactor);
  }
  throw ConvergenceFailure("regularized gamma series did not converge (a=" +
                           std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

// Upper regularized gamma by continued fraction (modified Lentz), for x >= a + 1.
inline double gamma_contfrac(double a, double x, double log_prefactor) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kGammaEps) return std::exp(log_prefactor) * h;
  }
  throw ConvergenceFailure("regularized gamma continued fraction did not converge (a=" +
                           std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

}  // namespace detail

// P(a, x) = gamma(a, x) / Gamma(a), the lower regularized incomplete gamma.
inline double reg_lower_gamma(double a, double x) {
  if (!std::isfinite(a) || !std::isfinite(x) || a <= 0.0 || x < 0.0)
    throw InvalidParameter("reg_lower_gamma requires a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  double p;
  if (x < a + 1.0)
    p = detail::gamma_series(a, x, log_prefactor);
  else
    p = 1.0 - detail::gamma_contfrac(a, x, log_prefactor);
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

inline double chi2_cdf(double x, const ChiSquareParams& params) {
  if (!std::isfinite(x) || x < 0.0)
    throw InvalidParameter("chi2_cdf requires x >= 0, got " + std::to_string(x));
  return reg_lower_gamma(0.5 * params.dof, 0.5 * x);
}

inline double chi2_sf(double x, const ChiSquareParams& params) {
  return 1.0 - chi2_cdf(x, params);
}

}  // namespace geks
