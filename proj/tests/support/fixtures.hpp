#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include "geks/dataset.hpp"
#include "geks/matrix.hpp"
#include "geks/rng.hpp"
#include "geks/simulate.hpp"

namespace fixtures {

// Hand-made n=8, q=2, p=2 worked example: continuous environment, balanced
// outcome, no separation, [Z, s.Z] of full rank 4.
inline geks::Dataset worked_n8() {
  const std::vector<int> y{1, 0, 1, 0, 0, 1, 0, 1};
  const std::vector<double> s{0.5, -0.3, 1.2, 0.0, -0.7, 0.9, 0.4, -1.1};
  geks::Matrix x(8, 2);
  for (std::size_t i = 0; i < 8; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = s[i];
  }
  const geks::Matrix z{{0, 1}, {1, 0}, {2, 1}, {0, 0}, {1, 2}, {2, 2}, {1, 1}, {0, 2}};
  return geks::Dataset(y, x, s, z);
}

// Seeded null cohort with mild covariate effects (used where a specific
// shape is needed but the values are immaterial).
inline geks::Dataset simulated(std::size_t n, std::size_t q, std::size_t p,
                               std::uint64_t seed, geks::EnvKind env = geks::EnvKind::bernoulli,
                               double beta0 = -0.4, double beta_s = 0.5) {
  geks::SimConfig cfg;
  cfg.n = n;
  cfg.q = q;
  cfg.p = p;
  cfg.seed = seed;
  cfg.beta.assign(q, 0.0);
  cfg.beta[0] = beta0;
  cfg.beta[1] = beta_s;
  for (std::size_t j = 2; j < q; ++j) cfg.beta[j] = 0.25;
  cfg.a.assign(p, 0.0);
  cfg.b.assign(p, 0.0);
  cfg.maf.resize(p);
  for (std::size_t j = 0; j < p; ++j) cfg.maf[j] = 0.15 + 0.3 * (double(j % 3) / 2.0);
  cfg.env = env;
  return geks::simulate(cfg);
}

// Deterministic balanced cohort for moment validation: alternating +/-1
// environment, a fixed number of cases in each environment group (so the
// fitted interaction is exactly zero and the weights are constant), and
// genotypes drawn once from the given seed.
inline geks::Dataset balanced_pm1(std::size_t n, std::size_t cases_per_group,
                                  const std::vector<double>& mafs, std::uint64_t zseed) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (i % 2 == 0) ? 1.0 : -1.0;

  std::vector<int> y(n, 0);
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] > 0 && pos < cases_per_group) {
      y[i] = 1;
      ++pos;
    } else if (s[i] < 0 && neg < cases_per_group) {
      y[i] = 1;
      ++neg;
    }
  }

  geks::Matrix x(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = s[i];
  }

  geks::rng::Stream geno(geks::rng::child_seed(zseed, 0));
  geks::Matrix z(n, mafs.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < mafs.size(); ++j)
      z(i, j) = static_cast<double>(geno.next_binomial2(mafs[j]));

  return geks::Dataset(y, x, s, z);
}

// Random dense matrix with entries uniform in [lo, hi).
inline geks::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                  double lo = -1.0, double hi = 1.0) {
  geks::rng::Stream stream(seed);
  geks::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = lo + (hi - lo) * stream.next_uniform();
  return m;
}

// Random symmetric positive definite matrix A A' + ridge I.
inline geks::Matrix random_spd(std::size_t n, std::uint64_t seed, double ridge = 0.05) {
  const geks::Matrix a = random_matrix(n, n, seed);
  geks::Matrix m = geks::matmul(a, geks::transpose(a));
  for (std::size_t i = 0; i < n; ++i) m(i, i) += ridge;
  return m;
}

}  // namespace fixtures
