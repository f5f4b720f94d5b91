#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "geks/dataset.hpp"
#include "geks/errors.hpp"
#include "geks/matrix.hpp"
#include "geks/null_model.hpp"
#include "geks/rng.hpp"

namespace geks {

enum class EnvKind { bernoulli, standard_normal };

// Generative model: Z_ij ~ Binomial(2, maf_j), s from the environment law,
// extra covariates standard normal, and
//   y_i ~ Bernoulli(logistic(x_i' beta + a'z_i + s_i b'z_i)).
// X is [intercept, s, q-2 normal covariates]. Deterministic given the seed:
// four child streams (genotypes, environment, covariates, outcomes) are
// derived from it and consumed in row-major order.
struct SimConfig {
  std::size_t n = 0;
  std::size_t q = 2;  // includes intercept and environment columns
  std::size_t p = 0;
  std::vector<double> beta;  // length q
  std::vector<double> a;     // length p; zero under the null
  std::vector<double> b;     // length p; zero under the null
  std::vector<double> maf;   // length p, each in (0, 0.5]
  EnvKind env = EnvKind::bernoulli;
  double env_pi = 0.5;  // Bernoulli environment parameter
  std::uint64_t seed = 0;
};

inline void validate(const SimConfig& cfg) {
  if (cfg.n < 2) throw InvalidConfig("simulate: n must be at least 2");
  if (cfg.q < 2) throw InvalidConfig("simulate: q must be at least 2 (intercept and environment)");
  if (cfg.p == 0) throw InvalidConfig("simulate: p must be positive");
  if (cfg.beta.size() != cfg.q)
    throw InvalidConfig("simulate: beta must have length q=" + std::to_string(cfg.q));
  if (cfg.a.size() != cfg.p || cfg.b.size() != cfg.p)
    throw InvalidConfig("simulate: a and b must have length p=" + std::to_string(cfg.p));
  if (cfg.maf.size() != cfg.p)
    throw InvalidConfig("simulate: maf must have length p=" + std::to_string(cfg.p));
  for (double m : cfg.maf)
    if (!(m > 0.0 && m <= 0.5))
      throw InvalidConfig("simulate: minor allele frequencies must lie in (0, 0.5]");
  if (cfg.env == EnvKind::bernoulli && !(cfg.env_pi > 0.0 && cfg.env_pi < 1.0))
    throw InvalidConfig("simulate: Bernoulli environment parameter must lie in (0, 1)");
  for (double v : cfg.beta)
    if (!std::isfinite(v)) throw InvalidConfig("simulate: beta must be finite");
  for (double v : cfg.a)
    if (!std::isfinite(v)) throw InvalidConfig("simulate: a must be finite");
  for (double v : cfg.b)
    if (!std::isfinite(v)) throw InvalidConfig("simulate: b must be finite");
}

inline Dataset simulate(const SimConfig& cfg) {
  validate(cfg);
  rng::Stream geno(rng::child_seed(cfg.seed, 0));
  rng::Stream env(rng::child_seed(cfg.seed, 1));
  rng::Stream covs(rng::child_seed(cfg.seed, 2));
  rng::Stream outc(rng::child_seed(cfg.seed, 3));

  Matrix z(cfg.n, cfg.p);
  for (std::size_t i = 0; i < cfg.n; ++i)
    for (std::size_t j = 0; j < cfg.p; ++j)
      z(i, j) = static_cast<double>(geno.next_binomial2(cfg.maf[j]));

  std::vector<double> s(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i)
    s[i] = cfg.env == EnvKind::bernoulli ? (env.next_bernoulli(cfg.env_pi) ? 1.0 : 0.0)
                                         : env.next_normal();

  Matrix x(cfg.n, cfg.q);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = s[i];
    for (std::size_t j = 2; j < cfg.q; ++j) x(i, j) = covs.next_normal();
  }

  std::vector<int> y(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < cfg.q; ++j) eta += x(i, j) * cfg.beta[j];
    for (std::size_t j = 0; j < cfg.p; ++j)
      eta += z(i, j) * (cfg.a[j] + s[i] * cfg.b[j]);
    y[i] = outc.next_bernoulli(detail::logistic(eta)) ? 1 : 0;
  }

  return Dataset(std::move(y), std::move(x), std::move(s), std::move(z));
}

}  // namespace geks
