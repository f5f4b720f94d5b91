#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "geks/dataset.hpp"
#include "geks/ge_score.hpp"
#include "geks/km_test.hpp"
#include "geks/null_model.hpp"
#include "geks/simulate.hpp"
#include "geks/special.hpp"

namespace geks {

constexpr std::array<double, 3> kCalibrationAlphas{0.01, 0.05, 0.1};

enum class WhichTest { score, kernel, both };

// Replicated null simulation; every replicate draws its own cohort from the
// index-derived seed, so results do not depend on the worker count.
struct CalibrateConfig {
  std::size_t n = 500;
  std::size_t q = 2;
  std::size_t p = 3;
  std::size_t reps = 2000;
  std::uint64_t seed = 0;
  WhichTest which = WhichTest::both;
  std::vector<double> maf;  // broadcast of 0.3 when empty
  EnvKind env = EnvKind::bernoulli;
  double env_pi = 0.5;
  std::optional<double> rank_tol;
  std::size_t threads = 1;
};

struct TestCalibration {
  std::array<double, 3> rejection{};  // at kCalibrationAlphas
  std::size_t completed = 0;
  std::size_t failed = 0;
};

struct CalibrationReport {
  std::optional<TestCalibration> score;
  std::optional<TestCalibration> kernel;
  double ks_score = 0.0;   // KS distance of the score statistic against chi-square(dof)
  std::size_t score_dof = 0;
  bool score_dof_varies = false;
  double elapsed_seconds = 0.0;
};

namespace detail {

struct ReplicateOutcome {
  std::optional<double> score_p;
  std::optional<double> score_ss;
  std::size_t score_dof = 0;
  std::optional<double> kernel_p;
};

inline ReplicateOutcome run_replicate(const CalibrateConfig& cfg, std::uint64_t rep) {
  SimConfig sim;
  sim.n = cfg.n;
  sim.q = cfg.q;
  sim.p = cfg.p;
  sim.beta.assign(cfg.q, 0.0);
  sim.a.assign(cfg.p, 0.0);
  sim.b.assign(cfg.p, 0.0);
  sim.maf = cfg.maf;
  sim.env = cfg.env;
  sim.env_pi = cfg.env_pi;
  sim.seed = rng::child_seed(cfg.seed, rep);

  ReplicateOutcome out;
  std::optional<Dataset> data;
  std::optional<NullFit> fit;
  try {
    data = simulate(sim);
    fit = fit_null(*data);
  } catch (const Error&) {
    return out;  // replicate counts as failed for both tests
  }

  if (cfg.which != WhichTest::kernel) {
    try {
      ScoreOptions so;
      so.rank_tol = cfg.rank_tol;
      const ScoreTestResult r = ge_score_test(*data, *fit, so);
      out.score_p = r.p_value;
      out.score_ss = r.ss;
      out.score_dof = r.dof;
    } catch (const Error&) {
    }
  }
  if (cfg.which != WhichTest::score) {
    try {
      const KernelTestResult r =
          km_test(*data, *fit, KernelSpec::linear(), KernelSpec::linear());
      out.kernel_p = r.p_value;
    } catch (const Error&) {
    }
  }
  return out;
}

inline double ks_distance_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, std::abs(u[i] - static_cast<double>(i) / n));
    d = std::max(d, std::abs(u[i] - static_cast<double>(i + 1) / n));
  }
  return d;
}

}  // namespace detail

inline CalibrationReport calibrate(const CalibrateConfig& cfg_in) {
  CalibrateConfig cfg = cfg_in;
  if (cfg.reps == 0) throw InvalidConfig("calibrate: reps must be positive");
  if (cfg.maf.empty()) cfg.maf.assign(cfg.p, 0.3);
  if (cfg.maf.size() == 1 && cfg.p > 1) cfg.maf.assign(cfg.p, cfg.maf[0]);

  const auto start = std::chrono::steady_clock::now();
  std::vector<detail::ReplicateOutcome> outcomes(cfg.reps);

  const std::size_t workers = std::max<std::size_t>(1, cfg.threads);
  if (workers == 1) {
    for (std::size_t rep = 0; rep < cfg.reps; ++rep)
      outcomes[rep] = detail::run_replicate(cfg, rep);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t rep = t; rep < cfg.reps; rep += workers)
          outcomes[rep] = detail::run_replicate(cfg, rep);
      });
    for (auto& th : pool) th.join();
  }

  CalibrationReport report;
  if (cfg.which != WhichTest::kernel) {
    TestCalibration sc;
    std::vector<double> pit;
    pit.reserve(cfg.reps);
    std::size_t dof0 = 0;
    for (const auto& o : outcomes) {
      if (!o.score_p) {
        ++sc.failed;
        continue;
      }
      ++sc.completed;
      for (std::size_t ai = 0; ai < kCalibrationAlphas.size(); ++ai)
        if (*o.score_p <= kCalibrationAlphas[ai]) sc.rejection[ai] += 1.0;
      if (dof0 == 0) dof0 = o.score_dof;
      if (o.score_dof != dof0) report.score_dof_varies = true;
      pit.push_back(chi2_cdf(*o.score_ss, ChiSquareParams(static_cast<double>(o.score_dof))));
    }
    if (sc.completed > 0)
      for (auto& r : sc.rejection) r /= static_cast<double>(sc.completed);
    report.score_dof = dof0;
    if (!pit.empty()) report.ks_score = detail::ks_distance_uniform(std::move(pit));
    report.score = sc;
  }
  if (cfg.which != WhichTest::score) {
    TestCalibration kc;
    for (const auto& o : outcomes) {
      if (!o.kernel_p) {
        ++kc.failed;
        continue;
      }
      ++kc.completed;
      for (std::size_t ai = 0; ai < kCalibrationAlphas.size(); ++ai)
        if (*o.kernel_p <= kCalibrationAlphas[ai]) kc.rejection[ai] += 1.0;
    }
    if (kc.completed > 0)
      for (auto& r : kc.rejection) r /= static_cast<double>(kc.completed);
    report.kernel = kc;
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace geks
