#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geks/calibrate.hpp"
#include "geks/dataset.hpp"
#include "geks/errors.hpp"
#include "geks/ge_score.hpp"
#include "geks/km_test.hpp"
#include "geks/null_model.hpp"
#include "geks/results_json.hpp"
#include "geks/simulate.hpp"
#include "geks/tsv.hpp"
#include "geks/version.hpp"

namespace geks {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

namespace detail {

inline int classify_error(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const DimensionMismatch*>(&e) ||
      dynamic_cast<const ConstantOutcome*>(&e) || dynamic_cast<const InvalidConfig*>(&e) ||
      dynamic_cast<const AsymmetricKernel*>(&e))
    return kExitData;
  return kExitNumeric;
}

inline std::optional<double> env_rank_tol() {
  const char* raw = std::getenv("GEKS_RANK_TOL");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  double value = 0.0;
  const char* last = raw;
  while (*last != '\0') ++last;
  const auto [ptr, ec] = std::from_chars(raw, last, value);
  if (ec != std::errc() || ptr != last || !(value >= 0.0))
    throw InvalidConfig(std::string("GEKS_RANK_TOL is not a valid nonnegative number: '") +
                        raw + "'");
  return value;
}

inline void write_output(const std::string& path, const nlohmann::json& doc) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Set-based tests for genetic main effects and gene-environment interaction "
               "in case/control cohorts"};
  app.set_version_flag("--version", GEKS_VERSION);
  app.require_subcommand(1);

  // ---- test ----------------------------------------------------------
  struct {
    std::string pheno, geno, out;
    std::string which = "both";
    std::string kernel = "linear";
    std::string kernel_file, ktilde_file;
    std::optional<double> rank_tol;
    std::size_t max_iter = 100;
    double irls_tol = 1e-10;
  } t;
  CLI::App* test_cmd = app.add_subcommand("test", "run the tests on TSV inputs");
  test_cmd->add_option("--pheno", t.pheno, "phenotype TSV (columns: y, s, covariates)")
      ->required();
  test_cmd->add_option("--geno", t.geno, "genotype TSV (n rows x p dosage columns)")
      ->required();
  test_cmd->add_option("--test", t.which, "which test to run")
      ->check(CLI::IsMember({"score", "kernel", "both"}));
  test_cmd->add_option("--out", t.out, "output JSON path (default: stdout)");
  test_cmd->add_option("--kernel", t.kernel, "kernel kind for the kernel test")
      ->check(CLI::IsMember({"linear", "precomputed"}));
  test_cmd->add_option("--kernel-file", t.kernel_file,
                       "precomputed K as a headerless TSV matrix");
  test_cmd->add_option("--ktilde-file", t.ktilde_file,
                       "precomputed Ktilde as a headerless TSV matrix "
                       "(defaults to --kernel-file)");
  test_cmd->add_option("--rank-tol", t.rank_tol,
                       "rank tolerance (default: size-scaled machine epsilon; "
                       "env GEKS_RANK_TOL)");
  test_cmd->add_option("--max-iter", t.max_iter, "IRLS iteration cap");
  test_cmd->add_option("--irls-tol", t.irls_tol, "IRLS coefficient-change tolerance");

  // ---- simulate ------------------------------------------------------
  struct {
    std::size_t n = 0, q = 2, p = 0;
    std::uint64_t seed = 0;
    std::vector<double> beta, a, b, maf;
    std::string env = "bernoulli";
    double pi = 0.5;
    std::string out_pheno, out_geno;
  } s;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "write a simulated cohort as TSV fixtures");
  sim_cmd->add_option("--n", s.n, "individuals")->required();
  sim_cmd->add_option("--q", s.q, "covariate columns incl. intercept and environment");
  sim_cmd->add_option("--p", s.p, "SNP count")->required();
  sim_cmd->add_option("--seed", s.seed, "64-bit stream seed")->required();
  sim_cmd->add_option("--beta", s.beta, "covariate effects (length q; default zeros)");
  sim_cmd->add_option("--a", s.a, "genetic main effects (length p; default zeros)");
  sim_cmd->add_option("--b", s.b, "interaction effects (length p; default zeros)");
  sim_cmd->add_option("--maf", s.maf, "minor allele frequencies (length p or one value)");
  sim_cmd->add_option("--env", s.env, "environment law")
      ->check(CLI::IsMember({"bernoulli", "normal"}));
  sim_cmd->add_option("--pi", s.pi, "Bernoulli environment parameter");
  sim_cmd->add_option("--out-pheno", s.out_pheno, "phenotype TSV path")->required();
  sim_cmd->add_option("--out-geno", s.out_geno, "genotype TSV path")->required();

  // ---- calibrate -----------------------------------------------------
  struct {
    std::size_t n = 500, q = 2, p = 3, reps = 2000, threads = 1;
    std::uint64_t seed = 0;
    std::string which = "both";
    std::vector<double> maf;
    std::string env = "bernoulli";
    double pi = 0.5;
    std::optional<double> rank_tol;
    std::string out;
  } c;
  CLI::App* cal_cmd =
      app.add_subcommand("calibrate", "empirical null rejection rates by simulation");
  cal_cmd->add_option("--n", c.n, "individuals per replicate");
  cal_cmd->add_option("--q", c.q, "covariate columns incl. intercept and environment");
  cal_cmd->add_option("--p", c.p, "SNP count");
  cal_cmd->add_option("--reps", c.reps, "number of null replicates");
  cal_cmd->add_option("--seed", c.seed, "64-bit master seed")->required();
  cal_cmd->add_option("--test", c.which, "which test to calibrate")
      ->check(CLI::IsMember({"score", "kernel", "both"}));
  cal_cmd->add_option("--maf", c.maf, "minor allele frequencies (length p or one value)");
  cal_cmd->add_option("--env", c.env, "environment law")
      ->check(CLI::IsMember({"bernoulli", "normal"}));
  cal_cmd->add_option("--pi", c.pi, "Bernoulli environment parameter");
  cal_cmd->add_option("--threads", c.threads, "worker threads (does not change results)");
  cal_cmd->add_option("--rank-tol", c.rank_tol, "rank tolerance override");
  cal_cmd->add_option("--out", c.out, "output JSON path (default: stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("geks");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (test_cmd->parsed()) {
      if (!t.rank_tol) t.rank_tol = detail::env_rank_tol();
      const Dataset data = load_dataset(t.pheno, t.geno);
      IrlsOptions irls{t.max_iter, t.irls_tol};
      const NullFit fit = fit_null(data, irls);

      nlohmann::json config{{"pheno", t.pheno},
                            {"geno", t.geno},
                            {"test", t.which},
                            {"kernel", t.kernel},
                            {"max_iter", t.max_iter},
                            {"irls_tol", t.irls_tol}};
      if (t.rank_tol) config["rank_tol"] = *t.rank_tol;
      nlohmann::json doc = result_document(config);
      doc["n"] = data.n();
      doc["q"] = data.q();
      doc["p"] = data.p();

      if (t.which != "kernel") {
        ScoreOptions so;
        so.rank_tol = t.rank_tol;
        doc["score"] = to_json(ge_score_test(data, fit, so));
      }
      if (t.which != "score") {
        KernelSpec sk = KernelSpec::linear();
        KernelSpec skt = KernelSpec::linear();
        if (t.kernel == "precomputed") {
          if (t.kernel_file.empty())
            throw InvalidConfig("--kernel precomputed requires --kernel-file");
          sk = KernelSpec::precomputed(load_kernel_tsv(t.kernel_file));
          skt = t.ktilde_file.empty()
                    ? sk
                    : KernelSpec::precomputed(load_kernel_tsv(t.ktilde_file));
        }
        doc["kernel"] = to_json(km_test(data, fit, sk, skt));
      }
      detail::write_output(t.out, doc);
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      SimConfig cfg;
      cfg.n = s.n;
      cfg.q = s.q;
      cfg.p = s.p;
      cfg.seed = s.seed;
      cfg.beta = s.beta.empty() ? std::vector<double>(s.q, 0.0) : s.beta;
      cfg.a = s.a.empty() ? std::vector<double>(s.p, 0.0) : s.a;
      cfg.b = s.b.empty() ? std::vector<double>(s.p, 0.0) : s.b;
      if (s.maf.empty())
        cfg.maf.assign(s.p, 0.3);
      else if (s.maf.size() == 1)
        cfg.maf.assign(s.p, s.maf[0]);
      else
        cfg.maf = s.maf;
      cfg.env = s.env == "normal" ? EnvKind::standard_normal : EnvKind::bernoulli;
      cfg.env_pi = s.pi;
      const Dataset data = simulate(cfg);
      write_pheno_tsv(s.out_pheno, data);
      write_geno_tsv(s.out_geno, data);
      return kExitOk;
    }

    if (cal_cmd->parsed()) {
      CalibrateConfig cfg;
      cfg.n = c.n;
      cfg.q = c.q;
      cfg.p = c.p;
      cfg.reps = c.reps;
      cfg.seed = c.seed;
      cfg.which = c.which == "score" ? WhichTest::score
                  : c.which == "kernel" ? WhichTest::kernel
                                        : WhichTest::both;
      cfg.maf = c.maf;
      cfg.env = c.env == "normal" ? EnvKind::standard_normal : EnvKind::bernoulli;
      cfg.env_pi = c.pi;
      cfg.rank_tol = c.rank_tol ? c.rank_tol : detail::env_rank_tol();
      cfg.threads = c.threads;
      const CalibrationReport report = calibrate(cfg);

      nlohmann::json doc{{"tool", "geks"},
                         {"version", GEKS_VERSION},
                         {"config",
                          {{"n", cfg.n},
                           {"q", cfg.q},
                           {"p", cfg.p},
                           {"reps", cfg.reps},
                           {"seed", cfg.seed},
                           {"test", c.which},
                           {"env", c.env},
                           {"pi", cfg.env_pi},
                           {"threads", cfg.threads}}},
                         {"alphas", {0.01, 0.05, 0.1}},
                         {"elapsed_seconds", report.elapsed_seconds}};
      auto emit = [](const TestCalibration& tc) {
        return nlohmann::json{{"rejection", {tc.rejection[0], tc.rejection[1], tc.rejection[2]}},
                              {"completed", tc.completed},
                              {"failed", tc.failed}};
      };
      if (report.score) {
        doc["score"] = emit(*report.score);
        doc["score"]["ks"] = report.ks_score;
        doc["score"]["dof"] = report.score_dof;
        doc["score"]["dof_varies"] = report.score_dof_varies;
      }
      if (report.kernel) doc["kernel"] = emit(*report.kernel);
      detail::write_output(c.out, doc);
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "geks: " << e.what() << "\n";
    return detail::classify_error(e);
  } catch (const std::exception& e) {
    std::cerr << "geks: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace geks
