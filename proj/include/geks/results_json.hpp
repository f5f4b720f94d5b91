#pragma once

#include <string>

#include <json.hpp>

#include "geks/ge_score.hpp"
#include "geks/km_test.hpp"
#include "geks/version.hpp"

namespace geks {

inline nlohmann::json to_json(const ScoreTestResult& r) {
  return nlohmann::json{{"ss", r.ss},
                        {"dof", r.dof},
                        {"p_value", r.p_value},
                        {"rank_zs", r.rank_zs},
                        {"warnings", r.warnings}};
}

inline nlohmann::json to_json(const KernelTestResult& r) {
  return nlohmann::json{
      {"q_tau", r.q_tau},
      {"q_tautilde", r.q_tautilde},
      {"mu_tau", r.mu_tau},
      {"mu_tautilde", r.mu_tautilde},
      {"i_q",
       {{r.i_q(0, 0), r.i_q(0, 1)}, {r.i_q(1, 0), r.i_q(1, 1)}}},
      {"q_star", {r.q_star[0], r.q_star[1]}},
      {"mu_star", {r.mu_star[0], r.mu_star[1]}},
      {"kappa_star", {r.kappa_star[0], r.kappa_star[1]}},
      {"nu_star", {r.nu_star[0], r.nu_star[1]}},
      {"q_star_max", r.q_star_max},
      {"p_value", r.p_value},
      {"warnings", r.warnings}};
}

// Envelope for the `test` subcommand output.
inline nlohmann::json result_document(const nlohmann::json& config_echo) {
  return nlohmann::json{{"tool", "geks"}, {"version", GEKS_VERSION}, {"config", config_echo}};
}

}  // namespace geks
