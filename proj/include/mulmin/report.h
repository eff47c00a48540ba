// Copyright 2026 The mulmin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MULMIN_REPORT_H_
#define MULMIN_REPORT_H_

// Machine-readable reports (schema "mulmin.report/1", see docs/formats.md).
// Action indices are 1-based; undefined quantities are null.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mulmin/minimax.h"
#include "mulmin/multilinear.h"
#include "mulmin/oracle.h"

namespace mulmin {

inline constexpr const char* kReportSchema = "mulmin.report/1";

using Json = nlohmann::ordered_json;

template <typename T>
Json OptionalJson(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json ToJson(const MixedProfile& p) {
  Json out = Json::array();
  for (const auto& s : p.strategies()) out.push_back(s.probs());
  return out;
}

inline Json ToJson(const LpDiagnostics& d) {
  return Json{{"status", LpStatusName(d.status)},
              {"objective", d.objective},
              {"iterations", d.iterations},
              {"bland_pivots", d.bland_pivots},
              {"primal_residual", d.primal_residual},
              {"complementarity_residual", d.complementarity_residual}};
}

inline Json ToJson(const MinimaxSolution& s) {
  Json out{{"value", s.value},
           {"primal_value", s.primal_value},
           {"primal_solved", s.primal_solved},
           {"duality_gap", s.duality_gap},
           {"x_star", s.x_star.weights()},
           {"q_star", s.q_star},
           {"support_size", s.support_size},
           {"p_star", ToJson(s.p_star)},
           {"dual_lp", ToJson(s.dual_lp)}};
  out["primal_lp"] = s.primal_lp ? ToJson(*s.primal_lp) : Json(nullptr);
  return out;
}

inline Json ToJson(const QualityReport& q) {
  Json players = Json::array();
  for (const auto& p : q.players) {
    players.push_back(Json{{"expected", p.expected},
                           {"best_response_value", p.best_response_value},
                           {"best_response_action", p.best_response_action + 1},
                           {"epsilon", p.additive_gap},
                           {"t", OptionalJson(p.ratio)}});
  }
  return Json{{"players", players},
              {"t", OptionalJson(q.t)},
              {"all_t_defined", q.all_t_defined},
              {"epsilon", q.epsilon}};
}

inline Json ToJson(const BoundsReport& b) {
  Json out{{"value_at_pstar", b.value_at_pstar},
           {"min_expected", b.min_expected},
           {"selector_at_pstar", b.selector_at_pstar},
           {"equality_residual", b.equality_residual},
           {"equality_holds", b.equality_holds},
           {"x_star_min", b.x_star_min},
           {"sigma_bound", OptionalJson(b.sigma_bound)},
           {"sigma_bound_applicable", b.sigma_bound_applicable},
           {"sigma_bound_preconditions_verified",
            b.sigma_bound_preconditions_verified}};
  if (b.reference) {
    const auto& r = *b.reference;
    out["reference"] = Json{{"payoffs", r.payoffs},
                            {"selector_value", r.selector_value},
                            {"sigma", r.sigma},
                            {"bound1_slack", r.bound1_slack},
                            {"bound1_holds", r.bound1_holds},
                            {"bound2_slack", OptionalJson(r.bound2_slack)},
                            {"bound2_holds", OptionalJson(r.bound2_holds)}};
  } else {
    out["reference"] = nullptr;
  }
  return out;
}

inline Json ToJson(const SaddleCheck& c) {
  return Json{{"passed", c.passed},
              {"center", c.center},
              {"worst_left", c.worst_left},
              {"worst_right", c.worst_right},
              {"worst_violation", c.worst_violation},
              {"worst_source", c.worst_source},
              {"vertex_checks", c.vertex_checks},
              {"sample_checks", c.sample_checks}};
}

inline Json ToJson(const EquilibriumCertificate& c) {
  return Json{{"kind", CertificateKindName(c.kind)},
              {"residual", c.residual},
              {"profile", ToJson(c.profile)}};
}

}  // namespace mulmin

#endif  // MULMIN_REPORT_H_
