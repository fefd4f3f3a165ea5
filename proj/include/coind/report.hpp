// Copyright 2026 The coind Authors
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

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "coind/coinduction.hpp"
#include "coind/escalation.hpp"
#include "coind/finite_solver.hpp"
#include "coind/truncation.hpp"

// Machine-readable reports. Key order is fixed and every number is an exact
// rational rendered as a string ("3", "-1/2"), so output is byte-stable.
namespace coind::report {

using Json = nlohmann::ordered_json;

inline Json rational(const Rational& r) { return to_string(r); }

inline Json payoffs(const PayoffVector& p) {
  Json out = Json::object();
  for (const auto& [who, v] : p.entries) out[who] = rational(v);
  return out;
}

inline Json affine(const AffinePayoff& p) {
  Json out = Json::object();
  for (const auto& [who, e] : p.entries)
    out[who] = {{"intercept", rational(e.intercept)}, {"slope", rational(e.slope)}};
  return out;
}

inline Json profile(const StationaryProfile& s) {
  Json out = Json::object();
  for (const auto& [id, a] : s) out[id] = a;
  return out;
}

inline Json profile(const TreeProfile& s) {
  Json out = Json::object();
  for (const auto& [addr, a] : s) out[to_string(addr)] = a;
  return out;
}

inline Json validation(const ValidationReport& r) {
  return {{"ok", r.ok()}, {"violations", r.violations}};
}

inline Json equilibria(const FiniteGame& g, const EquilibriumSet& eq) {
  Json nodes = Json::array();
  for_each_node(g, [&](const Address& addr, const Node& n) {
    Json eqp = Json::array();
    for (const auto& p : eq.payoffs.at(addr)) eqp.push_back(payoffs(p));
    nodes.push_back({{"node", to_string(addr)},
                     {"mover", n.mover},
                     {"optimal", eq.optimal.at(addr)},
                     {"equilibrium_payoffs", eqp}});
  });
  return {{"solver", "backward_induction"},
          {"equilibria", eq.count.str()},
          {"product_form", eq.is_product()},
          {"nodes", nodes},
          {"representative", profile(eq.representative)},
          {"payoff", payoffs(eq.payoff)}};
}

inline Json finite_verdict(const FiniteVerdict& v, DeviationScope scope) {
  Json out = {{"checker", scope == DeviationScope::Subgames ? "one_shot_subgames" : "root_only"},
              {"spe", v.is_spe()}};
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    out["counterexample"] = {{"node", to_string(c.address)},
                             {"mover", c.mover},
                             {"deviation", c.deviation},
                             {"profile_payoff", payoffs(c.profile_payoff)},
                             {"deviation_payoff", payoffs(c.deviation_payoff)},
                             {"gain", rational(c.gain)}};
  }
  return out;
}

inline Json spe_verdict(const SpeVerdict& v) {
  if (v.is_spe()) return {{"verdict", "SPE"}};
  if (const auto* n = v.not_admissible())
    return {{"verdict", "NotAdmissible"}, {"state", n->state}, {"cycle", n->cycle}};
  const auto& r = *v.refuted();
  Json out = {{"verdict", "Refuted"}, {"state", r.state}};
  out["stage"] = r.stage ? Json(std::to_string(*r.stage)) : Json(nullptr);
  out["mover"] = r.mover;
  out["deviation"] = r.deviation;
  out["profile_payoff"] = payoffs(r.profile_payoff);
  out["deviation_payoff"] = payoffs(r.deviation_payoff);
  return out;
}

inline Json param_check(const ParamCheck& c) {
  Json out = spe_verdict(c.verdict);
  out["checker"] = "affine_one_shot";
  if (c.concrete) {
    out["cross_check"] = {{"depth", std::to_string(c.cross_check_depth)},
                          {"concrete", finite_verdict(*c.concrete, DeviationScope::Subgames)},
                          {"agrees", c.agrees()}};
  } else {
    out["cross_check"] = nullptr;
  }
  return out;
}

inline Json enumeration(const std::vector<ProfileVerdict>& all, std::uint64_t cap) {
  Json rows = Json::array();
  std::size_t spes = 0;
  for (const auto& pv : all) {
    spes += pv.verdict.is_spe();
    rows.push_back({{"profile", profile(pv.profile)}, {"result", spe_verdict(pv.verdict)}});
  }
  return {{"solver", "enumerate_stationary_spe"},
          {"cap", std::to_string(cap)},
          {"profiles", std::to_string(all.size())},
          {"spes", std::to_string(spes)},
          {"results", rows}};
}

inline Json characterization(const Characterization& c) {
  Json out = Json::object();
  for (const auto& [who, f] : c) {
    out[who] = {{"freedom", to_string(f.freedom)}};
    out[who]["action"] = f.action ? Json(*f.action) : Json(nullptr);
  }
  return out;
}

inline Json depth_summary(const DepthSummary& d) {
  return {{"depth", std::to_string(d.depth)},
          {"closure", d.closure},
          {"equilibria", d.count.str()},
          {"players", characterization(d.players)},
          {"payoff", payoffs(d.payoff)}};
}

inline Json extrapolation(const ExtrapolationReport& r, std::uint64_t cap) {
  Json depths = Json::array();
  for (const auto& d : r.summaries) depths.push_back(depth_summary(d));
  Json spes = Json::array();
  for (std::size_t i = 0; i < r.infinite_spes.size(); ++i)
    spes.push_back({{"profile", profile(r.infinite_spes[i])},
                    {"players", characterization(r.infinite_characterizations[i])}});
  auto limit = [](const ParityLimit& l) {
    Json out = {{"stable", l.stable}, {"matches_infinite", l.matches_infinite}};
    out["limit"] = l.limit ? characterization(*l.limit) : Json(nullptr);
    return out;
  };
  return {{"solver", "backward_induction per depth; enumerate_stationary_spe"},
          {"cap", std::to_string(cap)},
          {"closure", r.summaries.empty() ? "" : r.summaries.front().closure},
          {"depths", depths},
          {"infinite_spes", spes},
          {"odd", limit(r.odd)},
          {"even", limit(r.even)},
          {"verdict", to_string(r.verdict)},
          {"explanation", r.explanation}};
}

inline Json step(const EscalationStep& s) {
  return {{"state", s.state}, {"action", s.action}, {"spe", std::to_string(s.spe)}};
}

inline Json decision(const std::optional<Decision>& d) {
  if (!d) return nullptr;
  return {{"state", d->state}, {"mover", d->mover}, {"action", d->action}};
}

inline Json escalation(const std::vector<StationaryProfile>& spes, const RationalizableMap& map,
                       const std::optional<EscalationWitness>& w, const ThreatReport& threats) {
  Json spe_list = Json::array();
  for (std::size_t i = 0; i < spes.size(); ++i)
    spe_list.push_back({{"id", std::to_string(i + 1)}, {"profile", profile(spes[i])}});
  Json rational_map = Json::object();
  for (const auto& [id, sups] : map.states) {
    Json row = Json::array();
    for (const auto& s : sups) {
      Json ids = Json::array();
      for (auto i : s.spes) ids.push_back(std::to_string(i));
      row.push_back({{"action", s.action}, {"spes", ids}});
    }
    rational_map[id] = row;
  }
  Json witness = nullptr;
  if (w) {
    Json prefix = Json::array(), cycle = Json::array();
    for (const auto& s : w->prefix) prefix.push_back(step(s));
    for (const auto& s : w->cycle) cycle.push_back(step(s));
    witness = {{"prefix", prefix}, {"cycle", cycle}};
  }
  Json rows = Json::array();
  for (const auto& r : threats.rows) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
      entries.push_back({{"spe", std::to_string(e.spe)},
                         {"response", decision(e.response)},
                         {"threat", decision(e.threat)}});
    rows.push_back({{"state", r.state},
                    {"mover", r.mover},
                    {"action", r.action},
                    {"continues", r.continues},
                    {"support", entries}});
  }
  Json flagged = Json::array();
  for (const auto& s : threats.mutually_non_credible) flagged.push_back(s);
  return {{"solver", "enumerate_stationary_spe; rationalizable_actions; escalation_witness"},
          {"spes", spe_list},
          {"rationalizable", rational_map},
          {"witness", witness},
          {"threats", rows},
          {"mutually_non_credible", flagged}};
}

}  // namespace coind::report
