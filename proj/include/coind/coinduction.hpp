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

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coind/finite_solver.hpp"
#include "coind/graph.hpp"

namespace coind {

// Outcome of following a stationary profile.
template <class Payoff>
struct Converges {
  Payoff payoffs;
  std::size_t steps = 0;
  friend bool operator==(const Converges&, const Converges&) = default;
};

struct Diverges {
  // States visited forever, in play order, starting from the first repeated one.
  std::vector<StateId> cycle;
  friend bool operator==(const Diverges&, const Diverges&) = default;
};

template <class Payoff>
using BasicPlayResult = std::variant<Converges<Payoff>, Diverges>;
using PlayResult = BasicPlayResult<PayoffVector>;
// Payoffs are affine in the stage at which `from` was entered.
using ParamPlayResult = BasicPlayResult<AffinePayoff>;

template <class Payoff>
BasicPlayResult<Payoff> play(const BasicGraph<Payoff>& g, const StationaryProfile& s,
                             const StateId& from) {
  std::vector<StateId> path;
  std::map<StateId, std::size_t> seen;
  StateId cur = from;
  Stage offset = 0;
  for (;;) {
    const auto& def = g.state(cur);
    if (def.is_terminal())
      return Converges<Payoff>{shift(def.terminal().payoffs, offset), path.size()};
    if (auto it = seen.find(cur); it != seen.end())
      return Diverges{{path.begin() + static_cast<std::ptrdiff_t>(it->second), path.end()}};
    seen[cur] = path.size();
    path.push_back(cur);
    auto choice = s.find(cur);
    if (choice == s.end()) throw ProfileError("profile has no choice at state " + cur);
    const auto* e = def.internal().find(choice->second);
    if (e == nullptr)
      throw ProfileError("action '" + choice->second + "' does not exist at state " + cur);
    offset += e->delta;
    if (e->to_leaf()) return Converges<Payoff>{shift(e->leaf(), offset), path.size()};
    cur = e->target_state();
  }
}

inline PlayResult play_graph(const GameGraph& g, const StationaryProfile& s, const StateId& from) {
  return play(g, s, from);
}

inline ParamPlayResult play_param(const ParamGraph& g, const StationaryProfile& s,
                                  const StateId& from) {
  return play(g, s, from);
}

struct Spe {
  friend bool operator==(const Spe&, const Spe&) = default;
};

struct NotAdmissible {
  StateId state;
  std::vector<StateId> cycle;
  friend bool operator==(const NotAdmissible&, const NotAdmissible&) = default;
};

struct Refuted {
  StateId state;
  // Stage at which the deviation pays off; empty for non-parametrized graphs.
  std::optional<Stage> stage;
  PlayerId mover;
  Action deviation;
  PayoffVector profile_payoff;
  PayoffVector deviation_payoff;
  friend bool operator==(const Refuted&, const Refuted&) = default;
};

struct SpeVerdict {
  std::variant<Spe, NotAdmissible, Refuted> value;

  bool is_spe() const { return std::holds_alternative<Spe>(value); }
  const NotAdmissible* not_admissible() const { return std::get_if<NotAdmissible>(&value); }
  const Refuted* refuted() const { return std::get_if<Refuted>(&value); }
  friend bool operator==(const SpeVerdict&, const SpeVerdict&) = default;
};

inline std::string to_string(const SpeVerdict& v) {
  if (v.is_spe()) return "SPE";
  if (const auto* n = v.not_admissible()) {
    std::string out = "NotAdmissible at " + n->state + ": play cycles through";
    for (const auto& s : n->cycle) out += " " + s;
    return out;
  }
  const auto& r = *v.refuted();
  std::string out = "Refuted at " + r.state;
  if (r.stage) out += " (k=" + std::to_string(*r.stage) + ")";
  out += ": " + r.mover + " deviates to " + r.deviation + ", gaining " +
         to_string(r.deviation_payoff.at(r.mover)) + " over " +
         to_string(r.profile_payoff.at(r.mover));
  return out;
}

namespace detail {

// Every state must reach a terminal under s; divergence does not depend on
// the stage.
template <class Payoff>
std::optional<NotAdmissible> admissibility(const BasicGraph<Payoff>& g, const StationaryProfile& s) {
  for (const auto& id : check_order(g)) {
    auto r = play(g, s, id);
    if (auto* d = std::get_if<Diverges>(&r)) return NotAdmissible{id, d->cycle};
  }
  return std::nullopt;
}

// Payoff of taking `e` once from a state, then following s; affine in the
// stage of that state.
template <class Payoff>
Payoff deviation_value(const BasicGraph<Payoff>& g, const StationaryProfile& s, const Edge<Payoff>& e) {
  if (e.to_leaf()) return shift(e.leaf(), e.delta);
  auto r = play(g, s, e.target_state());
  return shift(std::get<Converges<Payoff>>(r).payoffs, e.delta);
}

}  // namespace detail

// One-shot deviation check at every state of a convergent stationary
// profile: the compact form of subgame perfection on the unfolding.
inline SpeVerdict check_spe_graph(const GameGraph& g, const StationaryProfile& s) {
  require_total(g, s);
  if (auto bad = detail::admissibility(g, s)) return {*bad};
  for (const auto& id : check_order(g)) {
    const auto& in = g.state(id).internal();
    const auto here = std::get<Converges<PayoffVector>>(play(g, s, id)).payoffs;
    for (const auto& e : in.edges) {
      if (e.action == s.at(id)) continue;
      auto dev = detail::deviation_value(g, s, e);
      if (prefers(dev, here, in.mover) == Preference::Better)
        return {Refuted{id, std::nullopt, in.mover, e.action, here, dev}};
    }
  }
  return {Spe{}};
}

struct AffineComparison {
  // Least stage violating a(k) <= b(k), if any.
  std::optional<Stage> fails_at;
  bool holds() const { return !fails_at; }
};

// Decides a(k) <= b(k) for every natural k.
inline AffineComparison affine_leq_all(const AffineExpr& a, const AffineExpr& b) {
  if (a.intercept > b.intercept) return {Stage{0}};
  if (a.slope <= b.slope) return {};
  // a.slope > b.slope: violated for every k > (b.i - a.i) / (a.s - b.s) >= 0.
  const Rational bound = (b.intercept - a.intercept) / (a.slope - b.slope);
  const std::int64_t floor = bound.numerator() / bound.denominator();
  return {static_cast<Stage>(floor + 1)};
}

// Stages at which each state can be entered from the start (entered at 0).
// States downstream of a stage-increasing cycle get every k >= their
// earliest stage; unreachable states get every k >= 0.
struct StageDomain {
  std::set<Stage> stages;
  std::optional<Stage> unbounded_from;
};

inline std::map<StateId, StageDomain> stage_domains(const ParamGraph& g) {
  const Stage limit = g.states.size();
  std::map<StateId, std::set<Stage>> seen;
  std::deque<std::pair<StateId, Stage>> queue{{g.start, 0}};
  seen[g.start].insert(0);
  std::set<StateId> unbounded;
  while (!queue.empty()) {
    auto [id, k] = queue.front();
    queue.pop_front();
    const auto& def = g.state(id);
    if (def.is_terminal()) continue;
    for (const auto& e : def.internal().edges) {
      if (e.to_leaf()) continue;
      const Stage next = k + e.delta;
      const auto& target = e.target_state();
      if (next >= limit) {
        unbounded.insert(target);
        continue;
      }
      if (seen[target].insert(next).second) queue.emplace_back(target, next);
    }
  }
  // Anything reachable from an unbounded state is unbounded too.
  std::deque<StateId> spread(unbounded.begin(), unbounded.end());
  while (!spread.empty()) {
    auto id = spread.front();
    spread.pop_front();
    const auto& def = g.state(id);
    if (def.is_terminal()) continue;
    for (const auto& e : def.internal().edges)
      if (!e.to_leaf() && unbounded.insert(e.target_state()).second)
        spread.push_back(e.target_state());
  }
  std::map<StateId, StageDomain> out;
  for (const auto& [id, def] : g.states) {
    auto& d = out[id];
    auto it = seen.find(id);
    if (unbounded.count(id) || it == seen.end() || it->second.empty()) {
      Stage from = 0;
      if (it != seen.end() && !it->second.empty()) from = *it->second.begin();
      d.unbounded_from = from;
    } else {
      d.stages = it->second;
    }
  }
  return out;
}

struct ParamCheck {
  SpeVerdict verdict;
  // Depth of the concrete cross-check; 0 when it was not run.
  std::size_t cross_check_depth = 0;
  std::optional<FiniteVerdict> concrete;

  // Whether the symbolic and concrete verdicts agree (true when no concrete
  // check ran).
  bool agrees() const { return !concrete || concrete->is_spe() == verdict.is_spe(); }
};

// Cut payoffs that continue the profile: the payoff of following s from the
// cut state.
template <class Payoff>
CutClosure profile_closure(const BasicGraph<Payoff>& g, const StationaryProfile& s) {
  return [&g, s](const StateId& id, Stage k) {
    auto r = play(g, s, id);
    const auto* c = std::get_if<Converges<Payoff>>(&r);
    if (c == nullptr) throw Error("profile diverges from state " + id);
    return payoff_at(c->payoffs, k);
  };
}

// The tree profile that plays s at every node of an unfolding.
inline TreeProfile induced_tree_profile(const Unfolding& u, const StationaryProfile& s) {
  TreeProfile out;
  for (const auto& [addr, id] : u.states) out[addr] = s.at(id);
  return out;
}

template <class Payoff>
FiniteVerdict concrete_check(const BasicGraph<Payoff>& g, const StationaryProfile& s,
                             std::size_t depth) {
  auto u = unfold_annotated(g, depth, profile_closure(g, s));
  return is_spe_finite(u.game, induced_tree_profile(u, s));
}

struct ParamCheckOptions {
  // 0 disables the concrete cross-check.
  std::size_t cross_check_depth = 20;
};

// One-shot deviation check with payoffs affine in the stage: every
// deviation must be unprofitable at every stage the state can be entered at.
inline ParamCheck check_spe_param(const ParamGraph& g, const StationaryProfile& s,
                                  ParamCheckOptions options = {}) {
  require_total(g, s);
  ParamCheck out{{Spe{}}, 0, std::nullopt};
  if (auto bad = detail::admissibility(g, s)) {
    out.verdict = {*bad};
    return out;
  }
  const auto domains = stage_domains(g);
  for (const auto& id : check_order(g)) {
    if (!out.verdict.is_spe()) break;
    const auto& in = g.state(id).internal();
    const auto here = std::get<Converges<AffinePayoff>>(play(g, s, id)).payoffs;
    const auto& domain = domains.at(id);
    for (const auto& e : in.edges) {
      if (e.action == s.at(id)) continue;
      const auto dev = detail::deviation_value(g, s, e);
      const AffineExpr& mine = here.at(in.mover);
      const AffineExpr& theirs = dev.at(in.mover);
      std::optional<Stage> witness;
      for (Stage k : domain.stages)
        if (theirs.at(k) > mine.at(k)) {
          witness = k;
          break;
        }
      if (!witness && domain.unbounded_from) {
        const Stage from = *domain.unbounded_from;
        auto cmp = affine_leq_all(theirs.shifted(from), mine.shifted(from));
        if (cmp.fails_at) witness = from + *cmp.fails_at;
      }
      if (witness) {
        out.verdict = {Refuted{id, witness, in.mover, e.action, here.at_stage(*witness),
                               dev.at_stage(*witness)}};
        break;
      }
    }
  }
  if (options.cross_check_depth > 0) {
    out.cross_check_depth = options.cross_check_depth;
    out.concrete = concrete_check(g, s, options.cross_check_depth);
  }
  return out;
}

// Uniform entry points for code generic over the graph kind.
inline SpeVerdict check_spe(const GameGraph& g, const StationaryProfile& s) {
  return check_spe_graph(g, s);
}
inline SpeVerdict check_spe(const ParamGraph& g, const StationaryProfile& s) {
  return check_spe_param(g, s, {0}).verdict;
}

struct ProfileVerdict {
  StationaryProfile profile;
  SpeVerdict verdict;
};

template <class Payoff>
Count stationary_profile_space(const BasicGraph<Payoff>& g) {
  Count c = 1;
  for (const auto& id : internal_states(g)) c *= g.state(id).internal().edges.size();
  return c;
}

// Every stationary profile with its verdict. Profiles are ordered
// lexicographically: states by id, actions by branch order.
template <class Payoff>
std::vector<ProfileVerdict> enumerate_stationary_spe(const BasicGraph<Payoff>& g,
                                                     std::uint64_t cap = 1u << 16) {
  if (stationary_profile_space(g) > cap)
    throw CapExceeded("stationary profile space " + stationary_profile_space(g).str() +
                      " exceeds cap " + std::to_string(cap));
  const auto ids = internal_states(g);
  std::vector<std::size_t> idx(ids.size(), 0);
  std::vector<ProfileVerdict> out;
  for (;;) {
    StationaryProfile s;
    for (std::size_t i = 0; i < ids.size(); ++i)
      s[ids[i]] = g.state(ids[i]).internal().edges[idx[i]].action;
    auto verdict = check_spe(g, s);
    out.push_back({std::move(s), std::move(verdict)});
    std::size_t i = ids.size();
    for (;;) {
      if (i == 0) return out;
      --i;
      if (++idx[i] < g.state(ids[i]).internal().edges.size()) break;
      idx[i] = 0;
    }
  }
}

template <class Payoff>
std::vector<StationaryProfile> stationary_spes(const BasicGraph<Payoff>& g,
                                               std::uint64_t cap = 1u << 16) {
  std::vector<StationaryProfile> out;
  for (auto& pv : enumerate_stationary_spe(g, cap))
    if (pv.verdict.is_spe()) out.push_back(std::move(pv.profile));
  return out;
}

// A profitable deviation by one player at up to `max_deviations` of their own
// decision points, found by the bounded multi-shot audit.
struct MultiShotDeviation {
  StateId state;
  PlayerId mover;
  std::vector<std::pair<StateId, Action>> deviations;
  PayoffVector profile_payoff;
  PayoffVector deviation_payoff;
};

namespace detail {

struct AuditBest {
  std::optional<PayoffVector> payoff;
  std::vector<std::pair<StateId, Action>> deviations;
};

inline AuditBest audit_from(const GameGraph& g, const StationaryProfile& s, const PlayerId& who,
                            const StateId& id, std::size_t budget,
                            std::vector<std::pair<StateId, Action>>& trail) {
  const auto& def = g.state(id);
  if (def.is_terminal()) return {def.terminal().payoffs, trail};
  if (budget == 0) return {std::get<Converges<PayoffVector>>(play(g, s, id)).payoffs, trail};
  const auto& in = def.internal();
  if (in.mover != who) {
    const auto& e = *in.find(s.at(id));
    if (e.to_leaf()) return {e.leaf(), trail};
    return audit_from(g, s, who, e.target_state(), budget, trail);
  }
  AuditBest best;
  for (const auto& e : in.edges) {
    const bool deviates = e.action != s.at(id);
    if (deviates) trail.emplace_back(id, e.action);
    AuditBest r;
    if (e.to_leaf()) r = {e.leaf(), trail};
    else r = audit_from(g, s, who, e.target_state(), budget - (deviates ? 1 : 0), trail);
    if (deviates) trail.pop_back();
    if (!best.payoff || prefers(*r.payoff, *best.payoff, who) == Preference::Better) best = r;
  }
  return best;
}

}  // namespace detail

// Diagnostic beyond the one-shot check: can the mover at some state gain by
// deviating at up to `max_deviations` of their decision points? Requires an
// admissible profile; every cycle in a deviating play then contains a
// deviation, so the search is finite.
inline std::optional<MultiShotDeviation> multi_shot_audit(const GameGraph& g,
                                                          const StationaryProfile& s,
                                                          std::size_t max_deviations = 3) {
  require_total(g, s);
  if (detail::admissibility(g, s)) throw Error("multi-shot audit needs a convergent profile");
  for (const auto& id : check_order(g)) {
    const auto& mover = g.state(id).internal().mover;
    const auto here = std::get<Converges<PayoffVector>>(play(g, s, id)).payoffs;
    std::vector<std::pair<StateId, Action>> trail;
    auto best = detail::audit_from(g, s, mover, id, max_deviations, trail);
    if (prefers(*best.payoff, here, mover) == Preference::Better)
      return MultiShotDeviation{id, mover, best.deviations, here, *best.payoff};
  }
  return std::nullopt;
}

}  // namespace coind
