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

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "coind/game.hpp"

namespace coind {

using StateId = std::string;
using Stage = std::uint64_t;

// intercept + slope * k, for the stage counter k.
struct AffineExpr {
  Rational intercept{0};
  Rational slope{0};

  Rational at(Stage k) const { return intercept + slope * Rational(static_cast<std::int64_t>(k)); }
  // The expression k -> this(k + d).
  AffineExpr shifted(Stage d) const { return {at(d), slope}; }

  friend bool operator==(const AffineExpr&, const AffineExpr&) = default;
};

inline Rational eval_leaf(const AffineExpr& expr, Stage k) { return expr.at(k); }

inline std::string to_string(const AffineExpr& e) {
  if (e.slope == Rational(0)) return to_string(e.intercept);
  std::string out = to_string(e.intercept);
  if (e.slope < Rational(0)) out += "-" + to_string(-e.slope);
  else out += "+" + to_string(e.slope);
  return out + "*k";
}

struct AffinePayoff {
  std::map<PlayerId, AffineExpr> entries;

  AffinePayoff() = default;
  AffinePayoff(std::initializer_list<std::pair<const PlayerId, AffineExpr>> init)
      : entries(init) {}

  const AffineExpr& at(const PlayerId& who) const {
    auto it = entries.find(who);
    if (it == entries.end()) throw Error("unknown player '" + who + "'");
    return it->second;
  }
  PayoffVector at_stage(Stage k) const {
    PayoffVector out;
    for (const auto& [who, e] : entries) out.entries[who] = e.at(k);
    return out;
  }
  AffinePayoff shifted(Stage d) const {
    AffinePayoff out;
    for (const auto& [who, e] : entries) out.entries[who] = e.shifted(d);
    return out;
  }

  friend bool operator==(const AffinePayoff&, const AffinePayoff&) = default;
};

inline std::string to_string(const AffinePayoff& p) {
  std::string out = "(";
  bool first = true;
  for (const auto& [who, e] : p.entries) {
    if (!first) out += ", ";
    first = false;
    out += who + ":" + to_string(e);
  }
  return out + ")";
}

// Uniform access so graph algorithms can be written once for constant and
// stage-affine payoffs.
inline PayoffVector payoff_at(const PayoffVector& p, Stage) { return p; }
inline PayoffVector payoff_at(const AffinePayoff& p, Stage k) { return p.at_stage(k); }
inline PayoffVector shift(const PayoffVector& p, Stage) { return p; }
inline AffinePayoff shift(const AffinePayoff& p, Stage d) { return p.shifted(d); }
inline std::set<PlayerId> payoff_players(const PayoffVector& p) {
  std::set<PlayerId> out;
  for (const auto& [who, v] : p.entries) out.insert(who);
  return out;
}
inline std::set<PlayerId> payoff_players(const AffinePayoff& p) {
  std::set<PlayerId> out;
  for (const auto& [who, v] : p.entries) out.insert(who);
  return out;
}

template <class Payoff>
struct Edge {
  Action action;
  // Either a named state or an inline terminal.
  std::variant<StateId, Payoff> target;
  // Stage increment taken along this edge, 0 or 1.
  Stage delta = 0;

  bool to_leaf() const { return std::holds_alternative<Payoff>(target); }
  const StateId& target_state() const { return std::get<StateId>(target); }
  const Payoff& leaf() const { return std::get<Payoff>(target); }

  friend bool operator==(const Edge&, const Edge&) = default;
};

template <class Payoff>
struct Terminal {
  Payoff payoffs;
  friend bool operator==(const Terminal&, const Terminal&) = default;
};

template <class Payoff>
struct Internal {
  PlayerId mover;
  std::vector<Edge<Payoff>> edges;

  const Edge<Payoff>* find(const Action& a) const {
    for (const auto& e : edges)
      if (e.action == a) return &e;
    return nullptr;
  }
  friend bool operator==(const Internal&, const Internal&) = default;
};

template <class Payoff>
struct StateDef {
  std::variant<Terminal<Payoff>, Internal<Payoff>> value;

  bool is_terminal() const { return std::holds_alternative<Terminal<Payoff>>(value); }
  const Terminal<Payoff>& terminal() const { return std::get<Terminal<Payoff>>(value); }
  const Internal<Payoff>& internal() const { return std::get<Internal<Payoff>>(value); }

  friend bool operator==(const StateDef&, const StateDef&) = default;
};

// A finite state graph standing for its (possibly infinite) unfolding from
// `start`.
template <class Payoff>
struct BasicGraph {
  using payoff_type = Payoff;

  std::string name;
  std::map<StateId, StateDef<Payoff>> states;
  StateId start;

  const StateDef<Payoff>& state(const StateId& id) const {
    auto it = states.find(id);
    if (it == states.end()) throw Error("unknown state '" + id + "'");
    return it->second;
  }

  friend bool operator==(const BasicGraph&, const BasicGraph&) = default;
};

using GameGraph = BasicGraph<PayoffVector>;
using ParamGraph = BasicGraph<AffinePayoff>;

// One action per internal state, independent of history.
using StationaryProfile = std::map<StateId, Action>;

template <class Payoff>
std::vector<StateId> internal_states(const BasicGraph<Payoff>& g) {
  std::vector<StateId> out;
  for (const auto& [id, def] : g.states)
    if (!def.is_terminal()) out.push_back(id);
  return out;
}

// Internal states in breadth-first order from the start (branch order),
// then the unreachable ones by id. Checkers visit states in this order.
template <class Payoff>
std::vector<StateId> check_order(const BasicGraph<Payoff>& g) {
  std::vector<StateId> out;
  std::set<StateId> seen;
  std::vector<StateId> queue;
  if (g.states.count(g.start)) queue.push_back(g.start);
  seen.insert(g.start);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto& def = g.state(queue[i]);
    if (def.is_terminal()) continue;
    out.push_back(queue[i]);
    for (const auto& e : def.internal().edges)
      if (!e.to_leaf() && seen.insert(e.target_state()).second) queue.push_back(e.target_state());
  }
  for (const auto& id : internal_states(g))
    if (!seen.count(id)) out.push_back(id);
  return out;
}

template <class Payoff>
bool is_terminal_target(const BasicGraph<Payoff>& g, const Edge<Payoff>& e) {
  return e.to_leaf() || g.state(e.target_state()).is_terminal();
}

template <class Payoff>
std::set<PlayerId> players_of(const BasicGraph<Payoff>& g) {
  std::set<PlayerId> out;
  for (const auto& [id, def] : g.states) {
    if (def.is_terminal()) {
      auto ps = payoff_players(def.terminal().payoffs);
      out.insert(ps.begin(), ps.end());
      continue;
    }
    out.insert(def.internal().mover);
    for (const auto& e : def.internal().edges)
      if (e.to_leaf()) {
        auto ps = payoff_players(e.leaf());
        out.insert(ps.begin(), ps.end());
      }
  }
  return out;
}

template <class Payoff>
ValidationReport validate_graph(const BasicGraph<Payoff>& g) {
  ValidationReport report;
  auto players = players_of(g);
  auto check_payoff = [&](const Payoff& p, const std::string& where) {
    auto have = payoff_players(p);
    for (const auto& who : players)
      if (!have.count(who)) report.violations.push_back("missing payoff for " + who + where);
  };
  if (!g.states.count(g.start))
    report.violations.push_back("start state '" + g.start + "' does not exist");
  for (const auto& [id, def] : g.states) {
    if (id.empty()) report.violations.push_back("empty state id");
    if (def.is_terminal()) {
      check_payoff(def.terminal().payoffs, " in state " + id);
      continue;
    }
    const auto& in = def.internal();
    if (in.mover.empty()) report.violations.push_back("empty player id in state " + id);
    if (in.edges.empty()) report.violations.push_back("empty edge list in state " + id);
    std::set<Action> seen;
    for (const auto& e : in.edges) {
      const std::string where = " on edge " + id + "." + e.action;
      if (!seen.insert(e.action).second)
        report.violations.push_back("duplicate action label '" + e.action + "' in state " + id);
      if (e.delta > 1) report.violations.push_back("stage increment must be 0 or 1" + where);
      if constexpr (std::is_same_v<Payoff, PayoffVector>) {
        if (e.delta != 0)
          report.violations.push_back("stage increment in a non-parametrized graph" + where);
      }
      if (e.to_leaf()) check_payoff(e.leaf(), where);
      else if (!g.states.count(e.target_state()))
        report.violations.push_back("dangling target '" + e.target_state() + "'" + where);
    }
  }
  return report;
}

// Throws ProfileError unless `s` picks an existing action at exactly the
// internal states of `g`.
template <class Payoff>
void require_total(const BasicGraph<Payoff>& g, const StationaryProfile& s) {
  std::size_t covered = 0;
  for (const auto& [id, def] : g.states) {
    if (def.is_terminal()) continue;
    auto it = s.find(id);
    if (it == s.end()) throw ProfileError("profile has no choice at state " + id);
    if (def.internal().find(it->second) == nullptr)
      throw ProfileError("action '" + it->second + "' does not exist at state " + id);
    ++covered;
  }
  if (covered != s.size()) throw ProfileError("profile names states that are not decision states");
}

// Payoff assigned to an internal state reached exactly at the cut, given the
// stage it is reached at.
using CutClosure = std::function<PayoffVector(const StateId&, Stage)>;

struct Unfolding {
  FiniteGame game;
  // Graph state and stage of every internal node of `game`.
  std::map<Address, StateId> states;
  std::map<Address, Stage> stages;
};

namespace detail {

template <class Payoff>
FiniteGame unfold_from(const BasicGraph<Payoff>& g, const StateId& id, Stage k,
                       std::size_t remaining, const CutClosure& closure, Address& addr,
                       Unfolding& out) {
  const auto& def = g.state(id);
  if (def.is_terminal()) return FiniteGame::leaf(payoff_at(def.terminal().payoffs, k));
  if (remaining == 0) return FiniteGame::leaf(closure(id, k));
  const auto& in = def.internal();
  out.states[addr] = id;
  out.stages[addr] = k;
  std::vector<Branch> branches;
  branches.reserve(in.edges.size());
  for (const auto& e : in.edges) {
    addr.push_back(e.action);
    if (e.to_leaf())
      branches.push_back({e.action, FiniteGame::leaf(payoff_at(e.leaf(), k + e.delta))});
    else
      branches.push_back(
          {e.action, unfold_from(g, e.target_state(), k + e.delta, remaining - 1, closure, addr, out)});
    addr.pop_back();
  }
  return FiniteGame::node(in.mover, std::move(branches));
}

}  // namespace detail

// All plays of at most `depth` decisions from `start` (entered at stage k0).
template <class Payoff>
Unfolding unfold_annotated(const BasicGraph<Payoff>& g, std::size_t depth, const CutClosure& closure,
                           Stage k0 = 0) {
  Unfolding out;
  Address addr;
  out.game = detail::unfold_from(g, g.start, k0, depth, closure, addr, out);
  return out;
}

inline FiniteGame unfold(const GameGraph& g, std::size_t depth,
                         const std::map<StateId, PayoffVector>& closure) {
  return unfold_annotated(g, depth, [&](const StateId& id, Stage) {
           auto it = closure.find(id);
           if (it == closure.end()) throw Error("missing closure entry for state " + id);
           return it->second;
         }).game;
}

// Closure rules for truncation.
struct ConstClosure {
  PayoffVector payoffs;
};
struct MapClosure {
  std::map<StateId, PayoffVector> payoffs;
};
// The decider at the cut takes the first edge that ends the game.
struct DeciderQuits {};

using ClosureRule = std::variant<ConstClosure, MapClosure, DeciderQuits>;

// The CLI spelling of a closure rule.
inline std::string describe(const ClosureRule& rule) {
  auto vec = [](const PayoffVector& p) {
    std::string out = "(";
    bool first = true;
    for (const auto& [who, v] : p.entries) {
      if (!first) out += ",";
      first = false;
      out += who + ":" + to_string(v);
    }
    return out + ")";
  };
  if (const auto* c = std::get_if<ConstClosure>(&rule)) return "const:" + vec(c->payoffs);
  if (const auto* m = std::get_if<MapClosure>(&rule)) {
    std::string out = "map:";
    bool first = true;
    for (const auto& [id, p] : m->payoffs) {
      if (!first) out += ";";
      first = false;
      out += id + "=" + vec(p);
    }
    return out;
  }
  return "quit";
}

template <class Payoff>
const Edge<Payoff>& quit_edge(const BasicGraph<Payoff>& g, const StateId& id) {
  for (const auto& e : g.state(id).internal().edges)
    if (is_terminal_target(g, e)) return e;
  throw Error("state " + id + " has no edge that ends the game");
}

template <class Payoff>
PayoffVector terminal_payoff(const BasicGraph<Payoff>& g, const Edge<Payoff>& e, Stage k) {
  const Stage at = k + e.delta;
  if (e.to_leaf()) return payoff_at(e.leaf(), at);
  return payoff_at(g.state(e.target_state()).terminal().payoffs, at);
}

template <class Payoff>
CutClosure make_closure(const BasicGraph<Payoff>& g, const ClosureRule& rule) {
  if (const auto* c = std::get_if<ConstClosure>(&rule))
    return [p = c->payoffs](const StateId&, Stage) { return p; };
  if (const auto* m = std::get_if<MapClosure>(&rule))
    return [map = m->payoffs](const StateId& id, Stage) {
      auto it = map.find(id);
      if (it == map.end()) throw Error("missing closure entry for state " + id);
      return it->second;
    };
  return [&g](const StateId& id, Stage k) { return terminal_payoff(g, quit_edge(g, id), k); };
}

template <class Payoff>
FiniteGame unfold(const BasicGraph<Payoff>& g, std::size_t depth, const ClosureRule& rule) {
  return unfold_annotated(g, depth, make_closure(g, rule)).game;
}

// The endless alternating leave-or-continue game: SA and SB hand the turn
// to each other; leaving pays the opponent.
inline GameGraph zero_one_graph() {
  GameGraph g;
  g.name = "zero_one";
  g.start = "SA";
  g.states["SA"] = {Internal<PayoffVector>{
      "A", {{"c", StateId("SB")}, {"l", PayoffVector{{"A", 0}, {"B", 1}}}}}};
  g.states["SB"] = {Internal<PayoffVector>{
      "B", {{"c", StateId("SA")}, {"l", PayoffVector{{"A", 1}, {"B", 0}}}}}};
  return g;
}

// Two-bidder dollar auction with increment 1 and an endless bidding war.
// At DA(k)/DB(k) the decider has committed k and the opponent k+1; quitting
// forfeits what was committed, raising commits k+2.
inline ParamGraph dollar_auction(const Rational& stake) {
  if (stake < Rational(2)) throw Error("dollar auction stake must be at least 2, got " + to_string(stake));
  const AffineExpr lost{0, -1};
  const AffineExpr won{stake - 1, -1};
  ParamGraph g;
  g.name = "dollar_auction";
  g.start = "S0";
  g.states["S0"] = {Internal<AffinePayoff>{
      "A", {{"pass", AffinePayoff{{"A", {}}, {"B", {}}}, 0}, {"bid", StateId("DB"), 0}}}};
  g.states["DB"] = {Internal<AffinePayoff>{
      "B", {{"quit", AffinePayoff{{"A", won}, {"B", lost}}, 0}, {"raise", StateId("DA"), 1}}}};
  g.states["DA"] = {Internal<AffinePayoff>{
      "A", {{"quit", AffinePayoff{{"A", lost}, {"B", won}}, 0}, {"raise", StateId("DB"), 1}}}};
  return g;
}

}  // namespace coind
