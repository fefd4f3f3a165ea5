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

// Independent reference implementations used by the tests. They follow the
// textbook definitions directly and share no code with the solvers beyond
// the data types.

#pragma once

#include <cstdint>
#include <algorithm>
#include <functional>
#include <ostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "coind/coind.hpp"

namespace coind {

// Readable values in test failure messages.
inline void PrintTo(const PayoffVector& p, std::ostream* os) { *os << to_string(p); }
inline void PrintTo(const FiniteGame& g, std::ostream* os) { *os << serialize(g); }

}  // namespace coind

namespace coind::oracle {

// Payoff of following `s` from `g`.
inline PayoffVector outcome(const FiniteGame& g, const TreeProfile& s, Address addr = {}) {
  const FiniteGame* cur = &subgame_at(g, addr);
  while (!cur->is_leaf()) {
    const Action& a = s.at(addr);
    addr.push_back(a);
    cur = find_branch(cur->as_node(), a);
  }
  return cur->as_leaf().payoffs;
}

// Every way of changing the actions of `who` inside the subgame at `root`,
// passed to `f` as a modified copy of `s`.
inline void for_each_strategy_of(const FiniteGame& g, const Address& root, const PlayerId& who,
                                 const TreeProfile& s,
                                 const std::function<void(const TreeProfile&)>& f) {
  std::vector<std::pair<Address, std::vector<Action>>> slots;
  for (const auto& addr : internal_addresses(g)) {
    if (addr.size() < root.size() || !std::equal(root.begin(), root.end(), addr.begin())) continue;
    const auto& n = subgame_at(g, addr).as_node();
    if (n.mover != who) continue;
    std::vector<Action> acts;
    for (const auto& b : n.branches) acts.push_back(b.action);
    slots.emplace_back(addr, acts);
  }
  std::vector<std::size_t> idx(slots.size(), 0);
  TreeProfile t = s;
  while (true) {
    for (std::size_t i = 0; i < slots.size(); ++i) t[slots[i].first] = slots[i].second[idx[i]];
    f(t);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == slots[i].second.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
}

// Subgame perfection by definition: in every subgame, no player gains by any
// change of strategy whatsoever (not only single-node deviations).
inline bool is_spe_by_definition(const FiniteGame& g, const TreeProfile& s) {
  for (const auto& root : internal_addresses(g)) {
    const PayoffVector base = outcome(g, s, root);
    std::set<PlayerId> movers;
    for_each_node(subgame_at(g, root), [&](const Address&, const Node& n) { movers.insert(n.mover); });
    for (const auto& who : movers) {
      bool better = false;
      for_each_strategy_of(g, root, who, s, [&](const TreeProfile& t) {
        if (outcome(g, t, root).at(who) > base.at(who)) better = true;
      });
      if (better) return false;
    }
  }
  return true;
}

// Nash by definition: no player gains at the root by any strategy change.
inline bool is_nash_by_definition(const FiniteGame& g, const TreeProfile& s) {
  if (g.is_leaf()) return true;
  const PayoffVector base = outcome(g, s);
  for (const auto& who : players_of(g)) {
    bool better = false;
    for_each_strategy_of(g, {}, who, s, [&](const TreeProfile& t) {
      if (outcome(g, t).at(who) > base.at(who)) better = true;
    });
    if (better) return false;
  }
  return true;
}

inline std::vector<TreeProfile> all_profiles(const FiniteGame& g) {
  std::vector<std::pair<Address, std::vector<Action>>> slots;
  for (const auto& addr : internal_addresses(g)) {
    std::vector<Action> acts;
    for (const auto& b : subgame_at(g, addr).as_node().branches) acts.push_back(b.action);
    slots.emplace_back(addr, acts);
  }
  std::vector<TreeProfile> out;
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    TreeProfile t;
    for (std::size_t i = 0; i < slots.size(); ++i) t[slots[i].first] = slots[i].second[idx[i]];
    out.push_back(t);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == slots[i].second.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

inline std::set<TreeProfile> spe_set_by_definition(const FiniteGame& g) {
  std::set<TreeProfile> out;
  for (const auto& s : all_profiles(g))
    if (is_spe_by_definition(g, s)) out.insert(s);
  return out;
}

// Random games ----------------------------------------------------------

struct GameShape {
  std::size_t max_depth = 4;
  std::size_t max_branching = 3;
  int max_payoff = 5;
  std::vector<PlayerId> players{"A", "B"};
};

inline PayoffVector random_payoff(std::mt19937_64& rng, const GameShape& shape) {
  std::uniform_int_distribution<int> v(0, shape.max_payoff);
  PayoffVector p;
  for (const auto& who : shape.players) p.entries[who] = Rational(v(rng));
  return p;
}

inline FiniteGame random_game(std::mt19937_64& rng, const GameShape& shape, std::size_t depth = 0) {
  std::bernoulli_distribution stop(depth == 0 ? 0.0 : 0.35);
  if (depth >= shape.max_depth || stop(rng)) return FiniteGame::leaf(random_payoff(rng, shape));
  std::uniform_int_distribution<std::size_t> width(1, shape.max_branching);
  std::uniform_int_distribution<std::size_t> who(0, shape.players.size() - 1);
  std::vector<Branch> branches;
  const std::size_t w = width(rng);
  for (std::size_t i = 0; i < w; ++i)
    branches.push_back({std::string(1, static_cast<char>('a' + i)), random_game(rng, shape, depth + 1)});
  return FiniteGame::node(shape.players[who(rng)], std::move(branches));
}

// Random games whose profile space stays at most `limit`.
inline FiniteGame random_game_within(std::mt19937_64& rng, const GameShape& shape,
                                     std::uint64_t limit) {
  while (true) {
    auto g = random_game(rng, shape);
    if (profile_space(g) <= limit) return g;
  }
}

// Random graphs ---------------------------------------------------------

inline GameGraph random_graph(std::mt19937_64& rng, std::size_t max_states = 3,
                              std::size_t max_edges = 2, int max_payoff = 3) {
  std::uniform_int_distribution<std::size_t> n_states(1, max_states);
  std::uniform_int_distribution<std::size_t> n_edges(1, max_edges);
  std::uniform_int_distribution<int> pay(0, max_payoff);
  std::bernoulli_distribution to_leaf(0.4), mover(0.5);
  const std::size_t n = n_states(rng);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  GameGraph g;
  g.name = "random";
  for (std::size_t i = 0; i < n; ++i) {
    Internal<PayoffVector> in;
    in.mover = mover(rng) ? "A" : "B";
    const std::size_t m = n_edges(rng);
    for (std::size_t j = 0; j < m; ++j) {
      Edge<PayoffVector> e;
      e.action = std::string(1, static_cast<char>('a' + j));
      if (to_leaf(rng)) e.target = PayoffVector{{"A", Rational(pay(rng))}, {"B", Rational(pay(rng))}};
      else e.target = "S" + std::to_string(pick(rng));
      in.edges.push_back(std::move(e));
    }
    g.states["S" + std::to_string(i)] = {in};
  }
  g.start = "S0";
  return g;
}

inline std::vector<StationaryProfile> all_stationary_profiles(const GameGraph& g) {
  std::vector<std::pair<StateId, std::vector<Action>>> slots;
  for (const auto& [id, def] : g.states) {
    if (def.is_terminal()) continue;
    std::vector<Action> acts;
    for (const auto& e : def.internal().edges) acts.push_back(e.action);
    slots.emplace_back(id, acts);
  }
  std::vector<StationaryProfile> out;
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    StationaryProfile s;
    for (std::size_t i = 0; i < slots.size(); ++i) s[slots[i].first] = slots[i].second[idx[i]];
    out.push_back(s);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == slots[i].second.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

// Payoff of following `s` from `id`, or nullopt if the play never ends.
inline std::optional<PayoffVector> walk(const GameGraph& g, const StationaryProfile& s, StateId id) {
  for (std::size_t step = 0; step <= g.states.size(); ++step) {
    const auto& def = g.state(id);
    if (def.is_terminal()) return def.terminal().payoffs;
    const auto* e = def.internal().find(s.at(id));
    if (e->to_leaf()) return e->leaf();
    id = e->target_state();
  }
  return std::nullopt;
}

inline std::optional<PayoffVector> edge_value(const GameGraph& g, const StationaryProfile& s,
                                              const Edge<PayoffVector>& e) {
  if (e.to_leaf()) return e.leaf();
  return walk(g, s, e.target_state());
}

// Stationary SPE by definition: every play converges and no single-state
// deviation (then returning to s) helps its mover.
inline bool is_stationary_spe_by_definition(const GameGraph& g, const StationaryProfile& s) {
  for (const auto& [id, def] : g.states)
    if (!walk(g, s, id)) return false;
  for (const auto& [id, def] : g.states) {
    if (def.is_terminal()) continue;
    const auto& in = def.internal();
    const auto base = *walk(g, s, id);
    for (const auto& e : in.edges)
      if (edge_value(g, s, e)->at(in.mover) > base.at(in.mover)) return false;
  }
  return true;
}

// Affine comparison by evaluation.
inline std::optional<Stage> first_violation(const AffineExpr& a, const AffineExpr& b, Stage upto) {
  for (Stage k = 0; k <= upto; ++k)
    if (a.at(k) > b.at(k)) return k;
  return std::nullopt;
}

// Random documents ----------------------------------------------------

struct DocumentGen {
  std::mt19937_64 rng;
  explicit DocumentGen(std::uint64_t seed) : rng(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  std::string ident() {
    static const std::vector<std::string> pool{"a", "b", "c", "l", "ℓ", "x_1", "raise", "quit",
                                               "Él", "s'", "v.2", "_z", "pass", "h", "t"};
    return pool[below(pool.size())];
  }
  Rational rational() {
    return Rational(static_cast<std::int64_t>(below(19)) - 9, static_cast<std::int64_t>(below(4)) + 1);
  }
  PayoffVector payoff(const std::vector<PlayerId>& players) {
    PayoffVector p;
    for (const auto& who : players) p.entries[who] = rational();
    return p;
  }
  AffinePayoff affine(const std::vector<PlayerId>& players) {
    AffinePayoff p;
    for (const auto& who : players) p.entries[who] = {rational(), below(2) ? rational() : Rational(0)};
    return p;
  }
  std::vector<PlayerId> players() {
    return below(3) == 0 ? std::vector<PlayerId>{"A", "B", "Δ"} : std::vector<PlayerId>{"A", "B"};
  }

  std::vector<Action> labels(std::size_t n) {
    std::vector<Action> out;
    while (out.size() < n) {
      auto l = ident();
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    return out;
  }

  FiniteGame game(const std::vector<PlayerId>& ps, std::size_t depth) {
    if (depth == 0 || below(3) == 0) return FiniteGame::leaf(payoff(ps));
    std::vector<Branch> branches;
    for (const auto& l : labels(1 + below(3))) branches.push_back({l, game(ps, depth - 1)});
    return FiniteGame::node(ps[below(ps.size())], std::move(branches));
  }

  template <class Payoff, class MakePayoff>
  BasicGraph<Payoff> graph(MakePayoff make, bool param) {
    const auto ps = players();
    BasicGraph<Payoff> g;
    g.name = below(2) ? "g" + std::to_string(below(100)) : "ℊraph";
    const std::size_t n = 1 + below(4);
    std::vector<StateId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("S" + std::to_string(i));
    for (const auto& id : ids) {
      if (below(5) == 0) {
        g.states[id] = {Terminal<Payoff>{make(ps)}};
        continue;
      }
      Internal<Payoff> in;
      in.mover = ps[below(ps.size())];
      for (const auto& l : labels(1 + below(3))) {
        Edge<Payoff> e;
        e.action = l;
        if (below(3) == 0) e.target = make(ps);
        else e.target = ids[below(n)];
        if (param) e.delta = below(2);
        in.edges.push_back(std::move(e));
      }
      g.states[id] = {in};
    }
    g.start = ids[below(n)];
    return g;
  }

  Document document() {
    switch (below(5)) {
      case 0: return game(players(), 4);
      case 1: return graph<PayoffVector>([&](const auto& ps) { return payoff(ps); }, false);
      case 2: return graph<AffinePayoff>([&](const auto& ps) { return affine(ps); }, true);
      case 3: {
        StationaryProfile s;
        for (std::size_t i = 0, n = below(5); i < n; ++i) s["S" + std::to_string(i)] = ident();
        return s;
      }
      default: {
        TreeProfile s;
        s[{}] = ident();
        for (std::size_t i = 0, n = below(5); i < n; ++i) {
          Address a;
          for (std::size_t j = 0, m = 1 + below(3); j < m; ++j) a.push_back(ident());
          s[a] = ident();
        }
        return s;
      }
    }
  }
};

}  // namespace coind::oracle
