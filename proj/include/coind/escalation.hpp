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
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coind/coinduction.hpp"

namespace coind {

// SPE ids are 1-based positions in the list handed to rationalizable_actions.
using SpeId = std::size_t;

struct Support {
  Action action;
  std::vector<SpeId> spes;
};

// Actions that at least one verified SPE prescribes, per internal state, in
// branch order.
struct RationalizableMap {
  std::map<StateId, std::vector<Support>> states;

  const Support* find(const StateId& id, const Action& a) const {
    auto it = states.find(id);
    if (it == states.end()) return nullptr;
    for (const auto& s : it->second)
      if (s.action == a) return &s;
    return nullptr;
  }
};

template <class Payoff>
RationalizableMap rationalizable_actions(const BasicGraph<Payoff>& g,
                                         const std::vector<StationaryProfile>& spes) {
  if (spes.empty()) throw Error("rationalizable actions need at least one SPE");
  for (std::size_t i = 0; i < spes.size(); ++i) {
    auto v = check_spe(g, spes[i]);
    if (!v.is_spe())
      throw Error("profile #" + std::to_string(i + 1) + " is not an SPE: " + to_string(v));
  }
  RationalizableMap out;
  for (const auto& id : internal_states(g)) {
    auto& row = out.states[id];
    for (const auto& e : g.state(id).internal().edges) {
      Support sup{e.action, {}};
      for (std::size_t i = 0; i < spes.size(); ++i)
        if (spes[i].at(id) == e.action) sup.spes.push_back(i + 1);
      if (!sup.spes.empty()) row.push_back(std::move(sup));
    }
  }
  return out;
}

struct EscalationStep {
  StateId state;
  Action action;
  SpeId spe;
  friend bool operator==(const EscalationStep&, const EscalationStep&) = default;
};

// An endless play made only of rationalizable actions: `prefix` from the
// start, then `cycle` forever.
struct EscalationWitness {
  std::vector<EscalationStep> prefix;
  std::vector<EscalationStep> cycle;
};

namespace detail {

struct Hop {
  Action action;
  StateId target;
};

// Rationalizable edges that keep the game going.
template <class Payoff>
std::map<StateId, std::vector<Hop>> rational_hops(const BasicGraph<Payoff>& g,
                                                  const RationalizableMap& map) {
  std::map<StateId, std::vector<Hop>> out;
  for (const auto& id : internal_states(g))
    for (const auto& e : g.state(id).internal().edges) {
      if (map.find(id, e.action) == nullptr || is_terminal_target(g, e)) continue;
      out[id].push_back({e.action, e.target_state()});
    }
  return out;
}

// Breadth-first search in branch order; returns parent links.
inline std::map<StateId, std::pair<StateId, Action>> bfs_tree(
    const std::map<StateId, std::vector<Hop>>& hops, const StateId& from,
    std::vector<StateId>* order = nullptr) {
  std::map<StateId, std::pair<StateId, Action>> parent;
  std::set<StateId> seen{from};
  std::deque<StateId> queue{from};
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    if (order) order->push_back(id);
    auto it = hops.find(id);
    if (it == hops.end()) continue;
    for (const auto& h : it->second)
      if (seen.insert(h.target).second) {
        parent[h.target] = {id, h.action};
        queue.push_back(h.target);
      }
  }
  return parent;
}

inline std::vector<std::pair<StateId, Action>> path_to(
    const std::map<StateId, std::pair<StateId, Action>>& parent, const StateId& from,
    const StateId& to) {
  std::vector<std::pair<StateId, Action>> rev;
  StateId cur = to;
  while (cur != from) {
    const auto& [p, a] = parent.at(cur);
    rev.emplace_back(p, a);
    cur = p;
  }
  return {rev.rbegin(), rev.rend()};
}

// Shortest cycle through `at`, as (state, action) steps starting at `at`.
inline std::optional<std::vector<std::pair<StateId, Action>>> shortest_cycle(
    const std::map<StateId, std::vector<Hop>>& hops, const StateId& at) {
  auto it = hops.find(at);
  if (it == hops.end()) return std::nullopt;
  std::optional<std::vector<std::pair<StateId, Action>>> best;
  for (const auto& h : it->second) {
    std::vector<std::pair<StateId, Action>> cycle{{at, h.action}};
    if (h.target != at) {
      auto parent = bfs_tree(hops, h.target);
      if (!parent.count(at)) continue;
      auto rest = path_to(parent, h.target, at);
      cycle.insert(cycle.end(), rest.begin(), rest.end());
    }
    if (!best || cycle.size() < best->size()) best = std::move(cycle);
  }
  return best;
}

}  // namespace detail

// Shortest lasso of rationalizable edges from the start: shortest prefix,
// then shortest cycle, then branch order.
template <class Payoff>
std::optional<EscalationWitness> escalation_witness(const BasicGraph<Payoff>& g,
                                                    const RationalizableMap& map) {
  const auto hops = detail::rational_hops(g, map);
  std::vector<StateId> order;
  const auto parent = detail::bfs_tree(hops, g.start, &order);
  std::optional<std::vector<std::pair<StateId, Action>>> best_prefix, best_cycle;
  for (const auto& id : order) {
    auto prefix = detail::path_to(parent, g.start, id);
    if (best_prefix && prefix.size() > best_prefix->size()) break;
    auto cycle = detail::shortest_cycle(hops, id);
    if (!cycle) continue;
    if (!best_cycle || cycle->size() < best_cycle->size()) {
      best_prefix = std::move(prefix);
      best_cycle = std::move(cycle);
    }
  }
  if (!best_cycle) return std::nullopt;
  auto step = [&](const std::pair<StateId, Action>& p) {
    return EscalationStep{p.first, p.second, map.find(p.first, p.second)->spes.front()};
  };
  EscalationWitness w;
  for (const auto& p : *best_prefix) w.prefix.push_back(step(p));
  for (const auto& p : *best_cycle) w.cycle.push_back(step(p));
  return w;
}

// Checks a witness against the graph and the map: consecutive steps follow
// their edges, the cycle closes, and every step is rationalizable with a
// matching SPE tag.
template <class Payoff>
bool witness_holds(const BasicGraph<Payoff>& g, const RationalizableMap& map,
                   const EscalationWitness& w) {
  if (w.cycle.empty()) return false;
  std::vector<EscalationStep> all = w.prefix;
  all.insert(all.end(), w.cycle.begin(), w.cycle.end());
  if (all.front().state != g.start) return false;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& st = all[i];
    const auto* sup = map.find(st.state, st.action);
    if (sup == nullptr || std::find(sup->spes.begin(), sup->spes.end(), st.spe) == sup->spes.end())
      return false;
    const auto& def = g.state(st.state);
    if (def.is_terminal()) return false;
    const auto* e = def.internal().find(st.action);
    if (e == nullptr || is_terminal_target(g, *e)) return false;
    const StateId& next = i + 1 < all.size() ? all[i + 1].state : w.cycle.front().state;
    if (e->target_state() != next) return false;
  }
  return true;
}

struct Decision {
  StateId state;
  PlayerId mover;
  Action action;
  friend bool operator==(const Decision&, const Decision&) = default;
};

struct ThreatEntry {
  SpeId spe;
  // What the SPE prescribes for the next other player along this action.
  std::optional<Decision> response;
  // For an action that ends the game: what the SPE prescribes for the next
  // other player had the mover kept the game going instead.
  std::optional<Decision> threat;
};

struct ThreatRow {
  StateId state;
  PlayerId mover;
  Action action;
  bool continues = false;
  std::vector<ThreatEntry> entries;
};

struct ThreatReport {
  std::vector<ThreatRow> rows;
  // States on a cycle of SPE-supported continuations that involves both
  // players: neither side's threat to keep going is credible to the other.
  std::set<StateId> mutually_non_credible;
};

namespace detail {

template <class Payoff>
std::optional<Decision> next_other_decision(const BasicGraph<Payoff>& g, const StationaryProfile& s,
                                            const PlayerId& me, StateId id) {
  for (std::size_t steps = 0; steps <= g.states.size(); ++steps) {
    const auto& def = g.state(id);
    if (def.is_terminal()) return std::nullopt;
    const auto& in = def.internal();
    if (in.mover != me) return Decision{id, in.mover, s.at(id)};
    const auto* e = in.find(s.at(id));
    if (e->to_leaf()) return std::nullopt;
    id = e->target_state();
  }
  return std::nullopt;
}

}  // namespace detail

template <class Payoff>
ThreatReport credible_threat_report(const BasicGraph<Payoff>& g,
                                    const std::vector<StationaryProfile>& spes) {
  const auto map = rationalizable_actions(g, spes);
  ThreatReport report;
  for (const auto& [id, supports] : map.states) {
    const auto& in = g.state(id).internal();
    for (const auto& sup : supports) {
      const auto& e = *in.find(sup.action);
      ThreatRow row{id, in.mover, sup.action, !is_terminal_target(g, e), {}};
      for (SpeId spe : sup.spes) {
        const auto& s = spes[spe - 1];
        ThreatEntry entry{spe, std::nullopt, std::nullopt};
        if (row.continues) {
          entry.response = detail::next_other_decision(g, s, in.mover, e.target_state());
        } else {
          for (const auto& alt : in.edges)
            if (!is_terminal_target(g, alt)) {
              entry.threat = detail::next_other_decision(g, s, in.mover, alt.target_state());
              if (entry.threat) break;
            }
        }
        row.entries.push_back(std::move(entry));
      }
      report.rows.push_back(std::move(row));
    }
  }

  // Strongly connected components of the supported-continuation graph.
  const auto hops = detail::rational_hops(g, map);
  std::map<StateId, std::set<StateId>> reach;
  for (const auto& [id, _] : map.states) {
    auto parent = detail::bfs_tree(hops, id);
    for (const auto& [t, p] : parent) reach[id].insert(t);
  }
  for (const auto& [id, _] : map.states) {
    const auto& mover = g.state(id).internal().mover;
    for (const auto& other : reach[id]) {
      if (!reach[other].count(id)) continue;
      if (g.state(other).internal().mover != mover) {
        report.mutually_non_credible.insert(id);
        break;
      }
    }
  }
  return report;
}

}  // namespace coind
