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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coind/game.hpp"

namespace coind {

using Count = boost::multiprecision::cpp_int;

// The subgame-perfect equilibria of a finite game.
//
// `optimal` holds, for every internal node (on or off the equilibrium path),
// the actions that some equilibrium of that subgame chooses there. When the
// equilibrium set is a cartesian product of these per-node sets (always the
// case without ties whose continuations pay the mover differently) the count
// equals their product; otherwise `count` is still exact and is_product() is
// false.
struct EquilibriumSet {
  std::map<Address, std::vector<Action>> optimal;
  // Distinct equilibrium payoffs of each subgame, in payoff order.
  std::map<Address, std::vector<PayoffVector>> payoffs;
  Count count = 0;
  // First optimal action in branch order everywhere, given the
  // representative's own continuation payoffs.
  TreeProfile representative;
  PayoffVector payoff;

  Count product_count() const {
    Count c = 1;
    for (const auto& [addr, acts] : optimal) c *= acts.size();
    return c;
  }
  bool is_product() const { return count == product_count(); }
};

namespace detail {

using PayoffClasses = std::map<PayoffVector, Count>;

struct SolvedSubgame {
  PayoffClasses classes;
  PayoffVector representative;
};

// Number of equilibria of a child whose payoff for `who` is at most `bound`.
inline Count count_at_most(const PayoffClasses& classes, const PlayerId& who,
                           const Rational& bound) {
  Count c = 0;
  for (const auto& [p, n] : classes)
    if (p.at(who) <= bound) c += n;
  return c;
}

inline SolvedSubgame solve(const FiniteGame& g, Address& addr, EquilibriumSet& out) {
  if (g.is_leaf()) {
    const auto& p = g.as_leaf().payoffs;
    return {{{p, Count(1)}}, p};
  }
  const Node& n = g.as_node();
  std::vector<SolvedSubgame> children;
  children.reserve(n.branches.size());
  for (const auto& b : n.branches) {
    addr.push_back(b.action);
    children.push_back(solve(b.game, addr, out));
    addr.pop_back();
  }

  // A child's equilibrium class (p, k) extends to k * prod_{c != a} #{eq of c
  // paying the mover <= p} equilibria of this node that choose a.
  SolvedSubgame here;
  std::vector<Action> optimal;
  for (std::size_t a = 0; a < children.size(); ++a) {
    bool used = false;
    for (const auto& [p, k] : children[a].classes) {
      Count weight = k;
      const Rational& mine = p.at(n.mover);
      for (std::size_t c = 0; c < children.size() && weight != 0; ++c)
        if (c != a) weight *= count_at_most(children[c].classes, n.mover, mine);
      if (weight == 0) continue;
      used = true;
      here.classes[p] += weight;
    }
    if (used) optimal.push_back(n.branches[a].action);
  }

  std::size_t best = 0;
  for (std::size_t a = 1; a < children.size(); ++a)
    if (prefers(children[a].representative, children[best].representative, n.mover) ==
        Preference::Better)
      best = a;
  here.representative = children[best].representative;
  out.representative[addr] = n.branches[best].action;
  out.optimal[addr] = std::move(optimal);
  auto& listed = out.payoffs[addr];
  for (const auto& [p, k] : here.classes) listed.push_back(p);
  return here;
}

}  // namespace detail

// Backward induction that keeps every tie.
inline EquilibriumSet backward_induction(const FiniteGame& g) {
  EquilibriumSet out;
  Address addr;
  auto root = detail::solve(g, addr, out);
  out.count = 0;
  for (const auto& [p, k] : root.classes) out.count += k;
  out.payoff = root.representative;
  if (g.is_leaf()) out.payoffs[{}] = {root.representative};
  return out;
}

namespace detail {

struct ProfileWithPayoff {
  TreeProfile profile;
  PayoffVector payoff;
};

inline std::vector<ProfileWithPayoff> expand(const FiniteGame& g, Address& addr) {
  if (g.is_leaf()) return {{{}, g.as_leaf().payoffs}};
  const Node& n = g.as_node();
  std::vector<std::vector<ProfileWithPayoff>> kids;
  for (const auto& b : n.branches) {
    addr.push_back(b.action);
    kids.push_back(expand(b.game, addr));
    addr.pop_back();
  }
  std::vector<ProfileWithPayoff> out;
  std::vector<std::size_t> pick(kids.size(), 0);
  for (;;) {
    Rational best = kids[0][pick[0]].payoff.at(n.mover);
    for (std::size_t c = 1; c < kids.size(); ++c)
      best = std::max(best, kids[c][pick[c]].payoff.at(n.mover));
    for (std::size_t a = 0; a < kids.size(); ++a) {
      const auto& chosen = kids[a][pick[a]];
      if (chosen.payoff.at(n.mover) != best) continue;
      ProfileWithPayoff combined{{}, chosen.payoff};
      for (std::size_t c = 0; c < kids.size(); ++c)
        combined.profile.insert(kids[c][pick[c]].profile.begin(), kids[c][pick[c]].profile.end());
      combined.profile[addr] = n.branches[a].action;
      out.push_back(std::move(combined));
    }
    std::size_t i = kids.size();
    while (i > 0) {
      --i;
      if (++pick[i] < kids[i].size()) break;
      pick[i] = 0;
      if (i == 0) return out;
    }
  }
}

}  // namespace detail

// Materializes every equilibrium by composing subgame equilibria bottom-up.
inline std::vector<TreeProfile> equilibrium_profiles(const FiniteGame& g,
                                                     std::uint64_t cap = 1u << 20) {
  auto eq = backward_induction(g);
  if (eq.count > cap)
    throw CapExceeded("equilibrium set has " + eq.count.str() + " profiles, cap is " +
                      std::to_string(cap));
  Address addr;
  auto expanded = detail::expand(g, addr);
  std::vector<TreeProfile> out;
  out.reserve(expanded.size());
  for (auto& e : expanded) out.push_back(std::move(e.profile));
  return out;
}

// How ancestors treat a tied child whose equilibria pay the mover differently.
enum class TieRule {
  // optimal if some continuation equilibrium reaches the maximum
  AnyContinuation,
  // optimal only if every continuation equilibrium reaches it; falls back to
  // AnyContinuation at nodes where no action qualifies
  EveryContinuation,
};

namespace detail {

inline std::vector<PayoffVector> rule_sets(const FiniteGame& g, TieRule rule, Address& addr,
                                           std::map<Address, std::vector<Action>>& out) {
  if (g.is_leaf()) return {g.as_leaf().payoffs};
  const Node& n = g.as_node();
  std::vector<std::vector<PayoffVector>> kids;
  for (const auto& b : n.branches) {
    addr.push_back(b.action);
    kids.push_back(rule_sets(b.game, rule, addr, out));
    addr.pop_back();
  }
  std::optional<Rational> top;
  for (const auto& k : kids)
    for (const auto& p : k)
      if (!top || p.at(n.mover) > *top) top = p.at(n.mover);
  std::vector<std::size_t> picked;
  for (std::size_t a = 0; a < kids.size(); ++a) {
    bool any = std::any_of(kids[a].begin(), kids[a].end(),
                           [&](const PayoffVector& p) { return p.at(n.mover) == *top; });
    bool all = std::all_of(kids[a].begin(), kids[a].end(),
                           [&](const PayoffVector& p) { return p.at(n.mover) == *top; });
    if (rule == TieRule::EveryContinuation ? all : any) picked.push_back(a);
  }
  if (picked.empty()) {
    for (std::size_t a = 0; a < kids.size(); ++a)
      if (std::any_of(kids[a].begin(), kids[a].end(),
                      [&](const PayoffVector& p) { return p.at(n.mover) == *top; }))
        picked.push_back(a);
  }
  std::vector<Action> acts;
  std::set<PayoffVector> reach;
  for (auto a : picked) {
    acts.push_back(n.branches[a].action);
    for (const auto& p : kids[a])
      if (p.at(n.mover) == *top) reach.insert(p);
  }
  out[addr] = std::move(acts);
  return {reach.begin(), reach.end()};
}

}  // namespace detail

// Per-node optimal actions obtained by propagating sets of continuation
// payoffs under `rule`. Unlike backward_induction this is a local
// characterization: its cartesian product need not be the equilibrium set.
inline std::map<Address, std::vector<Action>> optimal_actions_by_rule(const FiniteGame& g,
                                                                      TieRule rule) {
  std::map<Address, std::vector<Action>> out;
  Address addr;
  detail::rule_sets(g, rule, addr, out);
  return out;
}

enum class DeviationScope {
  // one-shot deviations at every decision node: subgame perfection
  Subgames,
  // whole-strategy deviations evaluated at the root only: Nash equilibrium
  RootOnly,
};

struct Counterexample {
  Address address;
  PlayerId mover;
  Action deviation;
  PayoffVector profile_payoff;
  PayoffVector deviation_payoff;
  Rational gain;
};

struct FiniteVerdict {
  std::optional<Counterexample> counterexample;
  bool is_spe() const { return !counterexample; }
};

namespace detail {

// Post-order walk: the first counterexample reported is the deepest one on
// the first branches, the order in which backward induction meets nodes.
inline PayoffVector one_shot_scan(const FiniteGame& g, const TreeProfile& s, Address& addr,
                                  std::optional<Counterexample>& found) {
  if (g.is_leaf()) return g.as_leaf().payoffs;
  const Node& n = g.as_node();
  auto it = s.find(addr);
  if (it == s.end()) throw ProfileError("profile has no choice at " + to_string(addr));
  std::vector<PayoffVector> values;
  values.reserve(n.branches.size());
  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < n.branches.size(); ++i) {
    const auto& b = n.branches[i];
    if (b.action == it->second) chosen = i;
    addr.push_back(b.action);
    values.push_back(one_shot_scan(b.game, s, addr, found));
    addr.pop_back();
  }
  if (!chosen)
    throw ProfileError("action '" + it->second + "' does not exist at " + to_string(addr));
  if (!found) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i == *chosen) continue;
      if (prefers(values[i], values[*chosen], n.mover) == Preference::Better) {
        found = Counterexample{addr, n.mover, n.branches[i].action, values[*chosen], values[i],
                               values[i].at(n.mover) - values[*chosen].at(n.mover)};
        break;
      }
    }
  }
  return values[*chosen];
}

// Best payoff `who` can secure from `g` when everybody else follows `s`.
// Records `who`'s best-response choices (first best in branch order).
inline PayoffVector best_response(const FiniteGame& g, const TreeProfile& s, const PlayerId& who,
                                  Address& addr, TreeProfile& choices) {
  if (g.is_leaf()) return g.as_leaf().payoffs;
  const Node& n = g.as_node();
  auto it = s.find(addr);
  if (it == s.end()) throw ProfileError("profile has no choice at " + to_string(addr));
  if (n.mover != who) {
    const FiniteGame* next = find_branch(n, it->second);
    if (next == nullptr)
      throw ProfileError("action '" + it->second + "' does not exist at " + to_string(addr));
    addr.push_back(it->second);
    auto v = best_response(*next, s, who, addr, choices);
    addr.pop_back();
    return v;
  }
  std::optional<PayoffVector> best;
  for (const auto& b : n.branches) {
    addr.push_back(b.action);
    auto v = best_response(b.game, s, who, addr, choices);
    addr.pop_back();
    if (!best || prefers(v, *best, who) == Preference::Better) {
      best = v;
      choices[addr] = b.action;
    }
  }
  return *best;
}

}  // namespace detail

inline FiniteVerdict is_spe_finite(const FiniteGame& g, const TreeProfile& s,
                                   DeviationScope scope = DeviationScope::Subgames) {
  require_total(g, s);
  FiniteVerdict verdict;
  if (scope == DeviationScope::Subgames) {
    Address addr;
    detail::one_shot_scan(g, s, addr, verdict.counterexample);
    return verdict;
  }
  const PayoffVector current = play_finite(g, s);
  for (const auto& who : players_of(g)) {
    TreeProfile choices;
    Address addr;
    auto best = detail::best_response(g, s, who, addr, choices);
    if (prefers(best, current, who) != Preference::Better) continue;
    // Report the first node on the deviating play where `who` departs from s.
    const FiniteGame* cur = &g;
    Address at;
    while (!cur->is_leaf()) {
      const Node& n = cur->as_node();
      Action next = s.at(at);
      if (n.mover == who && choices.at(at) != next) {
        verdict.counterexample =
            Counterexample{at, who, choices.at(at), current, best, best.at(who) - current.at(who)};
        return verdict;
      }
      at.push_back(next);
      cur = find_branch(n, next);
    }
  }
  return verdict;
}

// Number of total profiles of g: product of branch counts over internal nodes.
inline Count profile_space(const FiniteGame& g) {
  Count c = 1;
  for_each_node(g, [&](const Address&, const Node& n) { c *= n.branches.size(); });
  return c;
}

// Exhaustive enumeration of all total profiles, filtered by is_spe_finite.
// Profiles come out in odometer order over pre-order addresses.
inline std::vector<TreeProfile> brute_force_spe(const FiniteGame& g,
                                                std::uint64_t cap = 1u << 20) {
  if (profile_space(g) > cap)
    throw CapExceeded("profile space " + profile_space(g).str() + " exceeds cap " +
                      std::to_string(cap));
  std::vector<std::pair<Address, const Node*>> nodes;
  for_each_node(g, [&](const Address& a, const Node& n) { nodes.emplace_back(a, &n); });
  std::vector<std::size_t> idx(nodes.size(), 0);
  std::vector<TreeProfile> out;
  TreeProfile s;
  for (const auto& [a, n] : nodes) s[a] = n->branches.front().action;
  for (;;) {
    if (is_spe_finite(g, s).is_spe()) out.push_back(s);
    std::size_t i = nodes.size();
    for (;;) {
      if (i == 0) return out;
      --i;
      const Node& n = *nodes[i].second;
      if (++idx[i] < n.branches.size()) {
        s[nodes[i].first] = n.branches[idx[i]].action;
        break;
      }
      idx[i] = 0;
      s[nodes[i].first] = n.branches.front().action;
    }
  }
}

}  // namespace coind
