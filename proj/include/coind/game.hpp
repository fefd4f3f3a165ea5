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
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coind/rational.hpp"

namespace coind {

using PlayerId = std::string;
using Action = std::string;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A strategy profile does not cover a decision point it is asked about.
class ProfileError : public Error {
 public:
  using Error::Error;
};

// An exhaustive search would exceed its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

struct PayoffVector {
  std::map<PlayerId, Rational> entries;

  PayoffVector() = default;
  PayoffVector(std::initializer_list<std::pair<const PlayerId, Rational>> init)
      : entries(init) {}

  const Rational& at(const PlayerId& who) const {
    auto it = entries.find(who);
    if (it == entries.end()) throw Error("unknown player '" + who + "'");
    return it->second;
  }
  bool covers(const PlayerId& who) const { return entries.count(who) != 0; }

  friend bool operator==(const PayoffVector&, const PayoffVector&) = default;
  friend auto operator<=>(const PayoffVector& a, const PayoffVector& b) {
    return a.entries <=> b.entries;
  }
};

inline std::string to_string(const PayoffVector& p) {
  std::string out = "(";
  bool first = true;
  for (const auto& [who, value] : p.entries) {
    if (!first) out += ", ";
    first = false;
    out += who + ":" + to_string(value);
  }
  return out + ")";
}

enum class Preference { Better, Equal, Worse };

inline const char* to_string(Preference p) {
  switch (p) {
    case Preference::Better: return "Better";
    case Preference::Equal: return "Equal";
    case Preference::Worse: return "Worse";
  }
  return "?";
}

// Ordinal comparison of `p` against `q` from the point of view of `who`.
inline Preference prefers(const PayoffVector& p, const PayoffVector& q,
                          const PlayerId& who) {
  const Rational& a = p.at(who);
  const Rational& b = q.at(who);
  if (a > b) return Preference::Better;
  if (a < b) return Preference::Worse;
  return Preference::Equal;
}

// Finite game trees. A node address is the path of action labels from the
// root; the root has the empty address.
using Address = std::vector<Action>;

inline std::string to_string(const Address& addr) {
  if (addr.empty()) return "/";
  std::string out;
  for (const auto& a : addr) out += "/" + a;
  return out;
}

struct FiniteGame;
struct Branch;

struct Leaf {
  PayoffVector payoffs;
  friend bool operator==(const Leaf&, const Leaf&) = default;
};

struct Node {
  PlayerId mover;
  std::vector<Branch> branches;
  friend bool operator==(const Node&, const Node&);
};

struct FiniteGame {
  std::variant<Leaf, Node> value;

  static FiniteGame leaf(PayoffVector p) { return {Leaf{std::move(p)}}; }
  static FiniteGame node(PlayerId mover, std::vector<Branch> branches);

  bool is_leaf() const { return std::holds_alternative<Leaf>(value); }
  const Leaf& as_leaf() const { return std::get<Leaf>(value); }
  const Node& as_node() const { return std::get<Node>(value); }

  friend bool operator==(const FiniteGame&, const FiniteGame&) = default;
};

struct Branch {
  Action action;
  FiniteGame game;
  friend bool operator==(const Branch&, const Branch&) = default;
};

inline bool operator==(const Node& a, const Node& b) {
  return a.mover == b.mover && a.branches == b.branches;
}

inline FiniteGame FiniteGame::node(PlayerId mover, std::vector<Branch> branches) {
  return {Node{std::move(mover), std::move(branches)}};
}

// Chosen action per internal node address.
using TreeProfile = std::map<Address, Action>;

inline const FiniteGame* find_branch(const Node& node, const Action& action) {
  for (const auto& b : node.branches)
    if (b.action == action) return &b.game;
  return nullptr;
}

inline const FiniteGame& subgame_at(const FiniteGame& g, const Address& addr) {
  const FiniteGame* cur = &g;
  for (const auto& a : addr) {
    if (cur->is_leaf()) throw Error("address " + to_string(addr) + " passes through a leaf");
    cur = find_branch(cur->as_node(), a);
    if (cur == nullptr) throw Error("address " + to_string(addr) + " does not exist");
  }
  return *cur;
}

namespace detail {

template <class F>
void visit_nodes(const FiniteGame& g, Address& addr, F&& f) {
  if (g.is_leaf()) return;
  const Node& n = g.as_node();
  f(addr, n);
  for (const auto& b : n.branches) {
    addr.push_back(b.action);
    visit_nodes(b.game, addr, f);
    addr.pop_back();
  }
}

}  // namespace detail

// Calls f(address, node) for every internal node in pre-order, branch order.
template <class F>
void for_each_node(const FiniteGame& g, F&& f) {
  Address addr;
  detail::visit_nodes(g, addr, f);
}

inline std::vector<Address> internal_addresses(const FiniteGame& g) {
  std::vector<Address> out;
  for_each_node(g, [&](const Address& a, const Node&) { out.push_back(a); });
  return out;
}

inline std::size_t depth(const FiniteGame& g) {
  if (g.is_leaf()) return 0;
  std::size_t d = 0;
  for (const auto& b : g.as_node().branches) d = std::max(d, depth(b.game));
  return d + 1;
}

// Players that appear as movers or payoff keys anywhere in the tree.
inline std::set<PlayerId> players_of(const FiniteGame& g) {
  std::set<PlayerId> out;
  if (g.is_leaf()) {
    for (const auto& [who, v] : g.as_leaf().payoffs.entries) out.insert(who);
    return out;
  }
  out.insert(g.as_node().mover);
  for (const auto& b : g.as_node().branches) {
    auto sub = players_of(b.game);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline void check_payoffs(const PayoffVector& p, const std::set<PlayerId>& players,
                          const std::string& where, ValidationReport& report) {
  for (const auto& who : players)
    if (!p.covers(who)) report.violations.push_back("missing payoff for " + who + where);
  for (const auto& [who, v] : p.entries)
    if (!players.count(who))
      report.violations.push_back("payoff for undeclared player " + who + where);
}

inline void validate_tree(const FiniteGame& g, const std::set<PlayerId>& players,
                          Address& addr, ValidationReport& report) {
  const std::string where = addr.empty() ? "" : " at " + to_string(addr);
  if (g.is_leaf()) {
    check_payoffs(g.as_leaf().payoffs, players, where, report);
    return;
  }
  const Node& n = g.as_node();
  if (n.mover.empty()) report.violations.push_back("empty player id" + where);
  else if (!players.count(n.mover))
    report.violations.push_back("undeclared mover " + n.mover + where);
  if (n.branches.empty()) report.violations.push_back("empty branch list" + where);
  std::set<Action> seen;
  for (const auto& b : n.branches) {
    if (!seen.insert(b.action).second)
      report.violations.push_back("duplicate action label '" + b.action + "'" + where);
    addr.push_back(b.action);
    validate_tree(b.game, players, addr, report);
    addr.pop_back();
  }
}

}  // namespace detail

inline ValidationReport validate_game(const FiniteGame& g, const std::set<PlayerId>& players) {
  ValidationReport report;
  for (const auto& p : players)
    if (p.empty()) report.violations.push_back("empty player id");
  Address addr;
  detail::validate_tree(g, players, addr, report);
  return report;
}

inline PayoffVector play_finite(const FiniteGame& g, const TreeProfile& s) {
  const FiniteGame* cur = &g;
  Address addr;
  while (!cur->is_leaf()) {
    auto it = s.find(addr);
    if (it == s.end()) throw ProfileError("profile has no choice at " + to_string(addr));
    const FiniteGame* next = find_branch(cur->as_node(), it->second);
    if (next == nullptr)
      throw ProfileError("action '" + it->second + "' does not exist at " + to_string(addr));
    addr.push_back(it->second);
    cur = next;
  }
  return cur->as_leaf().payoffs;
}

// Throws ProfileError unless `s` chooses an existing action at exactly the
// internal addresses of `g`.
inline void require_total(const FiniteGame& g, const TreeProfile& s) {
  std::size_t covered = 0;
  for_each_node(g, [&](const Address& addr, const Node& n) {
    auto it = s.find(addr);
    if (it == s.end()) throw ProfileError("profile has no choice at " + to_string(addr));
    if (find_branch(n, it->second) == nullptr)
      throw ProfileError("action '" + it->second + "' does not exist at " + to_string(addr));
    ++covered;
  });
  if (covered != s.size()) throw ProfileError("profile names addresses that are not decision nodes");
}

}  // namespace coind
