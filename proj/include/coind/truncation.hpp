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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coind/coinduction.hpp"

namespace coind {

enum class Freedom {
  Forced,  // one and the same action is the only optimal one at all of the player's nodes
  Free,    // every action is optimal at all of the player's nodes
  Mixed,   // neither
  Absent,  // the player never moves
};

inline const char* to_string(Freedom f) {
  switch (f) {
    case Freedom::Forced: return "forced";
    case Freedom::Free: return "free";
    case Freedom::Mixed: return "mixed";
    case Freedom::Absent: return "absent";
  }
  return "?";
}

struct PlayerFreedom {
  Freedom freedom = Freedom::Absent;
  std::optional<Action> action;  // set when forced
  friend bool operator==(const PlayerFreedom&, const PlayerFreedom&) = default;
};

using Characterization = std::map<PlayerId, PlayerFreedom>;

inline std::string to_string(const PlayerFreedom& f) {
  if (f.freedom == Freedom::Forced) return "forced " + *f.action;
  return to_string(f.freedom);
}

inline std::string to_string(const Characterization& c) {
  std::string out;
  for (const auto& [who, f] : c) {
    if (!out.empty()) out += ", ";
    out += who + " " + to_string(f);
  }
  return out;
}

inline Characterization characterize(const FiniteGame& g, const EquilibriumSet& eq,
                                     const std::set<PlayerId>& players) {
  struct Tally {
    bool any = false;
    bool forced = true;
    bool free = true;
    std::optional<Action> action;
  };
  std::map<PlayerId, Tally> tally;
  for_each_node(g, [&](const Address& addr, const Node& n) {
    auto& t = tally[n.mover];
    t.any = true;
    const auto& opt = eq.optimal.at(addr);
    if (opt.size() != 1 || (t.action && *t.action != opt.front())) t.forced = false;
    else t.action = opt.front();
    if (opt.size() != n.branches.size()) t.free = false;
  });
  Characterization out;
  for (const auto& who : players) {
    auto it = tally.find(who);
    if (it == tally.end() || !it->second.any) {
      out[who] = {Freedom::Absent, std::nullopt};
    } else if (it->second.forced) {
      out[who] = {Freedom::Forced, it->second.action};
    } else if (it->second.free) {
      out[who] = {Freedom::Free, std::nullopt};
    } else {
      out[who] = {Freedom::Mixed, std::nullopt};
    }
  }
  return out;
}

// The same description for a stationary profile on a graph: a player is
// forced to an action if the profile picks it at every state the player owns.
template <class Payoff>
Characterization characterize(const BasicGraph<Payoff>& g, const StationaryProfile& s) {
  Characterization out;
  for (const auto& who : players_of(g)) out[who] = {Freedom::Absent, std::nullopt};
  for (const auto& id : internal_states(g)) {
    const auto& mover = g.state(id).internal().mover;
    auto& f = out[mover];
    const Action& a = s.at(id);
    if (f.freedom == Freedom::Absent) f = {Freedom::Forced, a};
    else if (f.freedom == Freedom::Forced && *f.action != a) f = {Freedom::Mixed, std::nullopt};
  }
  return out;
}

struct DepthSummary {
  std::size_t depth = 0;
  std::string closure;
  Count count = 0;
  Characterization players;
  PayoffVector payoff;
};

template <class Payoff>
DepthSummary summarize_depth(const BasicGraph<Payoff>& g, std::size_t depth,
                             const ClosureRule& closure) {
  auto game = unfold(g, depth, closure);
  auto eq = backward_induction(game);
  return {depth, describe(closure), eq.count, characterize(game, eq, players_of(g)), eq.payoff};
}

enum class ExtrapolationVerdict { ConsistentLimit, ParityDisagreement, NoPattern };

inline const char* to_string(ExtrapolationVerdict v) {
  switch (v) {
    case ExtrapolationVerdict::ConsistentLimit: return "ConsistentLimit";
    case ExtrapolationVerdict::ParityDisagreement: return "ParityDisagreement";
    case ExtrapolationVerdict::NoPattern: return "NoPattern";
  }
  return "?";
}

// The settled characterization of one parity class of depths: the one at its
// largest depth, provided its two largest depths agree.
struct ParityLimit {
  std::optional<Characterization> limit;
  bool stable = false;
  // Whether the limit describes one of the infinite game's stationary SPEs.
  bool matches_infinite = false;
};

struct ExtrapolationReport {
  std::vector<DepthSummary> summaries;
  std::vector<StationaryProfile> infinite_spes;
  std::vector<Characterization> infinite_characterizations;
  ParityLimit odd;
  ParityLimit even;
  ExtrapolationVerdict verdict = ExtrapolationVerdict::NoPattern;
  std::string explanation;
};

namespace detail {

inline ParityLimit parity_limit(const std::vector<const DepthSummary*>& cls,
                                const std::vector<Characterization>& infinite) {
  ParityLimit out;
  if (cls.empty()) return out;
  out.limit = cls.back()->players;
  out.stable = cls.size() < 2 || cls[cls.size() - 2]->players == cls.back()->players;
  out.matches_infinite =
      std::find(infinite.begin(), infinite.end(), *out.limit) != infinite.end();
  return out;
}

}  // namespace detail

// Verdict from the summaries and the infinite characterizations alone.
inline void decide_extrapolation(ExtrapolationReport& r) {
  std::vector<const DepthSummary*> odd, even;
  std::vector<const DepthSummary*> sorted;
  for (const auto& s : r.summaries) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const DepthSummary* a, const DepthSummary* b) { return a->depth < b->depth; });
  for (const auto* s : sorted) (s->depth % 2 ? odd : even).push_back(s);
  r.odd = detail::parity_limit(odd, r.infinite_characterizations);
  r.even = detail::parity_limit(even, r.infinite_characterizations);

  const bool have_odd = r.odd.limit.has_value();
  const bool have_even = r.even.limit.has_value();
  if ((have_odd && !r.odd.stable) || (have_even && !r.even.stable)) {
    r.verdict = ExtrapolationVerdict::NoPattern;
    r.explanation = "truncations have not settled within the requested depths";
    return;
  }
  if (have_odd && have_even && *r.odd.limit != *r.even.limit) {
    r.verdict = ExtrapolationVerdict::ParityDisagreement;
    r.explanation = "odd depths settle on [" + to_string(*r.odd.limit) + "], even depths on [" +
                    to_string(*r.even.limit) + "]";
    if (!r.odd.matches_infinite && !r.even.matches_infinite)
      r.explanation += "; neither describes a stationary SPE of the infinite game";
    return;
  }
  r.verdict = ExtrapolationVerdict::ConsistentLimit;
  const auto& lim = have_odd ? *r.odd.limit : *r.even.limit;
  r.explanation = "all truncations settle on [" + to_string(lim) + "]";
  if (!(have_odd ? r.odd.matches_infinite : r.even.matches_infinite))
    r.explanation += ", which describes no stationary SPE of the infinite game";
}

template <class Payoff>
ExtrapolationReport extrapolation_report(const BasicGraph<Payoff>& g,
                                         const std::vector<std::size_t>& depths,
                                         const ClosureRule& closure,
                                         std::uint64_t cap = 1u << 16) {
  if (depths.empty()) throw Error("extrapolation needs at least one depth");
  ExtrapolationReport r;
  for (auto d : depths) r.summaries.push_back(summarize_depth(g, d, closure));
  r.infinite_spes = stationary_spes(g, cap);
  for (const auto& s : r.infinite_spes) r.infinite_characterizations.push_back(characterize(g, s));
  decide_extrapolation(r);
  return r;
}

}  // namespace coind
