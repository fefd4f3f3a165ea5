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

#include "coind/dsl.hpp"
#include "coind/graph.hpp"

namespace coind {

// Alice moves, then Bob, then Alice again, each showing heads (h) or tails
// (t). Alice wins a set when two consecutive coins match. Global win, tie and
// loss for Alice are (A:2,B:0), (A:1,B:1) and (A:0,B:2).
inline FiniteGame matching_pennies_sequential() {
  const char* faces[] = {"h", "t"};
  auto outcome = [](const std::string& a, const std::string& b, const std::string& c) {
    const int matches = (a == b) + (b == c);
    return PayoffVector{{"A", Rational(matches)}, {"B", Rational(2 - matches)}};
  };
  std::vector<Branch> root;
  for (const char* first : faces) {
    std::vector<Branch> bob;
    for (const char* second : faces) {
      std::vector<Branch> last;
      for (const char* third : faces)
        last.push_back({third, FiniteGame::leaf(outcome(first, second, third))});
      bob.push_back({second, FiniteGame::node("A", std::move(last))});
    }
    root.push_back({first, FiniteGame::node("B", std::move(bob))});
  }
  return FiniteGame::node("A", std::move(root));
}

// n alternating turns starting with Alice; leaving (l) hands the euro to the
// opponent, continuing (c) past the last turn pays whoever moved second to
// last: (A:1,B:0) for odd n, (A:0,B:1) for even n.
inline FiniteGame zero_one_finite(std::size_t n) {
  if (n == 0) throw Error("a 0,1 game needs at least one turn");
  auto pays = [](bool alice) {
    return alice ? PayoffVector{{"A", 1}, {"B", 0}} : PayoffVector{{"A", 0}, {"B", 1}};
  };
  FiniteGame game = FiniteGame::leaf(pays(n % 2 == 1));
  for (std::size_t i = n; i-- > 0;) {
    const bool alice = i % 2 == 0;
    game = FiniteGame::node(alice ? "A" : "B",
                            {{"c", std::move(game)}, {"l", FiniteGame::leaf(pays(!alice))}});
  }
  return game;
}

// How an expected figure is known.
enum class Basis {
  Published,     // stated for this game in the literature
  Computed,      // established by exhaustive enumeration
  Construction,  // immediate from how the game is built
};

inline const char* to_string(Basis b) {
  switch (b) {
    case Basis::Published: return "published";
    case Basis::Computed: return "computed";
    case Basis::Construction: return "construction";
  }
  return "?";
}

struct Expectation {
  std::string claim;
  Basis basis;
};

struct Preset {
  std::string name;
  std::string file;  // shipped under games/
  std::string summary;
  std::vector<Expectation> expected;
};

inline std::vector<Preset> presets() {
  return {
      {"matching_pennies", "matching_pennies.game",
       "sequential matching pennies, A then B then A",
       {{"2 subgame-perfect equilibria, differing only at the root", Basis::Published},
        {"both equilibria induce the tie (A:1,B:1)", Basis::Computed},
        {"h,t,h ends in (A:0,B:2); h,t,t in (A:1,B:1)", Basis::Published}}},
      {"zero_one_finite", "zero_one_7.game", "0,1 game with 7 turns (see also zero_one_6.game)",
       {{"odd turns: Alice continues everywhere, Bob is free", Basis::Published},
        {"7 turns: 8 equilibria, payoff (A:1,B:0)", Basis::Computed},
        {"6 turns: Bob continues everywhere, Alice free, 8 equilibria, payoff (A:0,B:1)",
         Basis::Computed}}},
      {"zero_one", "zero_one.ggraph", "endless 0,1 game on two states",
       {{"stationary SPEs: (SA:l,SB:c) and (SA:c,SB:l)", Basis::Published},
        {"exactly these 2 of the 4 stationary profiles", Basis::Computed},
        {"escalation lasso: cycle SA c, SB c", Basis::Computed}}},
      {"dollar_auction", "dollar_auction.pgraph", "dollar auction, stake 100, increment 1",
       {{"never bidding is not an equilibrium: bidding at S0 gains 99 over 0", Basis::Published},
        {"one SPE per player: that player always raises, the other quits", Basis::Published},
        {"escalation lasso: prefix S0 bid, cycle DB raise, DA raise", Basis::Computed}}},
  };
}

inline StationaryProfile alice_leaves_profile() { return {{"SA", "l"}, {"SB", "c"}}; }
inline StationaryProfile bob_leaves_profile() { return {{"SA", "c"}, {"SB", "l"}}; }
inline StationaryProfile auction_alice_raises_profile() {
  return {{"S0", "bid"}, {"DA", "raise"}, {"DB", "quit"}};
}
inline StationaryProfile auction_bob_raises_profile() {
  return {{"S0", "pass"}, {"DA", "quit"}, {"DB", "raise"}};
}
inline StationaryProfile auction_never_bid_profile() {
  return {{"S0", "pass"}, {"DA", "quit"}, {"DB", "quit"}};
}

// The shipped games/ files, by file name.
inline std::vector<std::pair<std::string, Document>> shipped_documents() {
  return {
      {"matching_pennies.game", matching_pennies_sequential()},
      {"zero_one_7.game", zero_one_finite(7)},
      {"zero_one_6.game", zero_one_finite(6)},
      {"zero_one.ggraph", zero_one_graph()},
      {"dollar_auction.pgraph", dollar_auction(100)},
      {"alice_leaves.profile", alice_leaves_profile()},
      {"bob_leaves.profile", bob_leaves_profile()},
      {"auction_alice_raises.profile", auction_alice_raises_profile()},
      {"auction_bob_raises.profile", auction_bob_raises_profile()},
      {"auction_never_bid.profile", auction_never_bid_profile()},
  };
}

}  // namespace coind
