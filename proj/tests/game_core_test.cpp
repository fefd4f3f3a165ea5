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

#include <gtest/gtest.h>

#include <random>

#include "coind/coind.hpp"
#include "oracles.hpp"

namespace coind {
namespace {

PayoffVector pv(int a, int b) { return {{"A", Rational(a)}, {"B", Rational(b)}}; }

TEST(Rational, ParsesAndPrintsInLowestTerms) {
  EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(to_string(Rational(-3)), "-3");
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("1/-2"));
  EXPECT_FALSE(parse_rational("x"));
  EXPECT_FALSE(parse_rational(""));
}

TEST(Prefers, ComparesTheNamedPlayerOnly) {
  EXPECT_EQ(prefers(pv(1, 0), pv(0, 1), "A"), Preference::Better);
  EXPECT_EQ(prefers(pv(1, 0), pv(0, 1), "B"), Preference::Worse);
  EXPECT_EQ(prefers(pv(1, 0), pv(1, 5), "A"), Preference::Equal);
  EXPECT_THROW(prefers(pv(1, 0), pv(0, 1), "C"), Error);
}

TEST(Prefers, IsATotalOrderOnRandomRationals) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 6);
  auto random_vec = [&] {
    return PayoffVector{{"A", Rational(num(rng), den(rng))}, {"B", Rational(num(rng), den(rng))}};
  };
  for (int i = 0; i < 2000; ++i) {
    auto p = random_vec(), q = random_vec(), r = random_vec();
    for (const char* who : {"A", "B"}) {
      auto pq = prefers(p, q, who), qp = prefers(q, p, who);
      // trichotomy and antisymmetry
      EXPECT_EQ(pq == Preference::Better, qp == Preference::Worse);
      EXPECT_EQ(pq == Preference::Equal, qp == Preference::Equal);
      if (pq == Preference::Equal) {
        EXPECT_EQ(p.at(who), q.at(who));
      }
      // transitivity
      if (pq != Preference::Worse && prefers(q, r, who) != Preference::Worse) {
        EXPECT_NE(prefers(p, r, who), Preference::Worse);
      }
      if (pq == Preference::Better && prefers(q, r, who) == Preference::Better) {
        EXPECT_EQ(prefers(p, r, who), Preference::Better);
      }
    }
  }
}

TEST(Prefers, IsUnchangedByPositiveScaling) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 6), pos(1, 9);
  for (int i = 0; i < 1000; ++i) {
    PayoffVector p{{"A", Rational(num(rng), den(rng))}, {"B", Rational(num(rng), den(rng))}};
    PayoffVector q{{"A", Rational(num(rng), den(rng))}, {"B", Rational(num(rng), den(rng))}};
    const Rational c(pos(rng), pos(rng));
    PayoffVector ps = p, qs = q;
    for (auto& [who, v] : ps.entries) v *= c;
    for (auto& [who, v] : qs.entries) v *= c;
    for (const char* who : {"A", "B"}) EXPECT_EQ(prefers(p, q, who), prefers(ps, qs, who));
  }
}

TEST(Address, PrintsAsAPath) {
  EXPECT_EQ(to_string(Address{}), "/");
  EXPECT_EQ(to_string(Address{"h", "t"}), "/h/t");
}

TEST(FiniteGame, NavigationAndShape) {
  auto g = matching_pennies_sequential();
  EXPECT_EQ(depth(g), 3u);
  EXPECT_EQ(internal_addresses(g).size(), 7u);
  EXPECT_EQ(players_of(g), (std::set<PlayerId>{"A", "B"}));
  EXPECT_EQ(subgame_at(g, {"h", "t"}).as_node().mover, "A");
  EXPECT_THROW(subgame_at(g, {"x"}), Error);
  std::vector<std::string> order;
  for_each_node(g, [&](const Address& a, const Node&) { order.push_back(to_string(a)); });
  EXPECT_EQ(order, (std::vector<std::string>{"/", "/h", "/h/h", "/h/t", "/t", "/t/h", "/t/t"}));
}

TEST(Validate, AcceptsPresets) {
  EXPECT_TRUE(validate_game(matching_pennies_sequential(), {"A", "B"}).ok());
  EXPECT_TRUE(validate_game(zero_one_finite(7), {"A", "B"}).ok());
}

TEST(Validate, ReportsEveryViolation) {
  auto missing = FiniteGame::node("A", {{"x", FiniteGame::leaf({{"A", Rational(1)}})},
                                        {"x", FiniteGame::leaf(pv(0, 0))}});
  auto r = validate_game(missing, {"A", "B"});
  ASSERT_EQ(r.violations.size(), 2u);
  EXPECT_NE(r.violations[0].find("missing payoff for B"), std::string::npos);
  EXPECT_NE(r.violations[1].find("duplicate action label"), std::string::npos);

  auto empty = FiniteGame::node("A", {});
  EXPECT_NE(validate_game(empty, {"A"}).violations.at(0).find("empty branch list"), std::string::npos);

  auto stranger = FiniteGame::node("C", {{"x", FiniteGame::leaf(pv(0, 0))}});
  EXPECT_NE(validate_game(stranger, {"A", "B"}).violations.at(0).find("undeclared mover"),
            std::string::npos);
  auto extra = FiniteGame::leaf({{"A", Rational(0)}, {"B", Rational(0)}, {"Z", Rational(0)}});
  EXPECT_NE(validate_game(extra, {"A", "B"}).violations.at(0).find("payoff for undeclared player"),
            std::string::npos);
}

TEST(PlayFinite, FollowsTheProfile) {
  auto g = matching_pennies_sequential();
  TreeProfile s;
  for (const auto& a : internal_addresses(g)) s[a] = "h";
  s[{}] = "h";
  s[{"h"}] = "t";
  s[{"h", "t"}] = "h";
  EXPECT_EQ(play_finite(g, s), pv(0, 2));
  s[{"h", "t"}] = "t";
  EXPECT_EQ(play_finite(g, s), pv(1, 1));
}

TEST(PlayFinite, RejectsPartialAndForeignProfiles) {
  auto g = matching_pennies_sequential();
  TreeProfile s{{{}, "h"}};
  EXPECT_THROW(require_total(g, s), ProfileError);
  for (const auto& a : internal_addresses(g)) s[a] = "h";
  EXPECT_NO_THROW(require_total(g, s));
  s[{}] = "x";
  EXPECT_THROW(require_total(g, s), ProfileError);
}

TEST(PlayFinite, IsDeterministicAndBoundedByDepth) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    auto g = oracle::random_game_within(rng, {}, 1 << 12);
    auto profiles = oracle::all_profiles(g);
    std::uniform_int_distribution<std::size_t> pick(0, profiles.size() - 1);
    const auto& s = profiles[pick(rng)];
    auto a = play_finite(g, s);
    EXPECT_EQ(a, play_finite(g, s));
    EXPECT_EQ(a, oracle::outcome(g, s));
    std::size_t steps = 0;
    Address addr;
    const FiniteGame* cur = &g;
    while (!cur->is_leaf()) {
      addr.push_back(s.at(addr));
      cur = &subgame_at(g, addr);
      ++steps;
    }
    EXPECT_LE(steps, depth(g));
  }
}

}  // namespace
}  // namespace coind
