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

// Acceptance suite: one PASS/FAIL line per criterion, each with its own time
// budget. Exits non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coind/coind.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "run_cli.hpp"

namespace {

using namespace coind;
using coind::testing::run_cli;

// Collects failed expectations for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

PayoffVector pv(int a, int b) { return {{"A", Rational(a)}, {"B", Rational(b)}}; }

std::string games(const std::string& file) { return std::string(COIND_GAMES_DIR) + "/" + file; }

coind::testing::Run cli(const std::string& args) { return run_cli(COIND_EXE, args); }

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

void matching_pennies(Check& c) {
  auto r = cli("solve " + games("matching_pennies.game"));
  c.expect(r.code == 0, "solve exits 0");
  c.expect(contains(r.out, "equilibria: 2"), "solve reports 'equilibria: 2'");
  auto g = parse_game(testing::slurp(games("matching_pennies.game")));
  c.expect(profile_space(g) == 128, "128 profiles");
  auto brute = brute_force_spe(g);
  auto solved = equilibrium_profiles(g);
  c.expect(brute.size() == 2, "brute force finds 2 equilibria");
  c.expect(std::set<TreeProfile>(brute.begin(), brute.end()) ==
               std::set<TreeProfile>(solved.begin(), solved.end()),
           "brute force and backward induction agree");
  for (const auto& s : brute) c.expect(play_finite(g, s) == pv(1, 1), "equilibrium payoff is (1,1)");
}

void zero_one_finite_games(Check& c) {
  for (std::size_t n : {7u, 6u}) {
    auto g = parse_game(testing::slurp(games("zero_one_" + std::to_string(n) + ".game")));
    auto eq = backward_induction(g);
    const PlayerId forced = n == 7 ? "A" : "B";
    std::size_t forced_nodes = 0, free_nodes = 0;
    for_each_node(g, [&](const Address& addr, const Node& node) {
      const auto& opt = eq.optimal.at(addr);
      if (node.mover == forced) {
        ++forced_nodes;
        c.expect(opt == std::vector<Action>{"c"}, forced + " continues at " + to_string(addr));
      } else {
        ++free_nodes;
        c.expect(opt.size() == node.branches.size(), node.mover + " free at " + to_string(addr));
      }
    });
    c.expect(forced_nodes == (n == 7 ? 4u : 3u) && free_nodes == 3, "node counts for n=" + std::to_string(n));
    c.expect(eq.count == 8, "8 equilibria for n=" + std::to_string(n));
    c.expect(eq.payoff == (n == 7 ? pv(1, 0) : pv(0, 1)), "payoff for n=" + std::to_string(n));
  }
  for (std::size_t n = 1; n <= 10; ++n) {
    auto g = zero_one_finite(n);
    auto brute = brute_force_spe(g);
    auto solved = equilibrium_profiles(g);
    c.expect(std::set<TreeProfile>(brute.begin(), brute.end()) ==
                 std::set<TreeProfile>(solved.begin(), solved.end()),
             "brute force agrees for n=" + std::to_string(n));
  }
}

void zero_one_infinite(Check& c) {
  auto g = parse_graph(testing::slurp(games("zero_one.ggraph")));
  auto all = enumerate_stationary_spe(g);
  c.expect(all.size() == 4, "4 stationary profiles");
  std::set<StationaryProfile> spes;
  for (const auto& pv : all) {
    if (pv.verdict.is_spe()) spes.insert(pv.profile);
    if (pv.profile == StationaryProfile{{"SA", "c"}, {"SB", "c"}})
      c.expect(pv.verdict.not_admissible() != nullptr, "(c,c) not admissible");
    if (pv.profile == StationaryProfile{{"SA", "l"}, {"SB", "l"}}) {
      const auto* r = pv.verdict.refuted();
      c.expect(r != nullptr, "(l,l) refuted");
      if (r) {
        // Replay: deviate once at the reported state, then follow the profile.
        auto s = pv.profile;
        const auto& e = *g.state(r->state).internal().find(r->deviation);
        auto dev = oracle::edge_value(g, s, e);
        auto here = oracle::walk(g, s, r->state);
        c.expect(dev && here && *dev == r->deviation_payoff && *here == r->profile_payoff,
                 "witness payoffs replay");
        c.expect(dev && here && dev->at(r->mover) > here->at(r->mover), "witness gain is strict");
      }
    }
  }
  c.expect(spes == std::set<StationaryProfile>{{{"SA", "l"}, {"SB", "c"}}, {{"SA", "c"}, {"SB", "l"}}},
           "exactly (l,c) and (c,l) are SPE");
}

void dollar_auction_check(Check& c) {
  auto g = parse_param_graph(testing::slurp(games("dollar_auction.pgraph")));
  c.expect(g == dollar_auction(Rational(100)), "shipped auction has stake 100");
  for (const char* file : {"auction_alice_raises.profile", "auction_bob_raises.profile"}) {
    auto s = parse_profile_for(testing::slurp(games(file)), g);
    auto res = check_spe_param(g, s, {20});
    c.expect(res.verdict.is_spe(), std::string(file) + " is SPE");
    c.expect(res.concrete && res.agrees(), std::string(file) + " agrees with depth 20");
    c.expect(cli("check " + games("dollar_auction.pgraph") + " --profile " + games(file)).code == 0,
             std::string("CLI accepts ") + file);
  }
  auto never = parse_profile_for(testing::slurp(games("auction_never_bid.profile")), g);
  auto res = check_spe_param(g, never, {20});
  const auto* r = res.verdict.refuted();
  c.expect(r && r->state == "S0" && r->deviation == "bid" &&
               r->deviation_payoff.at("A") == Rational(99) && r->profile_payoff.at("A") == Rational(0),
           "never-bid refuted: bid at S0 gains 99 over 0");
  c.expect(res.concrete && res.agrees(), "never-bid agrees with depth 20");
  auto run = cli("check " + games("dollar_auction.pgraph") + " --profile " + games("auction_never_bid.profile"));
  c.expect(run.code == 1, "CLI exits 1 for never-bid");
  c.expect(contains(run.out, "A deviates to bid, gaining 99 over 0"), "CLI prints the refutation");
}

void extrapolation_failure(Check& c) {
  auto r = cli("extrapolate " + games("zero_one.ggraph") + " --depths 1..12 --closure quit --format json");
  c.expect(r.code == 0, "extrapolate exits 0");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(r.out)["result"];
  } catch (const std::exception&) {
    c.expect(false, "extrapolate prints JSON");
    return;
  }
  c.expect(j["verdict"] == "ParityDisagreement", "verdict ParityDisagreement");
  c.expect(j["odd"]["limit"]["A"]["freedom"] == "forced" && j["odd"]["limit"]["A"]["action"] == "c" &&
               j["odd"]["limit"]["B"]["freedom"] == "free",
           "odd depths force Alice to continue");
  c.expect(j["even"]["limit"]["B"]["freedom"] == "forced" && j["even"]["limit"]["B"]["action"] == "c" &&
               j["even"]["limit"]["A"]["freedom"] == "free",
           "even depths force Bob to continue");
  c.expect(j["odd"]["matches_infinite"] == false && j["even"]["matches_infinite"] == false,
           "neither limit is an infinite SPE");
  c.expect(j["infinite_spes"].size() == 2, "two infinite SPEs");
}

void escalation(Check& c) {
  auto r = cli("escalate " + games("zero_one.ggraph") + " --format json");
  auto w = nlohmann::json::parse(r.out)["result"]["witness"];
  std::set<std::string> cycle;
  for (const auto& s : w["cycle"]) cycle.insert(s["state"].get<std::string>() + " " + s["action"].get<std::string>());
  c.expect(r.code == 0 && w["prefix"].empty() && cycle == std::set<std::string>{"SA c", "SB c"},
           "0,1 graph: cycle SA,SB");

  r = cli("escalate " + games("dollar_auction.pgraph") + " --format json");
  w = nlohmann::json::parse(r.out)["result"]["witness"];
  cycle.clear();
  for (const auto& s : w["cycle"]) cycle.insert(s["state"].get<std::string>() + " " + s["action"].get<std::string>());
  c.expect(r.code == 0 && w["prefix"].size() == 1 && w["prefix"][0]["state"] == "S0" &&
               cycle == std::set<std::string>{"DA raise", "DB raise"},
           "dollar auction: prefix S0, cycle DA,DB");

  for (const char* file : {"alice_leaves.profile", "bob_leaves.profile"}) {
    r = cli("escalate " + games("zero_one.ggraph") + " --spe " + games(file) + " --format json");
    c.expect(r.code == 0 && nlohmann::json::parse(r.out)["result"]["witness"].is_null(),
             std::string("one SPE (") + file + ") gives none");
  }
  for (const char* file : {"auction_alice_raises.profile", "auction_bob_raises.profile"}) {
    r = cli("escalate " + games("dollar_auction.pgraph") + " --spe " + games(file) + " --format json");
    c.expect(r.code == 0 && nlohmann::json::parse(r.out)["result"]["witness"].is_null(),
             std::string("one SPE (") + file + ") gives none");
  }
}

void oracle_equivalence(Check& c) {
  std::mt19937_64 rng(7001);
  int games_checked = 0;
  for (int i = 0; i < 500; ++i) {
    auto g = oracle::random_game_within(rng, {4, 3, 5, {"A", "B"}}, 1u << 16);
    auto brute = brute_force_spe(g);
    auto solved = equilibrium_profiles(g);
    const bool same = std::set<TreeProfile>(brute.begin(), brute.end()) ==
                      std::set<TreeProfile>(solved.begin(), solved.end());
    c.expect(same, "profile sets differ for " + serialize(g));
    c.expect(is_spe_finite(g, backward_induction(g).representative).is_spe(),
             "representative fails for " + serialize(g));
    ++games_checked;
    if (c.failures.size() > 5) break;
  }
  c.expect(games_checked == 500, "500 games checked");
}

bool has_cycle(const GameGraph& g) {
  std::map<StateId, int> color;
  std::function<bool(const StateId&)> dfs = [&](const StateId& id) {
    color[id] = 1;
    if (!g.state(id).is_terminal())
      for (const auto& e : g.state(id).internal().edges) {
        if (e.to_leaf()) continue;
        if (color[e.target_state()] == 1) return true;
        if (color[e.target_state()] == 0 && dfs(e.target_state())) return true;
      }
    color[id] = 2;
    return false;
  };
  for (const auto& [id, def] : g.states)
    if (color[id] == 0 && dfs(id)) return true;
  return false;
}

void soundness_vs_unfolding(Check& c) {
  std::mt19937_64 rng(8001);
  std::vector<GameGraph> graphs{parse_graph(testing::slurp(games("zero_one.ggraph")))};
  while (graphs.size() < 300) {
    auto g = oracle::random_graph(rng, 3, 2);
    if (has_cycle(g)) graphs.push_back(std::move(g));
  }
  std::size_t spes = 0;
  for (const auto& g : graphs) {
    for (const auto& s : stationary_spes(g)) {
      ++spes;
      for (std::size_t d = 0; d <= 12; ++d) {
        auto u = unfold_annotated(g, d, profile_closure(g, s));
        if (!is_spe_finite(u.game, induced_tree_profile(u, s)).is_spe())
          c.expect(false, "depth " + std::to_string(d) + " rejects an SPE of " + serialize(g));
      }
    }
  }
  c.expect(spes >= 100, "at least 100 stationary SPEs exercised (got " + std::to_string(spes) + ")");
}

void parser_round_trip(Check& c) {
  std::vector<std::string> texts;
  for (const auto& [file, doc] : shipped_documents()) {
    auto text = testing::slurp(games(file));
    c.expect(parse(text) == doc, file + " parses to its preset");
    c.expect(serialize(parse(text)) + "\n" == text, file + " is canonical");
    texts.push_back(serialize(doc));
  }
  oracle::DocumentGen gen(9001);
  for (int i = 0; i < 200; ++i) {
    auto doc = gen.document();
    auto text = serialize(doc);
    c.expect(parse(text) == doc, "round trip fails for " + text);
    texts.push_back(text);
  }
  std::size_t truncations = 0;
  for (const auto& text : texts) {
    for (std::size_t cut = 0; cut < text.size(); cut += 3) {
      if ((static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) continue;
      if (text.find_first_not_of(" \n", cut) == std::string::npos) continue;
      const auto prefix = text.substr(0, cut);
      ++truncations;
      try {
        parse(prefix);
        c.expect(false, "truncation parses: " + prefix);
      } catch (const ParseError& e) {
        c.expect(e.span().offset <= prefix.size() && e.span().line >= 1 && e.span().column >= 1,
                 "error position out of range for: " + prefix);
      }
    }
  }
  c.expect(truncations > 1000, "enough truncations");
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  void (*run)(Check&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "matching pennies has exactly two equilibria", 1.0, matching_pennies},
      {2, "finite 0,1 games of 7 and 6 turns", 5.0, zero_one_finite_games},
      {3, "endless 0,1 game has exactly two stationary SPEs", 1.0, zero_one_infinite},
      {4, "dollar auction equilibria and the never-bid refutation", 2.0, dollar_auction_check},
      {5, "truncations of the 0,1 game disagree by parity", 5.0, extrapolation_failure},
      {6, "escalation lassos", 1.0, escalation},
      {7, "backward induction equals brute force on 500 random games", 60.0, oracle_equivalence},
      {8, "stationary SPEs survive every unfolding up to depth 12", 60.0, soundness_vs_unfolding},
      {9, "parser round trip and positioned truncation errors", 10.0, parser_round_trip},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > crit.budget_seconds) {
      std::ostringstream msg;
      msg << "took " << secs << " s, budget " << crit.budget_seconds << " s";
      check.expect(false, msg.str());
    }
    const bool ok = check.failures.empty();
    failed += !ok;
    std::printf("%s criterion %d: %s (%.3f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", crit.id,
                crit.name.c_str(), secs, crit.budget_seconds);
    for (const auto& f : check.failures) std::printf("    %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
