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

// coind: command-line front end.
//
// Exit codes: 0 success (or SPE), 1 check refuted / not admissible,
// 2 parse or validation error, 3 cap exceeded, 4 usage error.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coind/coind.hpp"
#include "coind/report.hpp"

namespace {

using namespace coind;
using report::Json;

constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kInputError = 2;
constexpr int kCapExceeded = 3;
constexpr int kUsage = 4;

class UsageError : public Error {
 public:
  using Error::Error;
};

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Output {
  std::string format = "table";
  std::string path;
  std::ostringstream buffer;

  bool json() const { return format == "json"; }

  void flush() {
    if (path.empty()) {
      std::cout << buffer.str();
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << buffer.str();
  }
  void emit(const Json& j) { buffer << j.dump(2) << "\n"; }
};

bool use_color(const Output& out) {
  return out.path.empty() && std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout));
}

std::string heading(const Output& out, const std::string& text) {
  return use_color(out) ? "\033[1m" + text + "\033[0m" : text;
}

PayoffVector parse_payoff_literal(std::string text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw UsageError("payoff literal must look like (A:1,B:0), got " + text);
  text = text.substr(1, text.size() - 2);
  PayoffVector p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("payoff entry must be PLAYER:VALUE, got " + item);
    auto value = parse_rational(item.substr(colon + 1));
    if (!value) throw UsageError("not a rational: " + item.substr(colon + 1));
    p.entries[item.substr(0, colon)] = *value;
  }
  if (p.entries.empty()) throw UsageError("empty payoff literal");
  return p;
}

// const:(A:r,B:r) | map:STATE=(...);STATE=(...) | quit
ClosureRule parse_closure(const std::string& text) {
  if (text == "quit") return DeciderQuits{};
  if (text.rfind("const:", 0) == 0) return ConstClosure{parse_payoff_literal(text.substr(6))};
  if (text.rfind("map:", 0) == 0) {
    MapClosure m;
    std::stringstream ss(text.substr(4));
    std::string item;
    while (std::getline(ss, item, ';')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("closure map entry must be STATE=(...), got " + item);
      m.payoffs[item.substr(0, eq)] = parse_payoff_literal(item.substr(eq + 1));
    }
    return m;
  }
  throw UsageError("closure must be const:(...), map:STATE=(...);... or quit, got " + text);
}

// "A..B" or a comma-separated list.
std::vector<std::size_t> parse_depths(const std::string& text) {
  std::vector<std::size_t> out;
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      throw UsageError("not a depth: " + s);
    }
    if (pos != s.size()) throw UsageError("not a depth: " + s);
    return static_cast<std::size_t>(v);
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    auto lo = number(text.substr(0, dots));
    auto hi = number(text.substr(dots + 2));
    if (lo > hi) throw UsageError("empty depth range " + text);
    for (auto d = lo; d <= hi; ++d) out.push_back(d);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
  }
  if (out.empty()) throw UsageError("no depths given");
  return out;
}

const char* kind_name(const Document& doc) {
  return std::visit(Overloaded{[](const FiniteGame&) { return "finite game"; },
                               [](const GameGraph&) { return "game graph"; },
                               [](const ParamGraph&) { return "parametrized game graph"; },
                               [](const TreeProfile&) { return "tree profile"; },
                               [](const StationaryProfile&) { return "stationary profile"; }},
                    doc);
}

int cmd_validate(const std::string& file, Output& out) {
  auto doc = parse(read_file(file));
  ValidationReport rep = std::visit(
      Overloaded{[](const FiniteGame& g) { return validate_game(g, players_of(g)); },
                 [](const GameGraph& g) { return validate_graph(g); },
                 [](const ParamGraph& g) { return validate_graph(g); },
                 [](const auto&) { return ValidationReport{}; }},
      doc);
  if (out.json()) {
    Json j = {{"command", "validate"}, {"input", file}, {"kind", kind_name(doc)}};
    j["report"] = report::validation(rep);
    out.emit(j);
  } else {
    out.buffer << file << ": " << kind_name(doc) << ", " << (rep.ok() ? "OK" : "invalid") << "\n";
    for (const auto& v : rep.violations) out.buffer << "  " << v << "\n";
  }
  return rep.ok() ? kOk : kInputError;
}

template <class T>
T require_kind(const Document& doc, const std::string& file, const char* what) {
  if (const auto* v = std::get_if<T>(&doc)) return *v;
  throw UsageError(file + " is a " + kind_name(doc) + ", expected " + what);
}

void require_valid(const ValidationReport& rep, const std::string& file) {
  if (rep.ok()) return;
  std::string msg = file + " is invalid:";
  for (const auto& v : rep.violations) msg += "\n  " + v;
  throw Error(msg);
}

int cmd_solve(const std::string& file, Output& out) {
  auto g = require_kind<FiniteGame>(parse(read_file(file)), file, "a finite game");
  require_valid(validate_game(g, players_of(g)), file);
  auto eq = backward_induction(g);
  if (out.json()) {
    Json j = {{"command", "solve"}, {"input", file}};
    j["result"] = report::equilibria(g, eq);
    out.emit(j);
    return kOk;
  }
  out.buffer << heading(out, "equilibria: " + eq.count.str()) << "\n";
  if (!eq.is_product())
    out.buffer << "(not a product of the per-node sets, which allow " << eq.product_count().str()
               << ")\n";
  out.buffer << "payoff: " << to_string(eq.payoff) << "\n";
  out.buffer << heading(out, "node                 mover  optimal        representative") << "\n";
  for_each_node(g, [&](const Address& addr, const Node& n) {
    std::string acts;
    for (const auto& a : eq.optimal.at(addr)) acts += (acts.empty() ? "" : ",") + a;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-6s %-14s %s\n", to_string(addr).c_str(),
                  n.mover.c_str(), acts.c_str(), eq.representative.at(addr).c_str());
    out.buffer << line;
  });
  return kOk;
}

int cmd_check(const std::string& file, const std::string& profile_file, bool root_only,
              std::size_t cross_depth, Output& out) {
  auto doc = parse(read_file(file));
  const std::string profile_text = read_file(profile_file);
  Json j = {{"command", "check"}, {"input", file}, {"profile", profile_file}};
  bool spe = false;
  std::string text;
  std::visit(
      Overloaded{
          [&](const FiniteGame& g) {
            require_valid(validate_game(g, players_of(g)), file);
            auto s = parse_profile_for(profile_text, g);
            auto scope = root_only ? DeviationScope::RootOnly : DeviationScope::Subgames;
            auto v = is_spe_finite(g, s, scope);
            spe = v.is_spe();
            j["result"] = report::finite_verdict(v, scope);
            if (spe) {
              text = root_only ? "Nash equilibrium" : "SPE";
            } else {
              const auto& c = *v.counterexample;
              text = "Refuted at " + to_string(c.address) + ": " + c.mover + " deviates to " +
                     c.deviation + ", gaining " + to_string(c.gain) + " (" +
                     to_string(c.deviation_payoff.at(c.mover)) + " over " +
                     to_string(c.profile_payoff.at(c.mover)) + ")";
            }
          },
          [&](const GameGraph& g) {
            if (root_only) throw UsageError("--root-only applies to finite games");
            require_valid(validate_graph(g), file);
            auto s = parse_profile_for(profile_text, g);
            auto v = check_spe_graph(g, s);
            spe = v.is_spe();
            j["result"] = report::spe_verdict(v);
            text = to_string(v);
          },
          [&](const ParamGraph& g) {
            if (root_only) throw UsageError("--root-only applies to finite games");
            require_valid(validate_graph(g), file);
            auto s = parse_profile_for(profile_text, g);
            auto c = check_spe_param(g, s, {cross_depth});
            spe = c.verdict.is_spe();
            j["result"] = report::param_check(c);
            text = to_string(c.verdict);
            if (c.concrete)
              text += "\nconcrete depth-" + std::to_string(c.cross_check_depth) + " check: " +
                      (c.concrete->is_spe() ? "SPE" : "refuted") +
                      (c.agrees() ? " (agrees)" : " (DISAGREES)");
          },
          [&](const auto&) { throw UsageError(file + " is a profile, expected a game"); }},
      doc);
  if (out.json()) out.emit(j);
  else out.buffer << text << "\n";
  return spe ? kOk : kRefuted;
}

template <class Payoff>
void enumerate_table(const std::vector<ProfileVerdict>& all, Output& out) {
  out.buffer << heading(out, "profile                          verdict") << "\n";
  for (const auto& pv : all) {
    std::string prof;
    for (const auto& [id, a] : pv.profile) prof += (prof.empty() ? "" : " ") + id + ":" + a;
    char line[512];
    std::snprintf(line, sizeof line, "%-32s %s\n", prof.c_str(), to_string(pv.verdict).c_str());
    out.buffer << line;
  }
}

int cmd_enumerate(const std::string& file, std::uint64_t cap, Output& out) {
  auto doc = parse(read_file(file));
  auto run = [&](const auto& g) {
    using Payoff = typename std::decay_t<decltype(g)>::payoff_type;
    require_valid(validate_graph(g), file);
    auto all = enumerate_stationary_spe(g, cap);
    if (out.json()) {
      Json j = {{"command", "enumerate"}, {"input", file}};
      j["result"] = report::enumeration(all, cap);
      out.emit(j);
    } else {
      enumerate_table<Payoff>(all, out);
    }
  };
  std::visit(Overloaded{[&](const GameGraph& g) { run(g); }, [&](const ParamGraph& g) { run(g); },
                        [&](const auto&) { throw UsageError(file + " is not a game graph"); }},
             doc);
  return kOk;
}

int cmd_truncate(const std::string& file, std::size_t depth, const std::string& closure,
                 Output& out) {
  auto doc = parse(read_file(file));
  auto rule = parse_closure(closure);
  auto run = [&](const auto& g) {
    require_valid(validate_graph(g), file);
    out.buffer << serialize(unfold(g, depth, rule)) << "\n";
  };
  std::visit(Overloaded{[&](const GameGraph& g) { run(g); }, [&](const ParamGraph& g) { run(g); },
                        [&](const auto&) { throw UsageError(file + " is not a game graph"); }},
             doc);
  return kOk;
}

int cmd_extrapolate(const std::string& file, const std::string& depths, const std::string& closure,
                    std::uint64_t cap, Output& out) {
  auto doc = parse(read_file(file));
  auto rule = parse_closure(closure);
  auto ds = parse_depths(depths);
  auto run = [&](const auto& g) {
    require_valid(validate_graph(g), file);
    auto r = extrapolation_report(g, ds, rule, cap);
    if (out.json()) {
      Json j = {{"command", "extrapolate"}, {"input", file}};
      j["result"] = report::extrapolation(r, cap);
      out.emit(j);
      return;
    }
    out.buffer << heading(out, "depth  equilibria  payoff              players") << "\n";
    for (const auto& d : r.summaries) {
      char line[512];
      std::snprintf(line, sizeof line, "%5zu  %10s  %-18s  %s\n", d.depth, d.count.str().c_str(),
                    to_string(d.payoff).c_str(), to_string(d.players).c_str());
      out.buffer << line;
    }
    out.buffer << "closure: " << describe(rule) << "\n";
    out.buffer << "infinite stationary SPEs:\n";
    for (std::size_t i = 0; i < r.infinite_spes.size(); ++i)
      out.buffer << "  [" << to_string(r.infinite_characterizations[i]) << "]\n";
    out.buffer << heading(out, std::string("verdict: ") + to_string(r.verdict)) << "\n"
               << r.explanation << "\n";
  };
  std::visit(Overloaded{[&](const GameGraph& g) { run(g); }, [&](const ParamGraph& g) { run(g); },
                        [&](const auto&) { throw UsageError(file + " is not a game graph"); }},
             doc);
  return kOk;
}

int cmd_escalate(const std::string& file, const std::vector<std::string>& spe_files,
                 std::uint64_t cap, Output& out) {
  auto doc = parse(read_file(file));
  auto run = [&](const auto& g) {
    require_valid(validate_graph(g), file);
    std::vector<StationaryProfile> spes;
    if (spe_files.empty()) spes = stationary_spes(g, cap);
    for (const auto& f : spe_files) spes.push_back(parse_profile_for(read_file(f), g));
    if (spes.empty()) throw Error(file + " has no stationary SPE");
    auto map = rationalizable_actions(g, spes);
    auto w = escalation_witness(g, map);
    auto threats = credible_threat_report(g, spes);
    if (out.json()) {
      Json j = {{"command", "escalate"}, {"input", file}};
      j["result"] = report::escalation(spes, map, w, threats);
      out.emit(j);
      return;
    }
    out.buffer << heading(out, "SPEs") << "\n";
    for (std::size_t i = 0; i < spes.size(); ++i) {
      out.buffer << "  #" << i + 1 << " ";
      for (const auto& [id, a] : spes[i]) out.buffer << " " << id << ":" << a;
      out.buffer << "\n";
    }
    out.buffer << heading(out, "rationalizable actions") << "\n";
    for (const auto& row : threats.rows) {
      out.buffer << "  " << row.state << " (" << row.mover << ") " << row.action << " via";
      for (const auto& e : row.entries) {
        out.buffer << " #" << e.spe;
        if (e.response)
          out.buffer << " [then " << e.response->mover << " " << e.response->action << " at "
                     << e.response->state << "]";
        if (e.threat)
          out.buffer << " [else " << e.threat->mover << " " << e.threat->action << " at "
                     << e.threat->state << "]";
      }
      out.buffer << "\n";
    }
    out.buffer << "mutually non-credible:";
    if (threats.mutually_non_credible.empty()) out.buffer << " none";
    for (const auto& s : threats.mutually_non_credible) out.buffer << " " << s;
    out.buffer << "\n" << heading(out, "escalation") << "\n";
    if (!w) {
      out.buffer << "none\n";
      return;
    }
    out.buffer << "prefix:";
    if (w->prefix.empty()) out.buffer << " (empty)";
    for (const auto& s : w->prefix) out.buffer << " " << s.state << " " << s.action << " #" << s.spe;
    out.buffer << "\ncycle: ";
    for (std::size_t i = 0; i < w->cycle.size(); ++i) {
      const auto& s = w->cycle[i];
      out.buffer << (i ? " -> " : "") << s.state << " " << s.action << " #" << s.spe;
    }
    out.buffer << " -> " << w->cycle.front().state << "\n";
  };
  std::visit(Overloaded{[&](const GameGraph& g) { run(g); }, [&](const ParamGraph& g) { run(g); },
                        [&](const auto&) { throw UsageError(file + " is not a game graph"); }},
             doc);
  return kOk;
}

int cmd_preset(const std::string& name, const std::string& stake, std::size_t turns, Output& out) {
  Document doc;
  if (name == "matching_pennies") doc = matching_pennies_sequential();
  else if (name == "zero_one_finite") doc = zero_one_finite(turns);
  else if (name == "zero_one") doc = zero_one_graph();
  else if (name == "dollar_auction") {
    auto v = parse_rational(stake);
    if (!v) throw UsageError("stake must be a rational, got " + stake);
    doc = dollar_auction(*v);
  } else if (name == "alice_leaves") doc = alice_leaves_profile();
  else if (name == "bob_leaves") doc = bob_leaves_profile();
  else if (name == "auction_alice_raises") doc = auction_alice_raises_profile();
  else if (name == "auction_bob_raises") doc = auction_bob_raises_profile();
  else if (name == "auction_never_bid") doc = auction_never_bid_profile();
  else throw UsageError("unknown preset " + name);
  out.buffer << serialize(doc) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coind: equilibria of finite and endless sequential games"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"table", "json"}));
  app.add_option("-o,--output", out.path, "write output to this file");

  std::string file, profile, closure, depths, stake = "100", name;
  std::vector<std::string> spe_files;
  bool root_only = false;
  std::size_t depth = 0, turns = 7, cross_depth = 20;
  std::uint64_t cap = 1u << 16;

  auto* validate = app.add_subcommand("validate", "check a document for structural errors");
  validate->add_option("file", file)->required();

  auto* solve = app.add_subcommand("solve", "backward induction on a finite game");
  solve->add_option("file", file)->required();

  auto* check = app.add_subcommand("check", "check whether a profile is an equilibrium");
  check->add_option("file", file)->required();
  check->add_option("--profile", profile)->required();
  check->add_flag("--root-only", root_only, "finite games: Nash check (deviations judged at the root)");
  check->add_option("--cross-depth", cross_depth, "parametrized graphs: depth of the concrete cross-check (0 = off)");

  auto* enumerate = app.add_subcommand("enumerate", "all stationary profiles of a graph with verdicts");
  enumerate->add_option("file", file)->required();
  enumerate->add_option("--cap", cap)->check(CLI::PositiveNumber);

  auto* truncate = app.add_subcommand("truncate", "unfold a graph into a finite game");
  truncate->add_option("file", file)->required();
  truncate->add_option("--depth", depth)->required();
  truncate->add_option("--closure", closure)->required();

  auto* extrapolate = app.add_subcommand("extrapolate", "solve truncations at many depths");
  extrapolate->add_option("file", file)->required();
  extrapolate->add_option("--depths", depths)->required();
  extrapolate->add_option("--closure", closure)->required();
  extrapolate->add_option("--cap", cap)->check(CLI::PositiveNumber);

  auto* escalate = app.add_subcommand("escalate", "rationalizable actions and escalation witness");
  escalate->add_option("file", file)->required();
  escalate->add_option("--spe", spe_files, "use these SPE profiles instead of enumerating");
  escalate->add_option("--cap", cap)->check(CLI::PositiveNumber);

  auto* preset = app.add_subcommand("preset", "print a preset game or profile");
  preset->add_option("name", name)->required();
  preset->add_option("--stake", stake);
  preset->add_option("--turns", turns)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  int code = kOk;
  try {
    if (*validate) code = cmd_validate(file, out);
    else if (*solve) code = cmd_solve(file, out);
    else if (*check) code = cmd_check(file, profile, root_only, cross_depth, out);
    else if (*enumerate) code = cmd_enumerate(file, cap, out);
    else if (*truncate) code = cmd_truncate(file, depth, closure, out);
    else if (*extrapolate) code = cmd_extrapolate(file, depths, closure, cap, out);
    else if (*escalate) code = cmd_escalate(file, spe_files, cap, out);
    else if (*preset) code = cmd_preset(name, stake, turns, out);
    out.flush();
  } catch (const UsageError& e) {
    std::cerr << "coind: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "coind: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "coind: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}
