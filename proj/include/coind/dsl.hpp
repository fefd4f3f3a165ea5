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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "coind/game.hpp"
#include "coind/graph.hpp"

// Text formats:
//
//   (node A (h (leaf (A:2) (B:0))) (t (leaf (A:1) (B:1))))        .game
//
//   graph zero_one {                                               .ggraph
//     state SA = node A { c -> SB, l -> leaf (A:0) (B:1) }
//     state SB = node B { c -> SA, l -> leaf (A:1) (B:0) }
//     start SA
//   }
//
//   pgraph auction { ... raise -> DA @ k+1 ... (A:99-1*k) ... }    .pgraph
//     (affine values: 3, -1/2, k, -k, 2*k, 99-k, 1/2+3/4*k)
//
//   profile { SA: l  SB: c }                                       .profile
//   profile { /: h  /h: t  /h/t: h }        (tree profile, keys are addresses)
//   profile { }                             (empty; read as a stationary profile)
//
// '#' starts a comment that runs to the end of the line.

namespace coind {

struct SourceSpan {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in code points
  std::size_t offset = 0;  // 0-based byte offset
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, std::string message, std::vector<std::string> expected = {},
             std::string found = {})
      : Error(format(span, message, expected, found)),
        span_(span),
        message_(std::move(message)),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  static std::string format(const SourceSpan& span, const std::string& message,
                            const std::vector<std::string>& expected, const std::string& found) {
    std::string out = std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
      }
      if (!found.empty()) out += ", found " + found;
      out += ")";
    }
    return out;
  }

  SourceSpan span_;
  std::string message_;
  std::vector<std::string> expected_;
  std::string found_;
};

using Document = std::variant<FiniteGame, GameGraph, ParamGraph, TreeProfile, StationaryProfile>;

namespace detail {

enum class Tok {
  LParen, RParen, LBrace, RBrace, Colon, Comma, Equals, Arrow, At, Plus, Minus, Star, Slash,
  Number, Ident, End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

inline std::string describe(Tok t) {
  switch (t) {
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Equals: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::At: return "'@'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

inline bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}
inline bool ident_char(unsigned char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '.' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      SourceSpan at = here_;
      if (here_.offset >= text_.size()) {
        out.push_back({Tok::End, "", at});
        return out;
      }
      const unsigned char c = static_cast<unsigned char>(text_[here_.offset]);
      if (c >= '0' && c <= '9') {
        std::size_t start = here_.offset;
        while (here_.offset < text_.size() && text_[here_.offset] >= '0' && text_[here_.offset] <= '9')
          advance();
        out.push_back({Tok::Number, std::string(text_.substr(start, here_.offset - start)), at});
        continue;
      }
      if (ident_start(c)) {
        std::size_t start = here_.offset;
        while (here_.offset < text_.size() && ident_char(static_cast<unsigned char>(text_[here_.offset])))
          advance();
        out.push_back({Tok::Ident, std::string(text_.substr(start, here_.offset - start)), at});
        continue;
      }
      if (c == '-' && here_.offset + 1 < text_.size() && text_[here_.offset + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", at});
        continue;
      }
      Tok kind;
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ':': kind = Tok::Colon; break;
        case ',': kind = Tok::Comma; break;
        case '=': kind = Tok::Equals; break;
        case '@': kind = Tok::At; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        default:
          throw ParseError(at, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
      }
      advance();
      out.push_back({kind, std::string(1, static_cast<char>(c)), at});
    }
  }

 private:
  void advance() {
    const unsigned char c = static_cast<unsigned char>(text_[here_.offset]);
    ++here_.offset;
    if (c == '\n') {
      ++here_.line;
      here_.column = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++here_.column;
    }
  }
  void skip_blank() {
    while (here_.offset < text_.size()) {
      char c = text_[here_.offset];
      if (c == '#') {
        while (here_.offset < text_.size() && text_[here_.offset] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  SourceSpan here_;
};

struct ProfileEntry {
  std::variant<StateId, Address> key;
  Action action;
  SourceSpan key_span;
  SourceSpan action_span;
};

struct ParsedProfile {
  bool by_address = false;
  std::vector<ProfileEntry> entries;
  SourceSpan close;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Document document() {
    const Token& t = peek();
    Document out;
    if (t.kind == Tok::LParen) {
      out = finite();
    } else if (is_keyword(t, "graph")) {
      out = graph<PayoffVector>("graph");
    } else if (is_keyword(t, "pgraph")) {
      out = graph<AffinePayoff>("pgraph");
    } else if (is_keyword(t, "profile")) {
      auto p = profile();
      if (p.by_address) out = to_tree(p);
      else out = to_stationary(p);
    } else {
      fail({"'('", "'graph'", "'pgraph'", "'profile'"});
    }
    expect(Tok::End);
    return out;
  }

  ParsedProfile profile_document() {
    if (!is_keyword(peek(), "profile")) fail({"'profile'"});
    auto p = profile();
    expect(Tok::End);
    return p;
  }

  static TreeProfile to_tree(const ParsedProfile& p) {
    TreeProfile out;
    for (const auto& e : p.entries) out[std::get<Address>(e.key)] = e.action;
    return out;
  }
  static StationaryProfile to_stationary(const ParsedProfile& p) {
    StationaryProfile out;
    for (const auto& e : p.entries) out[std::get<StateId>(e.key)] = e.action;
    return out;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  static bool is_keyword(const Token& t, std::string_view word) {
    return t.kind == Tok::Ident && t.text == word;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string message =
        t.kind == Tok::End ? "unexpected end of input" : "unexpected " + describe(t);
    throw ParseError(t.span, message, std::move(expected), describe(t));
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail({describe(kind)});
    return next();
  }
  const Token& expect_keyword(std::string_view word) {
    if (!is_keyword(peek(), word)) fail({"'" + std::string(word) + "'"});
    return next();
  }
  const Token& ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail({"identifier"});
    return next();
  }

  Rational unsigned_rational() {
    const Token& num = expect(Tok::Number);
    std::string text = num.text;
    if (peek().kind == Tok::Slash && peek(1).kind == Tok::Number) {
      next();
      text += "/" + next().text;
    }
    auto r = parse_rational(text);
    if (!r) throw ParseError(num.span, "invalid rational '" + text + "'");
    return *r;
  }

  Rational rational() {
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      next();
      negative = true;
    }
    Rational r = unsigned_rational();
    return negative ? -r : r;
  }

  Rational constant_entry() { return rational(); }

  void stage_variable() {
    const Token& k = ident();
    if (k.text != "k") throw ParseError(k.span, "the stage variable is 'k'", {"'k'"}, describe(k));
  }

  // [NUM*]k, with NUM = 1 when omitted
  Rational stage_term() {
    if (peek().kind == Tok::Ident) {
      stage_variable();
      return 1;
    }
    Rational coefficient = unsigned_rational();
    expect(Tok::Star);
    stage_variable();
    return coefficient;
  }

  // VALUE := [-] NUM [(+|-) TERM] | [-] TERM
  AffineExpr affine_entry() {
    const bool negative = peek().kind == Tok::Minus;
    if (negative) next();
    if (peek().kind == Tok::Ident || (peek().kind == Tok::Number && peek(1).kind == Tok::Star) ||
        (peek().kind == Tok::Number && peek(1).kind == Tok::Slash && peek(3).kind == Tok::Star)) {
      const Rational slope = stage_term();
      return {0, negative ? -slope : slope};
    }
    const Rational intercept = unsigned_rational();
    AffineExpr e{negative ? -intercept : intercept, 0};
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool minus = next().kind == Tok::Minus;
      const Rational slope = stage_term();
      e.slope = minus ? -slope : slope;
    }
    return e;
  }

  // payoffs := ( "(" IDENT ":" VALUE ")" )+
  template <class Payoff>
  Payoff payoffs() {
    Payoff out;
    if (peek().kind != Tok::LParen) fail({"'('"});
    while (peek().kind == Tok::LParen) {
      next();
      const Token& who = ident();
      expect(Tok::Colon);
      if constexpr (std::is_same_v<Payoff, PayoffVector>) {
        auto v = constant_entry();
        if (!out.entries.emplace(who.text, v).second)
          throw ParseError(who.span, "duplicate payoff for player " + who.text);
      } else {
        auto v = affine_entry();
        if (!out.entries.emplace(who.text, v).second)
          throw ParseError(who.span, "duplicate payoff for player " + who.text);
      }
      expect(Tok::RParen);
    }
    return out;
  }

  FiniteGame finite() {
    expect(Tok::LParen);
    const Token& head = peek();
    if (is_keyword(head, "leaf")) {
      next();
      auto p = payoffs<PayoffVector>();
      if (peek().kind != Tok::RParen) fail({"'('", "')'"});
      next();
      return FiniteGame::leaf(std::move(p));
    }
    if (!is_keyword(head, "node")) fail({"'leaf'", "'node'"});
    next();
    const Token& mover = ident();
    std::vector<Branch> branches;
    std::set<Action> seen;
    if (peek().kind != Tok::LParen) fail({"'('"});
    while (peek().kind == Tok::LParen) {
      next();
      const Token& label = ident();
      if (!seen.insert(label.text).second)
        throw ParseError(label.span, "duplicate action label '" + label.text + "'");
      auto sub = finite();
      expect(Tok::RParen);
      branches.push_back({label.text, std::move(sub)});
    }
    if (peek().kind != Tok::RParen) fail({"'('", "')'"});
    next();
    return FiniteGame::node(mover.text, std::move(branches));
  }

  template <class Payoff>
  BasicGraph<Payoff> graph(std::string_view keyword) {
    constexpr bool param = std::is_same_v<Payoff, AffinePayoff>;
    expect_keyword(keyword);
    BasicGraph<Payoff> g;
    g.name = ident().text;
    expect(Tok::LBrace);
    std::vector<std::pair<StateId, SourceSpan>> targets;
    if (!is_keyword(peek(), "state")) fail({"'state'"});
    while (is_keyword(peek(), "state")) {
      next();
      const Token& id = ident();
      if (g.states.count(id.text))
        throw ParseError(id.span, "duplicate state id '" + id.text + "'");
      expect(Tok::Equals);
      StateDef<Payoff> def;
      if (is_keyword(peek(), "leaf")) {
        next();
        def.value = Terminal<Payoff>{payoffs<Payoff>()};
      } else if (is_keyword(peek(), "node")) {
        next();
        Internal<Payoff> in;
        in.mover = ident().text;
        expect(Tok::LBrace);
        std::set<Action> seen;
        for (;;) {
          const Token& label = ident();
          if (!seen.insert(label.text).second)
            throw ParseError(label.span, "duplicate action label '" + label.text + "'");
          expect(Tok::Arrow);
          Edge<Payoff> e;
          e.action = label.text;
          if (is_keyword(peek(), "leaf")) {
            next();
            e.target = payoffs<Payoff>();
          } else {
            const Token& target = ident();
            e.target = target.text;
            targets.emplace_back(target.text, target.span);
          }
          if constexpr (param) {
            if (peek().kind == Tok::At) {
              next();
              const Token& k = ident();
              if (k.text != "k") throw ParseError(k.span, "the stage variable is 'k'", {"'k'"}, describe(k));
              expect(Tok::Plus);
              const Token& one = expect(Tok::Number);
              if (one.text != "1")
                throw ParseError(one.span, "stage increments are 0 or 1", {"'1'"}, describe(one));
              e.delta = 1;
            }
          }
          in.edges.push_back(std::move(e));
          if (peek().kind == Tok::Comma) {
            next();
            continue;
          }
          if (peek().kind == Tok::RBrace) break;
          if constexpr (param) fail({"','", "'}'", "'@'"});
          else fail({"','", "'}'"});
        }
        expect(Tok::RBrace);
        def.value = std::move(in);
      } else {
        fail({"'leaf'", "'node'"});
      }
      g.states.emplace(id.text, std::move(def));
    }
    if (!is_keyword(peek(), "start")) fail({"'state'", "'start'"});
    next();
    const Token& start = ident();
    g.start = start.text;
    targets.emplace_back(start.text, start.span);
    expect(Tok::RBrace);
    for (const auto& [id, span] : targets)
      if (!g.states.count(id)) throw ParseError(span, "unknown state '" + id + "'");
    return g;
  }

  ParsedProfile profile() {
    expect_keyword("profile");
    expect(Tok::LBrace);
    ParsedProfile p;
    std::set<std::variant<StateId, Address>> seen;
    bool first = true;
    while (peek().kind == Tok::Ident || peek().kind == Tok::Slash) {
      ProfileEntry e;
      e.key_span = peek().span;
      bool address = false;
      if (peek().kind == Tok::Slash) {
        address = true;
        Address addr;
        next();
        if (peek().kind == Tok::Ident) {
          addr.push_back(next().text);
          while (peek().kind == Tok::Slash) {
            next();
            addr.push_back(ident().text);
          }
        }
        e.key = std::move(addr);
      } else {
        e.key = next().text;
      }
      if (first) p.by_address = address;
      else if (address != p.by_address)
        throw ParseError(e.key_span, "profile mixes node addresses and state ids");
      first = false;
      if (!seen.insert(e.key).second) throw ParseError(e.key_span, "duplicate profile key");
      expect(Tok::Colon);
      e.action_span = peek().span;
      e.action = ident().text;
      p.entries.push_back(std::move(e));
    }
    p.close = peek().span;
    if (peek().kind != Tok::RBrace) fail({"identifier", "'/'", "'}'"});
    next();
    return p;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Document parse(std::string_view text) { return detail::Parser(text).document(); }

namespace detail {

template <class T>
T parse_as(std::string_view text, const char* what) {
  auto doc = parse(text);
  if (auto* v = std::get_if<T>(&doc)) return std::move(*v);
  throw ParseError({}, std::string("document is not ") + what);
}

}  // namespace detail

inline FiniteGame parse_game(std::string_view text) {
  return detail::parse_as<FiniteGame>(text, "a finite game");
}
inline GameGraph parse_graph(std::string_view text) {
  return detail::parse_as<GameGraph>(text, "a game graph");
}
inline ParamGraph parse_param_graph(std::string_view text) {
  return detail::parse_as<ParamGraph>(text, "a parametrized game graph");
}

// Parses a profile and checks it is total on `g`; errors point at the
// offending entry, or at the closing brace for a missing one.
inline TreeProfile parse_profile_for(std::string_view text, const FiniteGame& g) {
  auto p = detail::Parser(text).profile_document();
  if (!p.by_address && !p.entries.empty())
    throw ParseError(p.entries.front().key_span, "a finite game needs node addresses as keys");
  std::map<Address, const Node*> nodes;
  for_each_node(g, [&](const Address& a, const Node& n) { nodes[a] = &n; });
  for (const auto& e : p.entries) {
    const auto& addr = std::get<Address>(e.key);
    auto it = nodes.find(addr);
    if (it == nodes.end())
      throw ParseError(e.key_span, "no decision node at " + to_string(addr));
    if (find_branch(*it->second, e.action) == nullptr)
      throw ParseError(e.action_span, "no action '" + e.action + "' at " + to_string(addr));
  }
  auto s = detail::Parser::to_tree(p);
  for (const auto& [addr, n] : nodes)
    if (!s.count(addr)) throw ParseError(p.close, "profile has no choice at " + to_string(addr));
  return s;
}

template <class Payoff>
StationaryProfile parse_profile_for(std::string_view text, const BasicGraph<Payoff>& g) {
  auto p = detail::Parser(text).profile_document();
  if (p.by_address && !p.entries.empty())
    throw ParseError(p.entries.front().key_span, "a game graph needs state ids as keys");
  for (const auto& e : p.entries) {
    const auto& id = std::get<StateId>(e.key);
    auto it = g.states.find(id);
    if (it == g.states.end() || it->second.is_terminal())
      throw ParseError(e.key_span, "no decision state '" + id + "'");
    if (it->second.internal().find(e.action) == nullptr)
      throw ParseError(e.action_span, "no action '" + e.action + "' at state " + id);
  }
  auto s = detail::Parser::to_stationary(p);
  for (const auto& id : internal_states(g))
    if (!s.count(id)) throw ParseError(p.close, "profile has no choice at state " + id);
  return s;
}

// Canonical text. Two-space indentation, branch order preserved, rationals
// in lowest terms, LF line ends, no trailing newline.
namespace detail {

inline std::string payoff_text(const PayoffVector& p) {
  std::string out;
  for (const auto& [who, v] : p.entries) {
    if (!out.empty()) out += ' ';
    out += "(" + who + ":" + to_string(v) + ")";
  }
  return out;
}

inline std::string payoff_text(const AffinePayoff& p) {
  std::string out;
  for (const auto& [who, e] : p.entries) {
    if (!out.empty()) out += ' ';
    out += "(" + who + ":" + to_string(e) + ")";
  }
  return out;
}

inline void write_finite(const FiniteGame& g, std::size_t indent, std::string& out) {
  if (g.is_leaf()) {
    out += "(leaf " + payoff_text(g.as_leaf().payoffs) + ")";
    return;
  }
  const Node& n = g.as_node();
  out += "(node " + n.mover;
  const std::string pad(indent + 2, ' ');
  for (const auto& b : n.branches) {
    out += "\n" + pad + "(" + b.action + " ";
    write_finite(b.game, indent + 2, out);
    out += ")";
  }
  out += ")";
}

}  // namespace detail

inline std::string serialize(const FiniteGame& g) {
  std::string out;
  detail::write_finite(g, 0, out);
  return out;
}

template <class Payoff>
std::string serialize(const BasicGraph<Payoff>& g) {
  constexpr bool param = std::is_same_v<Payoff, AffinePayoff>;
  std::string out = std::string(param ? "pgraph " : "graph ") + (g.name.empty() ? "unnamed" : g.name) + " {\n";
  for (const auto& [id, def] : g.states) {
    out += "  state " + id + " = ";
    if (def.is_terminal()) {
      out += "leaf " + detail::payoff_text(def.terminal().payoffs) + "\n";
      continue;
    }
    const auto& in = def.internal();
    out += "node " + in.mover + " {";
    bool first = true;
    for (const auto& e : in.edges) {
      out += first ? " " : ", ";
      first = false;
      out += e.action + " -> ";
      out += e.to_leaf() ? "leaf " + detail::payoff_text(e.leaf()) : e.target_state();
      if (e.delta == 1) out += " @ k+1";
    }
    out += " }\n";
  }
  out += "  start " + g.start + "\n}";
  return out;
}

inline std::string serialize(const StationaryProfile& s) {
  std::string out = "profile {\n";
  for (const auto& [id, a] : s) out += "  " + id + ": " + a + "\n";
  return out + "}";
}

inline std::string serialize(const TreeProfile& s) {
  std::string out = "profile {\n";
  for (const auto& [addr, a] : s) out += "  " + to_string(addr) + ": " + a + "\n";
  return out + "}";
}

inline std::string serialize(const Document& doc) {
  return std::visit([](const auto& v) { return serialize(v); }, doc);
}

}  // namespace coind
