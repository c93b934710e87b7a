// Concrete syntax: a recursive-descent parser and the matching printer.
//
//   formula := imp
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~" unary | "D" "{" agents "}" unary
//            | "<" "D" "{" agents "}" ">" unary | atom
//   atom    := ident | "false" | "true" | "(" formula ")"
//   agents  := ident ("," ident)*
//
// Sequents are "A, B => C" and T-sequents "S1, S2 | A => C". The Unicode
// spellings ¬ ∧ ∨ → ⇒ ⊥ ⊤ are accepted as aliases on input.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dkinterp/sequent.hpp"

namespace dkinterp {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

enum class Tok {
  Ident, Not, And, Or, Imp, Seq, LParen, RParen, LBrace, RBrace, Comma, Lt, Gt, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> lex(std::string_view in) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view s) { return in.substr(i, s.size()) == s; };
  while (i < in.size()) {
    char c = in[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t at = i;
    auto push = [&](Tok k, std::size_t len, std::string text = {}) {
      out.push_back(Token{k, std::move(text), at});
      i += len;
    };
    if (c == '\\') {
      // LaTeX control words, as emitted by latex_notation().
      static const std::pair<std::string_view, Tok> words[] = {
          {"\\Rightarrow", Tok::Seq}, {"\\rangle", Tok::Gt}, {"\\langle", Tok::Lt},
          {"\\wedge", Tok::And},      {"\\neg", Tok::Not},   {"\\vee", Tok::Or},
          {"\\mid", Tok::Or},         {"\\top", Tok::Ident}, {"\\bot", Tok::Ident},
          {"\\to", Tok::Imp}};
      bool hit = false;
      for (const auto& [w, k] : words) {
        if (!starts(w)) continue;
        std::size_t end = i + w.size();
        if (end < in.size() && ((in[end] >= 'a' && in[end] <= 'z') || (in[end] >= 'A' && in[end] <= 'Z'))) {
          continue;
        }
        std::string text = w == "\\top" ? "true" : w == "\\bot" ? "false" : "";
        push(k, w.size(), text);
        hit = true;
        break;
      }
      if (!hit) throw ParseError("unknown control word", i);
    } else if (starts("D_{")) {
      push(Tok::Ident, 2, "D");
    } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_') {
      std::size_t j = i;
      while (j < in.size() && ((in[j] >= 'a' && in[j] <= 'z') || (in[j] >= 'A' && in[j] <= 'Z') ||
                               (in[j] >= '0' && in[j] <= '9') || in[j] == '_')) {
        ++j;
      }
      push(Tok::Ident, j - i, std::string(in.substr(i, j - i)));
    } else if (starts("->")) {
      push(Tok::Imp, 2);
    } else if (starts("=>")) {
      push(Tok::Seq, 2);
    } else if (starts("\xC2\xAC")) {  // ¬
      push(Tok::Not, 2);
    } else if (starts("\xE2\x88\xA7")) {  // ∧
      push(Tok::And, 3);
    } else if (starts("\xE2\x88\xA8")) {  // ∨
      push(Tok::Or, 3);
    } else if (starts("\xE2\x86\x92")) {  // →
      push(Tok::Imp, 3);
    } else if (starts("\xE2\x87\x92")) {  // ⇒
      push(Tok::Seq, 3);
    } else if (starts("\xE2\x8A\xA5")) {  // ⊥
      push(Tok::Ident, 3, "false");
    } else if (starts("\xE2\x8A\xA4")) {  // ⊤
      push(Tok::Ident, 3, "true");
    } else {
      switch (c) {
        case '~': push(Tok::Not, 1); break;
        case '&': push(Tok::And, 1); break;
        case '|': push(Tok::Or, 1); break;
        case '(': push(Tok::LParen, 1); break;
        case ')': push(Tok::RParen, 1); break;
        case '{': push(Tok::LBrace, 1); break;
        case '}': push(Tok::RBrace, 1); break;
        case ',': push(Tok::Comma, 1); break;
        case '<': push(Tok::Lt, 1); break;
        case '>': push(Tok::Gt, 1); break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
    }
  }
  out.push_back(Token{Tok::End, {}, in.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const AgentUniverse& universe)
      : toks_(lex(text)), universe_(universe) {}

  Formula formula() { return imp(); }

  FormulaMultiset formula_list() {
    FormulaMultiset m;
    if (at(Tok::Seq) || at(Tok::End)) return m;
    m.insert(formula());
    while (accept(Tok::Comma)) m.insert(formula());
    return m;
  }

  Sequent sequent() {
    Sequent s;
    s.antecedent = formula_list();
    expect(Tok::Seq, "'=>'");
    s.succedent = formula_list();
    expect(Tok::End, "end of input");
    return s;
  }

  TSequent tsequent() {
    std::size_t start = pos_;
    FormulaMultiset store;
    bool have_store = false;
    try {
      if (accept(Tok::Or)) {
        have_store = true;
      } else {
        FormulaMultiset items;
        while (true) {
          Formula f = unary();
          if (!f.is_boxed()) break;
          items.insert(f);
          if (accept(Tok::Or)) {
            have_store = true;
            break;
          }
          if (!accept(Tok::Comma)) break;
        }
        if (have_store) store = std::move(items);
      }
    } catch (const ParseError&) {
      have_store = false;
    }
    if (!have_store) {
      pos_ = start;
      store = {};
    }
    Sequent rest = sequent();
    return TSequent(std::move(store), std::move(rest.antecedent), std::move(rest.succedent));
  }

  void finish() { expect(Tok::End, "end of input"); }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().pos);
  }

  Formula imp() {
    Formula lhs = disj();
    if (accept(Tok::Imp)) return Formula::implies(lhs, imp());
    return lhs;
  }
  Formula disj() {
    Formula f = conj();
    while (accept(Tok::Or)) f = Formula::disj(f, conj());
    return f;
  }
  Formula conj() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::conj(f, unary());
    return f;
  }

  Group agents() {
    expect(Tok::LBrace, "'{'");
    if (at(Tok::RBrace)) throw ParseError("empty group", peek().pos);
    std::vector<AgentId> members;
    do {
      if (!at(Tok::Ident)) throw ParseError("expected agent name", peek().pos);
      const Token& t = peek();
      auto a = universe_.find(t.text);
      if (!a) throw ParseError("unknown agent '" + t.text + "'", t.pos);
      members.push_back(*a);
      ++pos_;
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "'}'");
    return Group::from_members(members);
  }

  bool at_modal_d() const {
    return at(Tok::Ident) && peek().text == "D" && toks_[pos_ + 1].kind == Tok::LBrace;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::neg(unary());
    if (at_modal_d()) {
      ++pos_;
      Group g = agents();
      return Formula::dist(g, unary());
    }
    if (accept(Tok::Lt)) {
      if (!at_modal_d()) throw ParseError("expected 'D{' after '<'", peek().pos);
      ++pos_;
      Group g = agents();
      expect(Tok::Gt, "'>'");
      return Formula::diamond(g, unary());
    }
    return atom();
  }

  Formula atom() {
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (!at(Tok::Ident)) throw ParseError("expected formula", peek().pos);
    std::string name = peek().text;
    ++pos_;
    if (name == "false") return Formula::bottom();
    if (name == "true") return Formula::top();
    return Formula::var(std::move(name));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const AgentUniverse& universe_;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text, const AgentUniverse& universe) {
  detail::Parser p(text, universe);
  Formula f = p.formula();
  p.finish();
  return f;
}

inline Sequent parse_sequent(std::string_view text, const AgentUniverse& universe) {
  return detail::Parser(text, universe).sequent();
}

inline TSequent parse_tsequent(std::string_view text, const AgentUniverse& universe) {
  return detail::Parser(text, universe).tsequent();
}

// ---------------------------------------------------------------------------
// Printing

// Spellings used by the printer. The ASCII notation is the parser's input
// syntax; the lexer also reads back the LaTeX one.
struct Notation {
  const char* bottom;
  const char* top;
  const char* neg;
  const char* conj;
  const char* disj;
  const char* imp;
  const char* box_open;      // before the group
  const char* box_close;     // after the group
  const char* dia_open;
  const char* dia_close;
  const char* group_open;
  const char* group_close;
  const char* group_sep;
  const char* list_sep;
  const char* turnstile;
  const char* store_bar;
};

inline const Notation& ascii_notation() {
  static const Notation n{"false", "true", "~", " & ", " | ", " -> ", "D", "", "<D", ">",
                          "{", "}", ",", ", ", "=>", "|"};
  return n;
}

inline const Notation& latex_notation() {
  static const Notation n{"\\bot", "\\top", "\\neg ", " \\wedge ", " \\vee ", " \\to ",
                          "D_{", "}", "\\langle D_{", "}\\rangle ", "", "", ",", ", ",
                          "\\Rightarrow", "\\mid"};
  return n;
}

inline std::string format_group(Group g, const AgentUniverse& universe,
                                const Notation& n = ascii_notation()) {
  std::string out = n.group_open;
  bool first = true;
  for (AgentId a : g.members()) {
    if (!first) out += n.group_sep;
    out += a < universe.size() ? universe.name(a) : "#" + std::to_string(a);
    first = false;
  }
  return out + n.group_close;
}

namespace detail {

enum Level { kImp = 1, kOr = 2, kAnd = 3, kUnary = 4 };

inline void print(const Formula& f, const AgentUniverse& u, const Notation& n, int ctx,
                  std::string& out) {
  auto wrap = [&](int level, auto&& body) {
    bool paren = level < ctx;
    if (paren) out += '(';
    body();
    if (paren) out += ')';
  };
  switch (f.op()) {
    case Connective::Var:
      out += f.name();
      return;
    case Connective::Bottom:
      out += n.bottom;
      return;
    case Connective::Not: {
      Formula c = f.child();
      if (c.is_bottom()) {
        out += n.top;
      } else if (c.is_boxed() && c.child().op() == Connective::Not) {
        out += n.dia_open + format_group(c.group(), u, n) + n.dia_close;
        print(c.child().child(), u, n, kUnary, out);
      } else {
        out += n.neg;
        print(c, u, n, kUnary, out);
      }
      return;
    }
    case Connective::Dist:
      out += n.box_open + format_group(f.group(), u, n) + n.box_close;
      print(f.child(), u, n, kUnary, out);
      return;
    case Connective::And:
      wrap(kAnd, [&] {
        print(f.left(), u, n, kAnd, out);
        out += n.conj;
        print(f.right(), u, n, kUnary, out);
      });
      return;
    case Connective::Or:
      wrap(kOr, [&] {
        print(f.left(), u, n, kOr, out);
        out += n.disj;
        print(f.right(), u, n, kAnd, out);
      });
      return;
    case Connective::Implies:
      wrap(kImp, [&] {
        print(f.left(), u, n, kOr, out);
        out += n.imp;
        print(f.right(), u, n, kImp, out);
      });
      return;
  }
}

inline std::string format_list(const FormulaMultiset& m, const AgentUniverse& u,
                               const Notation& n) {
  std::string out;
  bool first = true;
  for (const Formula& f : m.elements()) {
    if (!first) out += n.list_sep;
    print(f, u, n, kImp, out);
    first = false;
  }
  return out;
}

}  // namespace detail

inline std::string format_formula(const Formula& f, const AgentUniverse& universe,
                                  const Notation& n = ascii_notation()) {
  std::string out;
  detail::print(f, universe, n, detail::kImp, out);
  return out;
}

inline std::string format_sequent(const Sequent& s, const AgentUniverse& u,
                                  const Notation& n = ascii_notation()) {
  std::string lhs = detail::format_list(s.antecedent, u, n);
  std::string rhs = detail::format_list(s.succedent, u, n);
  return (lhs.empty() ? "" : lhs + " ") + n.turnstile + (rhs.empty() ? "" : " " + rhs);
}

// The store bar is always printed so that a disjunction in Γ is never read
// back as a store separator.
inline std::string format_tsequent(const TSequent& t, const AgentUniverse& u,
                                   const Notation& n = ascii_notation()) {
  std::string store = detail::format_list(t.store, u, n);
  Sequent rest{t.antecedent, t.succedent};
  return (store.empty() ? "" : store + " ") + n.store_bar + " " + format_sequent(rest, u, n);
}

inline std::string format_any(const AnySequent& s, const AgentUniverse& u,
                              const Notation& n = ascii_notation()) {
  if (auto* p = std::get_if<Sequent>(&s)) return format_sequent(*p, u, n);
  return format_tsequent(std::get<TSequent>(s), u, n);
}

}  // namespace dkinterp
