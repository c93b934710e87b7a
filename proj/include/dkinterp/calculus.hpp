// Rule schemas of G(K_D), G(KD_D) and G(KT+_D), backward move enumeration,
// proof trees, and a node-by-node proof checker.
//
// The checker never calls the enumerator. It recomputes each rule instance
// from the recorded principal formulas and compares the result with the
// recorded premises, so a bug in one does not hide a bug in the other.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dkinterp/sequent.hpp"

namespace dkinterp {

enum class Logic { K_D, KD_D, KTplus_D };

enum class RuleTag {
  InitVar, InitBot, LAnd, RAnd, LOr, ROr, LImp, RImp, LNeg, RNeg, DK, DD, DKplus, DTplus
};

enum class Side { Store, Antecedent, Succedent };

inline const char* logic_name(Logic l) {
  switch (l) {
    case Logic::K_D: return "K_D";
    case Logic::KD_D: return "KD_D";
    case Logic::KTplus_D: return "KTplus_D";
  }
  return "?";
}

// Accepts both the short CLI spellings and the canonical names.
inline Logic parse_logic(std::string_view s) {
  if (s == "k" || s == "K_D") return Logic::K_D;
  if (s == "kd" || s == "KD_D") return Logic::KD_D;
  if (s == "kt" || s == "KTplus_D" || s == "KT_D") return Logic::KTplus_D;
  throw std::invalid_argument("unknown logic '" + std::string(s) + "'");
}

inline const char* rule_name(RuleTag r) {
  switch (r) {
    case RuleTag::InitVar: return "InitVar";
    case RuleTag::InitBot: return "InitBot";
    case RuleTag::LAnd: return "LAnd";
    case RuleTag::RAnd: return "RAnd";
    case RuleTag::LOr: return "LOr";
    case RuleTag::ROr: return "ROr";
    case RuleTag::LImp: return "LImp";
    case RuleTag::RImp: return "RImp";
    case RuleTag::LNeg: return "LNeg";
    case RuleTag::RNeg: return "RNeg";
    case RuleTag::DK: return "DK";
    case RuleTag::DD: return "DD";
    case RuleTag::DKplus: return "DKplus";
    case RuleTag::DTplus: return "DTplus";
  }
  return "?";
}

inline std::optional<RuleTag> parse_rule(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(RuleTag::DTplus); ++i) {
    auto r = static_cast<RuleTag>(i);
    if (s == rule_name(r)) return r;
  }
  return std::nullopt;
}

inline const char* side_name(Side s) {
  switch (s) {
    case Side::Store: return "store";
    case Side::Antecedent: return "antecedent";
    case Side::Succedent: return "succedent";
  }
  return "?";
}

// A principal formula together with the side it sits on and how many of its
// occurrences the rule consumes.
struct PrincipalRef {
  Side side;
  Formula formula;
  std::size_t count = 1;
  bool operator==(const PrincipalRef&) const = default;
};

struct Move {
  RuleTag rule;
  std::vector<PrincipalRef> principal;
  std::vector<AnySequent> premises;
};

struct ProofTree {
  AnySequent conclusion;
  RuleTag rule;
  std::vector<PrincipalRef> principal;
  std::vector<ProofTree> premises;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.size();
    return n;
  }
  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& p : premises) h = std::max(h, p.height());
    return h + 1;
  }
};

inline bool shape_matches(Logic logic, const AnySequent& s) {
  return std::holds_alternative<TSequent>(s) == (logic == Logic::KTplus_D);
}

inline bool rule_allowed(Logic logic, RuleTag r) {
  switch (r) {
    case RuleTag::DK: return logic != Logic::KTplus_D;
    case RuleTag::DD: return logic == Logic::KD_D;
    case RuleTag::DKplus:
    case RuleTag::DTplus: return logic == Logic::KTplus_D;
    default: return true;
  }
}

namespace detail {

// Uniform access to the parts of a sequent; the store is empty for plain
// sequents.
struct Parts {
  FormulaMultiset store;
  FormulaMultiset ante;
  FormulaMultiset succ;
  bool tagged;

  static Parts of(const AnySequent& s) {
    if (auto* p = std::get_if<Sequent>(&s)) return Parts{{}, p->antecedent, p->succedent, false};
    const auto& t = std::get<TSequent>(s);
    return Parts{t.store, t.antecedent, t.succedent, true};
  }
  AnySequent rebuild(FormulaMultiset g, FormulaMultiset d) const {
    if (tagged) return TSequent(store, std::move(g), std::move(d));
    return Sequent{std::move(g), std::move(d)};
  }
};

inline std::optional<Formula> shared_variable(const FormulaMultiset& g, const FormulaMultiset& d) {
  for (const auto& e : g.entries()) {
    if (e.formula.is_var() && d.contains(e.formula)) return e.formula;
  }
  return std::nullopt;
}

inline bool decomposable(const Formula& f) {
  return f.op() == Connective::Not || f.is_binary();
}

// Premises of the propositional rule acting on `f` at `side`.
inline std::pair<RuleTag, std::vector<AnySequent>> logical_premises(const Parts& c, Side side,
                                                                    const Formula& f) {
  FormulaMultiset g = c.ante, d = c.succ;
  if (side == Side::Antecedent) {
    g.erase_one(f);
  } else {
    d.erase_one(f);
  }
  auto with = [](FormulaMultiset m, std::initializer_list<Formula> extra) {
    for (const Formula& x : extra) m.insert(x);
    return m;
  };
  bool left = side == Side::Antecedent;
  switch (f.op()) {
    case Connective::Not:
      if (left) return {RuleTag::LNeg, {c.rebuild(g, with(d, {f.child()}))}};
      return {RuleTag::RNeg, {c.rebuild(with(g, {f.child()}), d)}};
    case Connective::And:
      if (left) return {RuleTag::LAnd, {c.rebuild(with(g, {f.left(), f.right()}), d)}};
      return {RuleTag::RAnd,
              {c.rebuild(g, with(d, {f.left()})), c.rebuild(g, with(d, {f.right()}))}};
    case Connective::Or:
      if (left) {
        return {RuleTag::LOr,
                {c.rebuild(with(g, {f.left()}), d), c.rebuild(with(g, {f.right()}), d)}};
      }
      return {RuleTag::ROr, {c.rebuild(g, with(d, {f.left(), f.right()}))}};
    case Connective::Implies:
      if (left) {
        return {RuleTag::LImp,
                {c.rebuild(g, with(d, {f.left()})), c.rebuild(with(g, {f.right()}), d)}};
      }
      return {RuleTag::RImp, {c.rebuild(with(g, {f.left()}), with(d, {f.right()}))}};
    default:
      throw std::logic_error("not a propositional connective");
  }
}

inline FormulaMultiset bodies(const FormulaMultiset& boxes) {
  FormulaMultiset out;
  for (const auto& e : boxes.entries()) out.insert(e.formula.child(), e.count);
  return out;
}

inline std::vector<PrincipalRef> refs(Side side, const FormulaMultiset& m) {
  std::vector<PrincipalRef> out;
  for (const auto& e : m.entries()) out.push_back({side, e.formula, e.count});
  return out;
}

}  // namespace detail

inline std::vector<Move> enumerate_backward_moves(Logic logic, const AnySequent& s) {
  if (!shape_matches(logic, s)) {
    throw std::invalid_argument(std::string("sequent shape does not match logic ") +
                                logic_name(logic));
  }
  const auto c = detail::Parts::of(s);
  const Formula bot = Formula::bottom();

  if (c.ante.contains(bot)) return {Move{RuleTag::InitBot, {{Side::Antecedent, bot, 1}}, {}}};
  if (auto p = detail::shared_variable(c.ante, c.succ)) {
    return {Move{RuleTag::InitVar, {{Side::Antecedent, *p, 1}, {Side::Succedent, *p, 1}}, {}}};
  }

  for (Side side : {Side::Antecedent, Side::Succedent}) {
    const auto& m = side == Side::Antecedent ? c.ante : c.succ;
    for (const auto& e : m.entries()) {
      if (!detail::decomposable(e.formula)) continue;
      auto [rule, premises] = detail::logical_premises(c, side, e.formula);
      return {Move{rule, {{side, e.formula, 1}}, std::move(premises)}};
    }
  }

  std::vector<Move> moves;
  if (logic == Logic::KTplus_D) {
    for (const auto& e : c.ante.entries()) {
      if (!e.formula.is_boxed()) continue;
      FormulaMultiset store = c.store, g = c.ante;
      store.insert(e.formula);
      g.erase_one(e.formula);
      g.insert(e.formula.child());
      moves.push_back(Move{RuleTag::DTplus,
                           {{Side::Antecedent, e.formula, 1}},
                           {TSequent(std::move(store), std::move(g), c.succ)}});
    }
    if (!moves.empty()) return moves;
    for (const auto& e : c.succ.entries()) {
      if (!e.formula.is_boxed()) continue;
      Group g = e.formula.group();
      FormulaMultiset used = natural_subgroups(c.store, g);
      auto principal = detail::refs(Side::Store, used);
      principal.insert(principal.begin(), PrincipalRef{Side::Succedent, e.formula, 1});
      moves.push_back(Move{RuleTag::DKplus, std::move(principal),
                           {TSequent({}, detail::bodies(used), {e.formula.child()})}});
    }
    return moves;
  }

  if (logic == Logic::KD_D) {
    // Agents in ascending id order; only exact {a}-boxes feed the rule.
    std::uint32_t seen = 0;
    for (const auto& e : c.ante.entries()) {
      if (e.formula.is_boxed() && e.formula.group().size() == 1) seen |= e.formula.group().bits();
    }
    for (std::uint32_t b = seen; b != 0; b &= b - 1) {
      Group a = Group::from_bits(b & (~b + 1));
      FormulaMultiset used = natural(c.ante, a);
      moves.push_back(Move{RuleTag::DD, detail::refs(Side::Antecedent, used),
                           {Sequent{detail::bodies(used), {}}}});
    }
  }
  for (const auto& e : c.succ.entries()) {
    if (!e.formula.is_boxed()) continue;
    Group g = e.formula.group();
    FormulaMultiset used = natural_subgroups(c.ante, g);
    auto principal = detail::refs(Side::Antecedent, used);
    principal.insert(principal.begin(), PrincipalRef{Side::Succedent, e.formula, 1});
    moves.push_back(Move{RuleTag::DK, std::move(principal),
                         {Sequent{detail::bodies(used), {e.formula.child()}}}});
  }
  return moves;
}

inline ProofTree instantiate(const AnySequent& conclusion, const Move& m,
                             std::vector<ProofTree> premises) {
  return ProofTree{conclusion, m.rule, m.principal, std::move(premises)};
}

// ---------------------------------------------------------------------------
// Checking

// Returns an error message, or nothing if the node is a correct rule instance
// of `logic`. Only the node itself is inspected, not its subtrees.
inline std::optional<std::string> check_step(Logic logic, const AnySequent& conclusion,
                                             RuleTag rule,
                                             const std::vector<PrincipalRef>& principal,
                                             const std::vector<AnySequent>& premises) {
  using detail::Parts;
  if (!shape_matches(logic, conclusion)) return "conclusion shape does not match the logic";
  for (const auto& p : premises) {
    if (!shape_matches(logic, p)) return "premise shape does not match the logic";
  }
  if (!rule_allowed(logic, rule)) {
    return std::string("rule ") + rule_name(rule) + " is not a rule of " + logic_name(logic);
  }
  const Parts c = Parts::of(conclusion);
  auto arity = [&](std::size_t n) -> std::optional<std::string> {
    if (premises.size() != n) {
      return std::string(rule_name(rule)) + " expects " + std::to_string(n) + " premise(s), got " +
             std::to_string(premises.size());
    }
    return std::nullopt;
  };
  auto same = [&](const std::vector<AnySequent>& expected) -> std::optional<std::string> {
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (!(premises[i] == expected[i])) {
        return "premise " + std::to_string(i) + " is not the expected instance";
      }
    }
    return std::nullopt;
  };
  for (const auto& r : principal) {
    if (r.count == 0) return "principal occurrence with zero count";
  }

  switch (rule) {
    case RuleTag::InitBot: {
      if (auto e = arity(0)) return e;
      if (!c.ante.contains(Formula::bottom())) return "no false in the antecedent";
      return std::nullopt;
    }
    case RuleTag::InitVar: {
      if (auto e = arity(0)) return e;
      if (principal.empty() || !principal.front().formula.is_var()) {
        return "InitVar needs a variable as principal";
      }
      const Formula& p = principal.front().formula;
      if (!c.ante.contains(p) || !c.succ.contains(p)) {
        return "variable " + p.name() + " is not on both sides";
      }
      return std::nullopt;
    }
    case RuleTag::LAnd: case RuleTag::RAnd: case RuleTag::LOr: case RuleTag::ROr:
    case RuleTag::LImp: case RuleTag::RImp: case RuleTag::LNeg: case RuleTag::RNeg: {
      if (principal.size() != 1 || principal.front().count != 1) {
        return "propositional rules have one principal occurrence";
      }
      const auto& ref = principal.front();
      bool left = rule == RuleTag::LAnd || rule == RuleTag::LOr || rule == RuleTag::LImp ||
                  rule == RuleTag::LNeg;
      if (ref.side != (left ? Side::Antecedent : Side::Succedent)) return "principal on wrong side";
      const auto& m = left ? c.ante : c.succ;
      if (!m.contains(ref.formula)) return "principal formula not in the conclusion";
      if (!detail::decomposable(ref.formula)) return "principal formula is not propositional";
      auto [expected_rule, expected] = detail::logical_premises(c, ref.side, ref.formula);
      if (expected_rule != rule) return "rule does not match the principal connective";
      if (auto e = arity(expected.size())) return e;
      return same(expected);
    }
    case RuleTag::DK:
    case RuleTag::DKplus: {
      if (auto e = arity(1)) return e;
      if (principal.empty() || principal.front().side != Side::Succedent ||
          !principal.front().formula.is_boxed() || principal.front().count != 1) {
        return "first principal must be one succedent box";
      }
      const Formula box = principal.front().formula;
      const Group g = box.group();
      const Side from = rule == RuleTag::DK ? Side::Antecedent : Side::Store;
      const FormulaMultiset& pool = rule == RuleTag::DK ? c.ante : c.store;
      FormulaMultiset used;
      for (std::size_t i = 1; i < principal.size(); ++i) {
        const auto& r = principal[i];
        if (r.side != from || !r.formula.is_boxed()) return "principal antecedent entry misplaced";
        if (!r.formula.group().subset_of(g)) return "principal group is not a subgroup";
        used.insert(r.formula, r.count);
      }
      if (!c.succ.contains(box)) return "principal box not in the succedent";
      if (!pool.includes(used)) return "principal boxes not in the conclusion";
      FormulaMultiset sigma = pool.minus(used);
      FormulaMultiset omega = c.succ;
      omega.erase_one(box);
      for (const auto& e : sigma.entries()) {
        const Formula& f = e.formula;
        bool ok = (f.is_atomic() && rule == RuleTag::DK) || (f.is_boxed() && !f.group().subset_of(g));
        if (!ok) return "context side condition fails for " + std::string(rule_name(rule));
      }
      if (rule == RuleTag::DKplus && !c.ante.all_of([](const Formula& f) { return f.is_atomic(); })) {
        return "DKplus needs an atomic antecedent";
      }
      if (!omega.all_of(atomic_or_boxed)) return "succedent context is not atomic or boxed";
      AnySequent expected = rule == RuleTag::DK
                                ? AnySequent(Sequent{detail::bodies(used), {box.child()}})
                                : AnySequent(TSequent({}, detail::bodies(used), {box.child()}));
      return same({expected});
    }
    case RuleTag::DD: {
      if (auto e = arity(1)) return e;
      if (principal.empty()) return "DD needs a non-empty principal multiset";
      FormulaMultiset used;
      std::optional<Group> a;
      for (const auto& r : principal) {
        if (r.side != Side::Antecedent || !r.formula.is_boxed() || r.formula.group().size() != 1) {
          return "DD principals are singleton boxes in the antecedent";
        }
        if (a && !(r.formula.group() == *a)) return "DD principals mix agents";
        a = r.formula.group();
        used.insert(r.formula, r.count);
      }
      if (!c.ante.includes(used)) return "principal boxes not in the conclusion";
      FormulaMultiset sigma = c.ante.minus(used);
      for (const auto& e : sigma.entries()) {
        const Formula& f = e.formula;
        if (!(f.is_atomic() || (f.is_boxed() && !(f.group() == *a)))) {
          return "antecedent context side condition fails for DD";
        }
      }
      if (!c.succ.all_of(atomic_or_boxed)) return "succedent context is not atomic or boxed";
      return same({Sequent{detail::bodies(used), {}}});
    }
    case RuleTag::DTplus: {
      if (auto e = arity(1)) return e;
      if (principal.size() != 1 || principal.front().side != Side::Antecedent ||
          !principal.front().formula.is_boxed() || principal.front().count != 1) {
        return "DTplus has one antecedent box as principal";
      }
      const Formula box = principal.front().formula;
      if (!c.ante.contains(box)) return "principal box not in the antecedent";
      FormulaMultiset store = c.store, g = c.ante;
      store.insert(box);
      g.erase_one(box);
      g.insert(box.child());
      return same({TSequent(std::move(store), std::move(g), c.succ)});
    }
  }
  return "unknown rule";
}

struct CheckResult {
  bool ok = true;
  std::vector<std::size_t> path;  // premise indices from the root to the first bad node
  std::string message;
};

inline CheckResult check_proof(Logic logic, const ProofTree& t) {
  struct Frame {
    const ProofTree* node;
    std::vector<std::size_t> path;
  };
  std::vector<Frame> stack{{&t, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    std::vector<AnySequent> prem;
    for (const auto& p : f.node->premises) prem.push_back(p.conclusion);
    if (auto err = check_step(logic, f.node->conclusion, f.node->rule, f.node->principal, prem)) {
      return CheckResult{false, f.path, *err};
    }
    for (std::size_t i = f.node->premises.size(); i-- > 0;) {
      auto path = f.path;
      path.push_back(i);
      stack.push_back({&f.node->premises[i], std::move(path)});
    }
  }
  return {};
}

inline MeasureKind measure_for(Logic logic) {
  return logic == Logic::KTplus_D ? MeasureKind::lex_order : MeasureKind::wt_order;
}

}  // namespace dkinterp
