// Uniform interpolants by the table-driven A-formula construction.
//
// A_(p,a)(Γ;Δ) is computed alongside a backward search: propositional
// formulas are decomposed first, and at a critical sequent the result is
// either ⊤ (when p or the agent a would be needed to close it) or the
// disjunction X assembled from the remaining atoms and boxes.
//
// Results are raw; no logical simplification is applied.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dkinterp/prover.hpp"

namespace dkinterp {

// The variable and agent to eliminate. Either may be absent, which is how
// the padding of pre/post interpolants with unequal list lengths is expressed
// when one list is empty.
struct ElimTarget {
  std::optional<std::string> var;
  std::optional<AgentId> agent;

  bool is_var(const Formula& f) const { return var && f.is_var() && f.name() == *var; }
  bool is_agent_in(Group g) const { return agent && g.contains(*agent); }
  bool is_agent_group(Group g) const { return agent && g.is_singleton(*agent); }
};

struct TraceNode {
  std::string line;  // "1".."12", "10'", or "empty"
  AnySequent sequent;
  Formula result;
  std::vector<std::shared_ptr<const TraceNode>> children;
};
using TracePtr = std::shared_ptr<const TraceNode>;

struct Interpolant {
  Formula formula;
  TracePtr trace;
};

namespace detail {

inline Formula disjoin(const std::vector<Formula>& xs) {
  if (xs.empty()) return Formula::bottom();
  Formula acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = Formula::disj(acc, xs[i]);
  return acc;
}

inline const char* propositional_line(RuleTag r) {
  switch (r) {
    case RuleTag::LAnd: return "1";
    case RuleTag::RAnd: return "2";
    case RuleTag::LOr: return "3";
    case RuleTag::ROr: return "4";
    case RuleTag::LNeg: return "5";
    case RuleTag::RNeg: return "6";
    case RuleTag::LImp: return "7";
    case RuleTag::RImp: return "8";
    default: throw std::logic_error("not a propositional rule");
  }
}

}  // namespace detail

// One interpolation session: a fixed logic and target, with a prover memo
// shared by all derivability tests and a cache of finished subresults.
class Interpolator {
 public:
  Interpolator(Logic logic, ElimTarget target, ProverOptions options = {})
      : logic_(logic), target_(std::move(target)), prover_(logic, options, &memo_) {}

  Logic logic() const { return logic_; }
  const ElimTarget& target() const { return target_; }
  Prover& prover() { return prover_; }

  TracePtr compute(const AnySequent& s) {
    if (!shape_matches(logic_, s)) {
      throw std::invalid_argument(std::string("sequent shape does not match logic ") +
                                  logic_name(logic_));
    }
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    TracePtr t = logic_ == Logic::KTplus_D ? step_T(std::get<TSequent>(s))
                                           : step(std::get<Sequent>(s));
    cache_.emplace(s, t);
    return t;
  }

  // User-level entry: KT sequents start with an empty store.
  Interpolant interpolate(const Sequent& s) {
    TracePtr t = compute(pose(logic_, s));
    return Interpolant{t->result, t};
  }

 private:
  struct SeqLess {
    bool operator()(const AnySequent& x, const AnySequent& y) const {
      if (x.index() != y.index()) return x.index() < y.index();
      auto parts = [](const AnySequent& s) {
        if (auto* p = std::get_if<Sequent>(&s)) {
          return std::tuple(FormulaMultiset{}, p->antecedent, p->succedent);
        }
        const auto& t = std::get<TSequent>(s);
        return std::tuple(t.store, t.antecedent, t.succedent);
      };
      auto a = parts(x), b = parts(y);
      auto cmp = [](const FormulaMultiset& m, const FormulaMultiset& n) {
        const auto& u = m.entries();
        const auto& v = n.entries();
        for (std::size_t i = 0; i < u.size() && i < v.size(); ++i) {
          if (u[i].formula != v[i].formula) return u[i].formula < v[i].formula ? -1 : 1;
          if (u[i].count != v[i].count) return u[i].count < v[i].count ? -1 : 1;
        }
        return u.size() == v.size() ? 0 : (u.size() < v.size() ? -1 : 1);
      };
      if (int c = cmp(std::get<0>(a), std::get<0>(b))) return c < 0;
      if (int c = cmp(std::get<1>(a), std::get<1>(b))) return c < 0;
      return cmp(std::get<2>(a), std::get<2>(b)) < 0;
    }
  };

  static TracePtr node(std::string line, AnySequent s, Formula f, std::vector<TracePtr> kids = {}) {
    return std::make_shared<const TraceNode>(
        TraceNode{std::move(line), std::move(s), std::move(f), std::move(kids)});
  }

  // Lines 1-8 (both tables): the first decomposable occurrence, antecedent
  // before succedent, each side in canonical order.
  std::optional<TracePtr> propositional(const AnySequent& s) {
    const auto c = detail::Parts::of(s);
    for (Side side : {Side::Antecedent, Side::Succedent}) {
      const auto& m = side == Side::Antecedent ? c.ante : c.succ;
      for (const auto& e : m.entries()) {
        if (!detail::decomposable(e.formula)) continue;
        auto [rule, premises] = detail::logical_premises(c, side, e.formula);
        std::vector<TracePtr> kids;
        for (const auto& p : premises) kids.push_back(compute(p));
        Formula f = kids.size() == 1 ? kids[0]->result
                                     : Formula::conj(kids[0]->result, kids[1]->result);
        return node(detail::propositional_line(rule), s, f, std::move(kids));
      }
    }
    return std::nullopt;
  }

  bool shares_target_var(const FormulaMultiset& g, const FormulaMultiset& d) const {
    if (!target_.var) return false;
    Formula p = Formula::var(*target_.var);
    return g.contains(p) && d.contains(p);
  }

  // Atom disjuncts of X, in the table's listing order.
  void atom_disjuncts(const FormulaMultiset& phi, const FormulaMultiset& psi,
                      std::vector<Formula>& out) const {
    for (const auto& e : phi.entries()) {
      if (e.formula.is_var() && !target_.is_var(e.formula)) {
        for (std::size_t i = 0; i < e.count; ++i) out.push_back(Formula::neg(e.formula));
      }
    }
    for (const auto& e : psi.entries()) {
      if (e.formula.is_var() && !target_.is_var(e.formula)) {
        for (std::size_t i = 0; i < e.count; ++i) out.push_back(e.formula);
      }
    }
    for (const auto& e : phi.entries()) {
      if (e.formula.is_bottom()) {
        for (std::size_t i = 0; i < e.count; ++i) out.push_back(Formula::top());
      }
    }
    for (const auto& e : psi.entries()) {
      if (e.formula.is_bottom()) {
        for (std::size_t i = 0; i < e.count; ++i) out.push_back(Formula::bottom());
      }
    }
  }

  // Modal disjuncts of X. `boxes` are the antecedent boxes (the store for
  // T-sequents); `make` builds the recursive call's sequent.
  template <class Make>
  void modal_disjuncts(const FormulaMultiset& boxes, const FormulaMultiset& succ, Make make,
                       std::vector<Formula>& out, std::vector<TracePtr>& kids) {
    for (const auto& e : boxes.entries()) {
      if (!e.formula.is_boxed() || target_.is_agent_in(e.formula.group())) continue;
      Group g = e.formula.group();
      TracePtr t = compute(make(flat_subgroups(boxes, g), FormulaMultiset{}));
      for (std::size_t i = 0; i < e.count; ++i) {
        out.push_back(Formula::diamond(g, t->result));
        kids.push_back(t);
      }
    }
    for (const auto& e : succ.entries()) {
      if (!e.formula.is_boxed() || target_.is_agent_in(e.formula.group())) continue;
      Group h = e.formula.group();
      TracePtr t = compute(make(flat_subgroups(boxes, h), FormulaMultiset{e.formula.child()}));
      for (std::size_t i = 0; i < e.count; ++i) {
        out.push_back(Formula::dist(h, t->result));
        kids.push_back(t);
      }
    }
    for (const auto& e : succ.entries()) {
      if (!e.formula.is_boxed()) continue;
      Group h = e.formula.group();
      if (!target_.is_agent_in(h) || target_.is_agent_group(h)) continue;
      TracePtr t = compute(make(flat_subgroups(boxes, h), FormulaMultiset{e.formula.child()}));
      Group rest = *h.without(*target_.agent);
      for (std::size_t i = 0; i < e.count; ++i) {
        out.push_back(Formula::dist(rest, t->result));
        kids.push_back(t);
      }
    }
  }

  TracePtr step(const Sequent& s) {
    if (s.antecedent.empty() && s.succedent.empty()) return node("empty", s, Formula::bottom());
    if (auto t = propositional(s)) return *t;
    const auto& g = s.antecedent;
    const auto& d = s.succedent;

    if (shares_target_var(g, d)) return node("9", s, Formula::top());
    if (target_.agent) {
      Group a = Group::singleton(*target_.agent);
      FormulaMultiset body = flat(g, a);
      for (const auto& e : d.entries()) {
        if (e.formula.is_boxed() && e.formula.group() == a &&
            prover_.derivable(Sequent{body, {e.formula.child()}})) {
          return node("10", s, Formula::top());
        }
      }
      if (logic_ == Logic::KD_D && !body.empty() && prover_.derivable(Sequent{body, {}})) {
        return node("10'", s, Formula::top());
      }
    }

    std::vector<Formula> xs;
    std::vector<TracePtr> kids;
    atom_disjuncts(g, d, xs);
    modal_disjuncts(
        g, d, [](FormulaMultiset l, FormulaMultiset r) { return AnySequent(Sequent{l, r}); }, xs,
        kids);
    return node("11", s, detail::disjoin(xs), std::move(kids));
  }

  TracePtr step_T(const TSequent& s) {
    if (s.store.empty() && s.antecedent.empty() && s.succedent.empty()) {
      return node("empty", s, Formula::bottom());
    }
    if (auto t = propositional(s)) return *t;
    for (const auto& e : s.antecedent.entries()) {
      if (!e.formula.is_boxed()) continue;
      FormulaMultiset store = s.store, g = s.antecedent;
      store.insert(e.formula);
      g.erase_one(e.formula);
      g.insert(e.formula.child());
      TracePtr t = compute(TSequent(std::move(store), std::move(g), s.succedent));
      return node("9", s, t->result, {t});
    }
    const auto& d = s.succedent;

    if (shares_target_var(s.antecedent, d)) return node("10", s, Formula::top());
    if (target_.agent) {
      Group a = Group::singleton(*target_.agent);
      FormulaMultiset body = flat(s.store, a);
      for (const auto& e : d.entries()) {
        if (e.formula.is_boxed() && e.formula.group() == a &&
            prover_.derivable(TSequent({}, body, {e.formula.child()}))) {
          return node("11", s, Formula::top());
        }
      }
    }

    std::vector<Formula> xs;
    std::vector<TracePtr> kids;
    atom_disjuncts(s.antecedent, d, xs);
    modal_disjuncts(
        s.store, d,
        [](FormulaMultiset l, FormulaMultiset r) { return AnySequent(TSequent({}, l, r)); }, xs,
        kids);
    return node("12", s, detail::disjoin(xs), std::move(kids));
  }

  Logic logic_;
  ElimTarget target_;
  MemoTable memo_;
  Prover prover_;
  std::map<AnySequent, TracePtr, SeqLess> cache_;
};

inline Interpolant a_formula(Logic logic, const ElimTarget& t, const Sequent& s,
                             const ProverOptions& options = {}) {
  if (logic == Logic::KTplus_D) throw std::invalid_argument("a_formula takes K_D or KD_D");
  Interpolator in(logic, t, options);
  TracePtr r = in.compute(s);
  return {r->result, r};
}

inline Interpolant a_formula_T(const ElimTarget& t, const TSequent& s,
                               const ProverOptions& options = {}) {
  Interpolator in(Logic::KTplus_D, t, options);
  TracePtr r = in.compute(s);
  return {r->result, r};
}

// ℰ(β) = ¬A(∅;¬β)
inline Formula e_formula(Logic logic, const ElimTarget& t, const Formula& beta,
                         const ProverOptions& options = {}) {
  Interpolator in(logic, t, options);
  return Formula::neg(in.interpolate(Sequent{{}, {Formula::neg(beta)}}).formula);
}

// Elimination pairs for pre/post interpolants, outermost first. The shorter
// list is padded by repeating its last element.
inline std::vector<ElimTarget> elimination_schedule(const std::vector<std::string>& vars,
                                                    const std::vector<AgentId>& agents) {
  if (vars.empty() && agents.empty()) throw std::invalid_argument("nothing to eliminate");
  std::size_t n = std::max(vars.size(), agents.size());
  std::vector<ElimTarget> out;
  for (std::size_t i = 0; i < n; ++i) {
    ElimTarget t;
    if (!vars.empty()) t.var = vars[std::min(i, vars.size() - 1)];
    if (!agents.empty()) t.agent = agents[std::min(i, agents.size() - 1)];
    out.push_back(std::move(t));
  }
  return out;
}

inline Formula pre_interpolant(Logic logic, const Formula& alpha,
                               const std::vector<std::string>& vars,
                               const std::vector<AgentId>& agents,
                               const ProverOptions& options = {}) {
  auto schedule = elimination_schedule(vars, agents);
  Formula f = alpha;
  for (std::size_t i = schedule.size(); i-- > 0;) {
    Interpolator in(logic, schedule[i], options);
    f = in.interpolate(Sequent{{}, {f}}).formula;
  }
  return f;
}

inline Formula post_interpolant(Logic logic, const Formula& alpha,
                                const std::vector<std::string>& vars,
                                const std::vector<AgentId>& agents,
                                const ProverOptions& options = {}) {
  auto schedule = elimination_schedule(vars, agents);
  Formula f = alpha;
  for (std::size_t i = schedule.size(); i-- > 0;) f = e_formula(logic, schedule[i], f, options);
  return f;
}

// ---------------------------------------------------------------------------
// Verification of the interpolant conditions

struct SideTest {
  FormulaMultiset pi;
  FormulaMultiset lambda;
};

struct SideTestResult {
  bool premise_derivable = false;  // Π,Γ ⇒ Δ,Λ
  bool conclusion_derivable = false;  // Π ⇒ A,Λ; only computed when the premise holds
  bool ok() const { return !premise_derivable || conclusion_derivable; }
};

struct InterpolantReport {
  bool vocabulary = false;  // (i)
  bool entailment = false;  // (ii)
  std::vector<SideTestResult> side_tests;  // (iii)

  bool uniformity() const {
    for (const auto& r : side_tests) {
      if (!r.ok()) return false;
    }
    return true;
  }
  bool ok() const { return vocabulary && entailment && uniformity(); }
};

inline bool avoids_target(const Vocabulary& v, const ElimTarget& t) {
  if (t.var && v.vars.count(*t.var)) return false;
  if (t.agent && v.has_agent(*t.agent)) return false;
  return true;
}

inline InterpolantReport verify_interpolant(Logic logic, const ElimTarget& t, const Sequent& s,
                                            const Formula& a,
                                            const std::vector<SideTest>& side_tests = {},
                                            const ProverOptions& options = {}) {
  for (const auto& st : side_tests) {
    Vocabulary v = vocab(st.pi);
    v.merge(vocab(st.lambda));
    if (!avoids_target(v, t)) {
      throw std::invalid_argument("side test mentions the eliminated variable or agent");
    }
  }
  InterpolantReport r;
  Vocabulary input = vocab(s.antecedent);
  input.merge(vocab(s.succedent));
  Vocabulary out = vocab(a);
  r.vocabulary = avoids_target(out, t) && (out.agents & ~input.agents) == 0;
  for (const auto& v : out.vars) {
    if (!input.vars.count(v)) r.vocabulary = false;
  }

  MemoTable memo;
  auto holds = [&](const Sequent& q) { return derivable(logic, q, &memo, options); };
  Sequent with_a = s;
  with_a.antecedent.insert(a);
  r.entailment = holds(with_a);
  for (const auto& st : side_tests) {
    SideTestResult sr;
    sr.premise_derivable = holds(Sequent{st.pi + s.antecedent, s.succedent + st.lambda});
    if (sr.premise_derivable) {
      FormulaMultiset rhs = st.lambda;
      rhs.insert(a);
      sr.conclusion_derivable = holds(Sequent{st.pi, rhs});
    }
    r.side_tests.push_back(sr);
  }
  return r;
}

// Every edge of an interpolation trace must descend in the logic's order.
inline void audit_trace(Logic logic, const TracePtr& root, DescentAudit& audit) {
  const MeasureKind kind = measure_for(logic);
  std::vector<const TraceNode*> stack{root.get()};
  std::set<const TraceNode*> seen;
  while (!stack.empty()) {
    const TraceNode* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for (const auto& k : n->children) {
      ++audit.edges_checked;
      if (!measure_lt(kind, k->sequent, n->sequent)) {
        ++audit.violations;
        if (audit.offending.size() < 8) audit.offending.emplace_back(n->sequent, k->sequent);
      }
      stack.push_back(k.get());
    }
  }
}

}  // namespace dkinterp
