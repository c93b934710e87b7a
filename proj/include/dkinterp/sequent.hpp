// Sequents Γ ⇒ Δ, T-sequents Σ | Γ ⇒ Δ, and the well-orders that make
// backward proof search terminate.

#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

#include "dkinterp/multiset.hpp"

namespace dkinterp {

struct Sequent {
  FormulaMultiset antecedent;
  FormulaMultiset succedent;

  std::size_t weight() const { return antecedent.weight() + succedent.weight(); }
  bool operator==(const Sequent&) const = default;
};

// The store holds boxed formulas that have already been unboxed once by
// the reflexivity rule.
struct TSequent {
  FormulaMultiset store;
  FormulaMultiset antecedent;
  FormulaMultiset succedent;

  TSequent() = default;
  TSequent(FormulaMultiset s, FormulaMultiset g, FormulaMultiset d)
      : store(std::move(s)), antecedent(std::move(g)), succedent(std::move(d)) {
    if (!store.all_of([](const Formula& f) { return f.is_boxed(); })) {
      throw std::invalid_argument("T-sequent store may hold only boxed formulas");
    }
  }
  // ∅ | Γ ⇒ Δ
  static TSequent embed(const Sequent& s) { return TSequent({}, s.antecedent, s.succedent); }

  std::size_t weight() const { return antecedent.weight() + succedent.weight(); }
  bool operator==(const TSequent&) const = default;
};

using AnySequent = std::variant<Sequent, TSequent>;

inline bool atomic_or_boxed(const Formula& f) { return f.is_atomic() || f.is_boxed(); }

inline bool is_critical(const Sequent& s) {
  return s.antecedent.all_of(atomic_or_boxed) && s.succedent.all_of(atomic_or_boxed);
}

inline bool is_critical_T(const TSequent& t) {
  return t.antecedent.all_of([](const Formula& f) { return f.is_atomic(); }) &&
         t.succedent.all_of(atomic_or_boxed);
}

// Number of distinct boxed subformulas across all given multisets. Counts
// boxes at any depth and ignores multiplicities.
template <class... Ms>
std::size_t boxed_count(const Ms&... ms) {
  FormulaSet subs;
  (
      [&] {
        for (const auto& e : ms.entries()) detail::collect_subformulas(e.formula, subs);
      }(),
      ...);
  std::size_t n = 0;
  for (const Formula& f : subs) n += f.is_boxed() ? 1 : 0;
  return n;
}

inline std::pair<std::size_t, std::size_t> lex_measure(const TSequent& t) {
  return {boxed_count(t.store, t.antecedent, t.succedent), t.weight()};
}

enum class MeasureKind { wt_order, lex_order };

inline bool measure_lt(MeasureKind kind, const AnySequent& x, const AnySequent& y) {
  if (kind == MeasureKind::wt_order) {
    auto* a = std::get_if<Sequent>(&x);
    auto* b = std::get_if<Sequent>(&y);
    if (!a || !b) throw std::invalid_argument("wt_order compares plain sequents");
    return a->weight() < b->weight();
  }
  auto* a = std::get_if<TSequent>(&x);
  auto* b = std::get_if<TSequent>(&y);
  if (!a || !b) throw std::invalid_argument("lex_order compares T-sequents");
  return lex_measure(*a) < lex_measure(*b);
}

}  // namespace dkinterp
