// Finite multisets of formulas, kept sorted in canonical formula order.

#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <variant>
#include <vector>

#include "dkinterp/formula.hpp"

namespace dkinterp {

class FormulaMultiset {
 public:
  struct Entry {
    Formula formula;
    std::size_t count;
    bool operator==(const Entry&) const = default;
  };

  FormulaMultiset() = default;
  FormulaMultiset(std::initializer_list<Formula> fs) {
    for (const Formula& f : fs) insert(f);
  }
  template <class Range>
  static FormulaMultiset of(const Range& formulas) {
    FormulaMultiset m;
    for (const Formula& f : formulas) m.insert(f);
    return m;
  }

  void insert(const Formula& f, std::size_t n = 1) {
    if (n == 0) return;
    auto it = lower(f);
    if (it != entries_.end() && it->formula == f) {
      it->count += n;
    } else {
      entries_.insert(it, Entry{f, n});
    }
  }

  void insert_all(const FormulaMultiset& other) {
    for (const Entry& e : other.entries_) insert(e.formula, e.count);
  }

  // Removes one occurrence; false if absent.
  bool erase_one(const Formula& f) {
    auto it = lower(f);
    if (it == entries_.end() || !(it->formula == f)) return false;
    if (--it->count == 0) entries_.erase(it);
    return true;
  }

  std::size_t count(const Formula& f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f,
                               [](const Entry& e, const Formula& x) { return e.formula < x; });
    return (it != entries_.end() && it->formula == f) ? it->count : 0;
  }
  bool contains(const Formula& f) const { return count(f) > 0; }

  bool empty() const { return entries_.empty(); }
  // Total number of occurrences.
  std::size_t size() const {
    std::size_t n = 0;
    for (const Entry& e : entries_) n += e.count;
    return n;
  }
  std::size_t distinct() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  // Every occurrence, in canonical order.
  std::vector<Formula> elements() const {
    std::vector<Formula> out;
    for (const Entry& e : entries_) out.insert(out.end(), e.count, e.formula);
    return out;
  }

  std::size_t weight() const {
    std::size_t w = 0;
    for (const Entry& e : entries_) w += e.count * e.formula.weight();
    return w;
  }

  // Sub-multiset test respecting multiplicities.
  bool includes(const FormulaMultiset& sub) const {
    for (const Entry& e : sub.entries_) {
      if (count(e.formula) < e.count) return false;
    }
    return true;
  }

  // Multiset difference; the caller guarantees includes(sub).
  FormulaMultiset minus(const FormulaMultiset& sub) const {
    FormulaMultiset out = *this;
    for (const Entry& e : sub.entries_) {
      for (std::size_t i = 0; i < e.count; ++i) out.erase_one(e.formula);
    }
    return out;
  }

  FormulaMultiset collapsed() const {
    FormulaMultiset out = *this;
    for (Entry& e : out.entries_) e.count = 1;
    return out;
  }

  friend FormulaMultiset operator+(FormulaMultiset a, const FormulaMultiset& b) {
    a.insert_all(b);
    return a;
  }

  bool operator==(const FormulaMultiset&) const = default;

  template <class Pred>
  bool all_of(Pred pred) const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return pred(e.formula); });
  }

 private:
  std::vector<Entry>::iterator lower(const Formula& f) {
    return std::lower_bound(entries_.begin(), entries_.end(), f,
                            [](const Entry& e, const Formula& x) { return e.formula < x; });
  }

  std::vector<Entry> entries_;
};

inline Vocabulary vocab(const FormulaMultiset& m) {
  Vocabulary v;
  for (const auto& e : m.entries()) v.merge(vocab(e.formula));
  return v;
}

inline FormulaSet subformulas(const FormulaMultiset& m) {
  FormulaSet out;
  for (const auto& e : m.entries()) detail::collect_subformulas(e.formula, out);
  return out;
}

// Projections of a multiset onto its boxed members. Multiplicities of the
// selected entries are preserved.
enum class Projection {
  box,                     // D_G Γ = { D_G α | α ∈ Γ }
  natural,                 // { D_G α ∈ Γ }
  flat,                    // { α | D_G α ∈ Γ }
  natural_contains_agent,  // { D_H α ∈ Γ | a ∈ H }
  flat_subgroups,          // { α | D_H α ∈ Γ, H ⊆ G }
};

inline FormulaMultiset box_all(const FormulaMultiset& m, Group g) {
  FormulaMultiset out;
  for (const auto& e : m.entries()) out.insert(Formula::dist(g, e.formula), e.count);
  return out;
}

inline FormulaMultiset natural(const FormulaMultiset& m, Group g) {
  FormulaMultiset out;
  for (const auto& e : m.entries()) {
    if (e.formula.is_boxed() && e.formula.group() == g) out.insert(e.formula, e.count);
  }
  return out;
}

inline FormulaMultiset flat(const FormulaMultiset& m, Group g) {
  FormulaMultiset out;
  for (const auto& e : m.entries()) {
    if (e.formula.is_boxed() && e.formula.group() == g) out.insert(e.formula.child(), e.count);
  }
  return out;
}

inline FormulaMultiset natural_contains_agent(const FormulaMultiset& m, AgentId a) {
  FormulaMultiset out;
  for (const auto& e : m.entries()) {
    if (e.formula.is_boxed() && e.formula.group().contains(a)) out.insert(e.formula, e.count);
  }
  return out;
}

inline FormulaMultiset natural_subgroups(const FormulaMultiset& m, Group g) {
  FormulaMultiset out;
  for (const auto& e : m.entries()) {
    if (e.formula.is_boxed() && e.formula.group().subset_of(g)) out.insert(e.formula, e.count);
  }
  return out;
}

inline FormulaMultiset flat_subgroups(const FormulaMultiset& m, Group g) {
  FormulaMultiset out;
  for (const auto& e : m.entries()) {
    if (e.formula.is_boxed() && e.formula.group().subset_of(g)) {
      out.insert(e.formula.child(), e.count);
    }
  }
  return out;
}

inline FormulaMultiset project(const FormulaMultiset& m, Projection sel,
                               std::variant<Group, AgentId> arg) {
  auto group_arg = [&] {
    if (auto* g = std::get_if<Group>(&arg)) return *g;
    return Group::singleton(std::get<AgentId>(arg));
  };
  switch (sel) {
    case Projection::box:
      return box_all(m, group_arg());
    case Projection::natural:
      return natural(m, group_arg());
    case Projection::flat:
      return flat(m, group_arg());
    case Projection::natural_contains_agent: {
      if (auto* a = std::get_if<AgentId>(&arg)) return natural_contains_agent(m, *a);
      auto members = std::get<Group>(arg).members();
      if (members.size() != 1) throw std::invalid_argument("natural_contains_agent takes one agent");
      return natural_contains_agent(m, members.front());
    }
    case Projection::flat_subgroups:
      return flat_subgroups(m, group_arg());
  }
  return {};
}

}  // namespace dkinterp
