// Formulas of the epistemic language with distributed knowledge.
//
//   f ::= p | false | ~f | f & f | f | f | f -> f | D{G} f
//
// `true` and `<D{G}>f` are not constructors; they abbreviate ~false and
// ~D{G}~f. Formulas are immutable shared trees, so copies are cheap and a
// formula may be referenced from many multisets at once.

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dkinterp/agents.hpp"

namespace dkinterp {

// Declaration order is the first key of the canonical formula order.
enum class Connective : std::uint8_t { Var, Bottom, Not, And, Or, Implies, Dist };

class Formula {
 public:
  static Formula var(std::string name) {
    return Formula(make(Connective::Var, std::move(name), 0, nullptr, nullptr));
  }
  static Formula bottom() {
    static const Formula f(make(Connective::Bottom, {}, 0, nullptr, nullptr));
    return f;
  }
  static Formula top() { return neg(bottom()); }
  static Formula neg(const Formula& f) {
    return Formula(make(Connective::Not, {}, 0, f.node_, nullptr));
  }
  static Formula conj(const Formula& a, const Formula& b) {
    return Formula(make(Connective::And, {}, 0, a.node_, b.node_));
  }
  static Formula disj(const Formula& a, const Formula& b) {
    return Formula(make(Connective::Or, {}, 0, a.node_, b.node_));
  }
  static Formula implies(const Formula& a, const Formula& b) {
    return Formula(make(Connective::Implies, {}, 0, a.node_, b.node_));
  }
  static Formula dist(Group g, const Formula& f) {
    return Formula(make(Connective::Dist, {}, g.bits(), f.node_, nullptr));
  }
  // <D{G}>f, i.e. ~D{G}~f.
  static Formula diamond(Group g, const Formula& f) { return neg(dist(g, neg(f))); }

  Connective op() const { return node_->op; }
  bool is_var() const { return node_->op == Connective::Var; }
  bool is_bottom() const { return node_->op == Connective::Bottom; }
  bool is_atomic() const { return is_var() || is_bottom(); }
  bool is_boxed() const { return node_->op == Connective::Dist; }
  bool is_binary() const {
    return node_->op == Connective::And || node_->op == Connective::Or ||
           node_->op == Connective::Implies;
  }

  // Variable name; empty for every other connective.
  const std::string& name() const { return node_->name; }
  // Only meaningful for Dist.
  Group group() const { return Group::from_bits(node_->group); }
  // Operand of Not / Dist, left operand of binary connectives.
  Formula child() const { return Formula(node_->left); }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }

  std::size_t weight() const { return node_->weight; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.node_ == b.node_ || (a.node_->hash == b.node_->hash && compare(a.node_, b.node_) == 0);
  }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    int c = compare(a.node_, b.node_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  struct Node {
    Connective op;
    std::string name;
    std::uint32_t group;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t weight;
    std::size_t hash;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static NodePtr make(Connective op, std::string name, std::uint32_t group, NodePtr l, NodePtr r) {
    std::size_t w = 1;
    std::size_t h = static_cast<std::size_t>(op) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    if (op == Connective::Var) mix(std::hash<std::string>{}(name));
    if (op == Connective::Dist) mix(group);
    if (l) {
      w += l->weight;
      mix(l->hash);
    }
    if (r) {
      w += r->weight;
      mix(r->hash);
    }
    return std::make_shared<const Node>(
        Node{op, std::move(name), group, std::move(l), std::move(r), w, h});
  }

  // Canonical structural order: connective, then operands left to right,
  // then (for Dist) the group's members lexicographically.
  static int compare(const NodePtr& a, const NodePtr& b) {
    if (a == b) return 0;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    switch (a->op) {
      case Connective::Var:
        return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
      case Connective::Bottom:
        return 0;
      case Connective::Not:
        return compare(a->left, b->left);
      case Connective::Dist: {
        int c = compare(a->left, b->left);
        if (c != 0) return c;
        auto g = Group::from_bits(a->group) <=> Group::from_bits(b->group);
        return g < 0 ? -1 : (g > 0 ? 1 : 0);
      }
      default: {
        int c = compare(a->left, b->left);
        return c != 0 ? c : compare(a->right, b->right);
      }
    }
  }

  NodePtr node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

using FormulaSet = std::set<Formula>;

inline std::size_t weight(const Formula& f) { return f.weight(); }

namespace detail {
inline void collect_subformulas(const Formula& f, FormulaSet& out) {
  if (!out.insert(f).second) return;
  switch (f.op()) {
    case Connective::Var:
    case Connective::Bottom:
      return;
    case Connective::Not:
    case Connective::Dist:
      collect_subformulas(f.child(), out);
      return;
    default:
      collect_subformulas(f.left(), out);
      collect_subformulas(f.right(), out);
  }
}
}  // namespace detail

inline FormulaSet subformulas(const Formula& f) {
  FormulaSet out;
  detail::collect_subformulas(f, out);
  return out;
}

template <class Range>
FormulaSet subformulas_of_all(const Range& formulas) {
  FormulaSet out;
  for (const Formula& f : formulas) detail::collect_subformulas(f, out);
  return out;
}

struct Vocabulary {
  std::set<std::string> vars;
  std::uint32_t agents = 0;  // bit set over agent ids

  bool has_agent(AgentId a) const { return (agents >> a) & 1u; }
  std::vector<AgentId> agent_list() const {
    std::vector<AgentId> out;
    for (std::uint32_t b = agents; b != 0; b &= b - 1) {
      out.push_back(static_cast<AgentId>(std::countr_zero(b)));
    }
    return out;
  }
  void merge(const Vocabulary& o) {
    vars.insert(o.vars.begin(), o.vars.end());
    agents |= o.agents;
  }
  bool operator==(const Vocabulary&) const = default;
};

namespace detail {
inline void collect_vocab(const Formula& f, Vocabulary& v) {
  switch (f.op()) {
    case Connective::Var:
      v.vars.insert(f.name());
      return;
    case Connective::Bottom:
      return;
    case Connective::Dist:
      v.agents |= f.group().bits();
      collect_vocab(f.child(), v);
      return;
    case Connective::Not:
      collect_vocab(f.child(), v);
      return;
    default:
      collect_vocab(f.left(), v);
      collect_vocab(f.right(), v);
  }
}
}  // namespace detail

inline Vocabulary vocab(const Formula& f) {
  Vocabulary v;
  detail::collect_vocab(f, v);
  return v;
}

}  // namespace dkinterp

template <>
struct std::hash<dkinterp::Formula> {
  std::size_t operator()(const dkinterp::Formula& f) const { return f.hash(); }
};
