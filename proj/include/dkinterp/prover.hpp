// Terminating backward proof search over the enumerated moves.
//
// Search runs in two passes. The first decides derivability, memoizing on
// contraction-collapsed sequents. The second walks the sequent again and
// keeps, at every node, the first move whose premises are all derivable.

#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dkinterp/calculus.hpp"

namespace dkinterp {

inline constexpr std::size_t kDefaultBudget = 1'000'000;

// DKINTERP_BUDGET overrides the built-in default when set to a positive integer.
inline std::size_t default_budget() {
  if (const char* env = std::getenv("DKINTERP_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultBudget;
}

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::size_t budget)
      : std::runtime_error("node budget of " + std::to_string(budget) + " exceeded"),
        budget_(budget) {}
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

// Records every conclusion/premise pair the search expands and whether the
// premise lies strictly below the conclusion in the logic's order.
struct DescentAudit {
  std::size_t edges_checked = 0;
  std::size_t violations = 0;
  std::vector<std::pair<AnySequent, AnySequent>> offending;  // first few only
};

struct ProverOptions {
  std::size_t budget = default_budget();
  bool use_memo = true;
  DescentAudit* audit = nullptr;
};

struct SearchStats {
  std::size_t nodes_expanded = 0;
  std::size_t memo_hits = 0;
};

namespace detail {

inline std::size_t hash_multiset(const FormulaMultiset& m, std::size_t seed) {
  for (const auto& e : m.entries()) {
    seed ^= e.formula.hash() + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
    seed ^= e.count + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
  }
  return seed;
}

inline AnySequent collapse(const AnySequent& s) {
  if (auto* p = std::get_if<Sequent>(&s)) {
    return Sequent{p->antecedent.collapsed(), p->succedent.collapsed()};
  }
  const auto& t = std::get<TSequent>(s);
  return TSequent(t.store.collapsed(), t.antecedent.collapsed(), t.succedent.collapsed());
}

}  // namespace detail

inline std::size_t hash_sequent(const AnySequent& s) {
  if (auto* p = std::get_if<Sequent>(&s)) {
    return detail::hash_multiset(p->succedent, detail::hash_multiset(p->antecedent, 1));
  }
  const auto& t = std::get<TSequent>(s);
  return detail::hash_multiset(
      t.succedent, detail::hash_multiset(t.antecedent, detail::hash_multiset(t.store, 2)));
}

// Completed search results keyed by logic and the set underlying a sequent.
class MemoTable {
 public:
  std::optional<bool> lookup(Logic logic, const AnySequent& s) const {
    auto it = map_.find(Key{logic, detail::collapse(s)});
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void store(Logic logic, const AnySequent& s, bool derivable) {
    map_[Key{logic, detail::collapse(s)}] = derivable;
  }
  std::size_t size() const { return map_.size(); }
  void clear() { map_.clear(); }

 private:
  struct Key {
    Logic logic;
    AnySequent seq;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return hash_sequent(k.seq) * 31 + static_cast<std::size_t>(k.logic);
    }
  };
  std::unordered_map<Key, bool, KeyHash> map_;
};

struct Derivable {
  ProofTree proof;
};

struct NotDerivable {
  // Critical sequents at which the exhausted search got stuck.
  std::vector<AnySequent> failure;
};

using Verdict = std::variant<Derivable, NotDerivable>;

inline bool is_derivable(const Verdict& v) { return std::holds_alternative<Derivable>(v); }

class Prover {
 public:
  Prover(Logic logic, ProverOptions options = {}, MemoTable* memo = nullptr)
      : logic_(logic), options_(options), memo_(memo ? memo : &own_memo_) {}

  Logic logic() const { return logic_; }
  const SearchStats& stats() const { return stats_; }

  bool derivable(const AnySequent& s) {
    if (!shape_matches(logic_, s)) {
      throw std::invalid_argument(std::string("sequent shape does not match logic ") +
                                  logic_name(logic_));
    }
    return decide(s);
  }

  Verdict prove(const AnySequent& s) {
    if (derivable(s)) return Derivable{extract(s)};
    NotDerivable nd;
    std::set<std::size_t> seen;
    trace(s, nd.failure, seen);
    if (nd.failure.empty()) nd.failure.push_back(s);
    return nd;
  }

 private:
  static constexpr std::size_t kMaxTrace = 64;
  static constexpr std::size_t kMaxOffending = 8;

  bool decide(const AnySequent& s) {
    if (options_.use_memo) {
      if (auto hit = memo_->lookup(logic_, s)) {
        ++stats_.memo_hits;
        return *hit;
      }
    }
    if (++stats_.nodes_expanded > options_.budget) throw BudgetExceeded(options_.budget);
    const auto moves = enumerate_backward_moves(logic_, s);
    if (options_.audit) audit(s, moves);
    bool result = false;
    for (const Move& m : moves) {
      bool all = true;
      for (const AnySequent& p : m.premises) {
        if (!decide(p)) {
          all = false;
          break;
        }
      }
      if (all) {
        result = true;
        break;
      }
    }
    if (options_.use_memo) memo_->store(logic_, s, result);
    return result;
  }

  void audit(const AnySequent& s, const std::vector<Move>& moves) {
    const MeasureKind kind = measure_for(logic_);
    for (const Move& m : moves) {
      for (const AnySequent& p : m.premises) {
        ++options_.audit->edges_checked;
        if (!measure_lt(kind, p, s)) {
          ++options_.audit->violations;
          if (options_.audit->offending.size() < kMaxOffending) {
            options_.audit->offending.emplace_back(s, p);
          }
        }
      }
    }
  }

  ProofTree extract(const AnySequent& s) {
    for (const Move& m : enumerate_backward_moves(logic_, s)) {
      bool all = true;
      for (const AnySequent& p : m.premises) {
        if (!decide(p)) {
          all = false;
          break;
        }
      }
      if (!all) continue;
      std::vector<ProofTree> kids;
      kids.reserve(m.premises.size());
      for (const AnySequent& p : m.premises) kids.push_back(extract(p));
      return instantiate(s, m, std::move(kids));
    }
    throw std::logic_error("derivable sequent without a derivable move");
  }

  static bool critical(const AnySequent& s) {
    if (auto* p = std::get_if<Sequent>(&s)) return is_critical(*p);
    return is_critical_T(std::get<TSequent>(s));
  }

  // Follows one failing premise of every move down to the stuck leaves.
  void trace(const AnySequent& s, std::vector<AnySequent>& out, std::set<std::size_t>& seen) {
    if (out.size() >= kMaxTrace) return;
    if (!seen.insert(hash_sequent(detail::collapse(s))).second) return;
    const auto moves = enumerate_backward_moves(logic_, s);
    if (critical(s)) out.push_back(s);
    for (const Move& m : moves) {
      for (const AnySequent& p : m.premises) {
        if (!decide(p)) {
          trace(p, out, seen);
          break;
        }
      }
    }
  }

  Logic logic_;
  ProverOptions options_;
  MemoTable own_memo_;
  MemoTable* memo_;
  SearchStats stats_;
};

inline Verdict prove(Logic logic, const AnySequent& s, MemoTable& memo,
                     const ProverOptions& options = {}) {
  return Prover(logic, options, &memo).prove(s);
}

inline Verdict prove(Logic logic, const AnySequent& s, const ProverOptions& options = {}) {
  return Prover(logic, options).prove(s);
}

// User-level query: KT sequents are embedded as ∅ | Γ ⇒ Δ.
inline AnySequent pose(Logic logic, const Sequent& s) {
  if (logic == Logic::KTplus_D) return TSequent::embed(s);
  return s;
}

inline bool derivable(Logic logic, const Sequent& s, MemoTable* memo = nullptr,
                      const ProverOptions& options = {}) {
  return Prover(logic, options, memo).derivable(pose(logic, s));
}

}  // namespace dkinterp
