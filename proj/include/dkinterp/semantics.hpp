// Pseudo-model semantics, countermodel extraction and small-model search.
//
// A pseudo-model has one accessibility relation per group, subject only to
// anti-monotonicity: R_H ⊆ R_G whenever G ⊆ H.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dkinterp/prover.hpp"

namespace dkinterp {

enum class FrameClass { All, SerialSingletons, Reflexive };

inline FrameClass frame_class_for(Logic logic) {
  switch (logic) {
    case Logic::K_D: return FrameClass::All;
    case Logic::KD_D: return FrameClass::SerialSingletons;
    case Logic::KTplus_D: return FrameClass::Reflexive;
  }
  return FrameClass::All;
}

inline const char* frame_class_name(FrameClass c) {
  switch (c) {
    case FrameClass::All: return "All";
    case FrameClass::SerialSingletons: return "SerialSingletons";
    case FrameClass::Reflexive: return "Reflexive";
  }
  return "?";
}

inline constexpr std::size_t kMaxModelAgents = 10;

class PseudoModel {
 public:
  PseudoModel(std::size_t states, std::size_t agents) : states_(states), agents_(agents) {
    if (agents == 0 || agents > kMaxModelAgents) {
      throw std::invalid_argument("models support between 1 and 10 agents");
    }
    rel_.assign(std::size_t{1} << agents, std::vector<bool>(states * states, false));
  }

  std::size_t num_states() const { return states_; }
  std::size_t num_agents() const { return agents_; }
  Group full_group() const { return Group::from_bits((std::uint32_t{1} << agents_) - 1); }

  // Groups over the model's agents, in canonical order.
  std::vector<Group> groups() const {
    return AgentUniverse(std::vector<std::string>(placeholder_names())).all_groups();
  }

  void add_edge(Group g, std::size_t from, std::size_t to) {
    check_group(g);
    check_state(from);
    check_state(to);
    rel_[g.bits()][from * states_ + to] = true;
  }
  bool has_edge(Group g, std::size_t from, std::size_t to) const {
    check_group(g);
    check_state(from);
    check_state(to);
    return rel_[g.bits()][from * states_ + to];
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges(Group g) const {
    check_group(g);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < states_; ++i) {
      for (std::size_t j = 0; j < states_; ++j) {
        if (rel_[g.bits()][i * states_ + j]) out.emplace_back(i, j);
      }
    }
    return out;
  }

  // Declares a variable (false everywhere) if it is not yet known.
  void declare(const std::string& var) { val_.try_emplace(var, std::vector<bool>(states_, false)); }
  void set_true(const std::string& var, std::size_t state) {
    check_state(state);
    declare(var);
    val_[var][state] = true;
  }
  bool is_true(const std::string& var, std::size_t state) const {
    check_state(state);
    auto it = val_.find(var);
    if (it == val_.end()) throw std::invalid_argument("unknown variable '" + var + "'");
    return it->second[state];
  }
  const std::map<std::string, std::vector<bool>>& valuation() const { return val_; }

  bool anti_monotone() const {
    std::uint32_t n = std::uint32_t{1} << agents_;
    for (std::uint32_t g = 1; g < n; ++g) {
      for (std::uint32_t h = 1; h < n; ++h) {
        if ((g & ~h) != 0 || g == h) continue;  // need G ⊂ H
        for (std::size_t k = 0; k < states_ * states_; ++k) {
          if (rel_[h][k] && !rel_[g][k]) return false;
        }
      }
    }
    return true;
  }

  bool in_class(FrameClass c) const {
    if (!anti_monotone()) return false;
    if (c == FrameClass::SerialSingletons) {
      for (std::size_t a = 0; a < agents_; ++a) {
        const auto& r = rel_[std::uint32_t{1} << a];
        for (std::size_t i = 0; i < states_; ++i) {
          bool any = false;
          for (std::size_t j = 0; j < states_ && !any; ++j) any = r[i * states_ + j];
          if (!any) return false;
        }
      }
    }
    if (c == FrameClass::Reflexive) {
      for (std::uint32_t g = 1; g < rel_.size(); ++g) {
        for (std::size_t i = 0; i < states_; ++i) {
          if (!rel_[g][i * states_ + i]) return false;
        }
      }
    }
    return true;
  }

  // Truth set of f over all states.
  std::vector<bool> extension(const Formula& f) const {
    std::unordered_map<Formula, std::vector<bool>, FormulaHash> cache;
    return eval(f, cache);
  }

 private:
  std::vector<std::string> placeholder_names() const {
    std::vector<std::string> names;
    for (std::size_t a = 0; a < agents_; ++a) names.push_back("a" + std::to_string(a));
    return names;
  }
  void check_state(std::size_t s) const {
    if (s >= states_) throw std::out_of_range("unknown state " + std::to_string(s));
  }
  void check_group(Group g) const {
    if (!g.subset_of(full_group())) throw std::invalid_argument("group outside the model's agents");
  }

  const std::vector<bool>& eval(const Formula& f,
                                std::unordered_map<Formula, std::vector<bool>, FormulaHash>& cache) const {
    auto it = cache.find(f);
    if (it != cache.end()) return it->second;
    std::vector<bool> out(states_, false);
    switch (f.op()) {
      case Connective::Var: {
        auto v = val_.find(f.name());
        if (v == val_.end()) throw std::invalid_argument("unknown variable '" + f.name() + "'");
        out = v->second;
        break;
      }
      case Connective::Bottom:
        break;
      case Connective::Not: {
        const auto& a = eval(f.child(), cache);
        for (std::size_t i = 0; i < states_; ++i) out[i] = !a[i];
        break;
      }
      case Connective::And:
      case Connective::Or:
      case Connective::Implies: {
        std::vector<bool> a = eval(f.left(), cache);
        const auto& b = eval(f.right(), cache);
        for (std::size_t i = 0; i < states_; ++i) {
          out[i] = f.op() == Connective::And ? (a[i] && b[i])
                   : f.op() == Connective::Or ? (a[i] || b[i])
                                              : (!a[i] || b[i]);
        }
        break;
      }
      case Connective::Dist: {
        check_group(f.group());
        const auto& r = rel_[f.group().bits()];
        const auto& a = eval(f.child(), cache);
        for (std::size_t i = 0; i < states_; ++i) {
          bool all = true;
          for (std::size_t j = 0; j < states_ && all; ++j) all = !r[i * states_ + j] || a[j];
          out[i] = all;
        }
        break;
      }
    }
    return cache.emplace(f, std::move(out)).first->second;
  }

  std::size_t states_;
  std::size_t agents_;
  std::vector<std::vector<bool>> rel_;  // indexed by group bits, row-major adjacency
  std::map<std::string, std::vector<bool>> val_;
};

inline bool model_check(const PseudoModel& m, std::size_t w, const Formula& f) {
  if (w >= m.num_states()) throw std::out_of_range("unknown state " + std::to_string(w));
  return m.extension(f)[w];
}

inline bool falsified_at(const PseudoModel& m, std::size_t w, const Sequent& s) {
  for (const auto& e : s.antecedent.entries()) {
    if (!model_check(m, w, e.formula)) return false;
  }
  for (const auto& e : s.succedent.entries()) {
    if (model_check(m, w, e.formula)) return false;
  }
  return true;
}

inline bool sequent_valid(const PseudoModel& m, const Sequent& s) {
  for (std::size_t w = 0; w < m.num_states(); ++w) {
    if (falsified_at(m, w, s)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Saturation and Ω-models

struct SaturatedSequent {
  FormulaSet theta;
  FormulaSet pi;
  FormulaSet omega;
  bool operator==(const SaturatedSequent&) const = default;
};

namespace detail {
inline Sequent as_sequent(const FormulaSet& g, const FormulaSet& d) {
  return Sequent{FormulaMultiset::of(g), FormulaMultiset::of(d)};
}
}  // namespace detail

// Extends g ⇒ d to an Ω-saturated sequent, visiting Ω in canonical order.
inline SaturatedSequent saturate(Logic logic, const Sequent& s, const FormulaSet& omega,
                                 MemoTable* memo = nullptr, const ProverOptions& options = {}) {
  MemoTable local;
  MemoTable* m = memo ? memo : &local;
  auto holds = [&](const FormulaSet& g, const FormulaSet& d) {
    return derivable(logic, detail::as_sequent(g, d), m, options);
  };
  SaturatedSequent out{{}, {}, omega};
  for (const auto& e : s.antecedent.entries()) out.theta.insert(e.formula);
  for (const auto& e : s.succedent.entries()) out.pi.insert(e.formula);
  for (const Formula& f : out.theta) {
    if (!omega.count(f)) throw std::invalid_argument("sequent is not contained in omega");
  }
  for (const Formula& f : out.pi) {
    if (!omega.count(f)) throw std::invalid_argument("sequent is not contained in omega");
  }
  if (holds(out.theta, out.pi)) throw std::invalid_argument("cannot saturate a derivable sequent");
  for (const Formula& phi : omega) {
    if (out.theta.count(phi) || out.pi.count(phi)) continue;
    FormulaSet d = out.pi;
    d.insert(phi);
    if (!holds(out.theta, d)) {
      out.pi = std::move(d);
      continue;
    }
    FormulaSet g = out.theta;
    g.insert(phi);
    if (!holds(g, out.pi)) out.theta = std::move(g);
  }
  return out;
}

inline std::vector<std::string> omega_vars(const FormulaSet& omega) {
  std::vector<std::string> out;
  for (const Formula& f : omega) {
    if (f.is_var()) out.push_back(f.name());
  }
  return out;
}

struct Countermodel {
  PseudoModel model;
  std::size_t witness = 0;
  std::vector<SaturatedSequent> states;
};

namespace detail {
inline FormulaSet flat_subgroups_set(const FormulaSet& theta, Group g) {
  FormulaSet out;
  for (const Formula& f : theta) {
    if (f.is_boxed() && f.group().subset_of(g)) out.insert(f.child());
  }
  return out;
}

inline bool includes_set(const FormulaSet& big, const FormulaSet& small) {
  for (const Formula& f : small) {
    if (!big.count(f)) return false;
  }
  return true;
}
}  // namespace detail

// Builds a finite countermodel from saturated sequents: a root state for s,
// a witness successor for every boxed succedent formula, and for KD one
// successor per agent wherever no existing state serves as one. Edges join
// every pair of generated states that satisfies the inclusion condition.
inline Countermodel countermodel(Logic logic, const Sequent& s, const AgentUniverse& universe,
                                 const ProverOptions& options = {}) {
  if (universe.size() > kMaxModelAgents) {
    throw std::invalid_argument("countermodels support at most 10 agents");
  }
  Vocabulary v = vocab(s.antecedent);
  v.merge(vocab(s.succedent));
  if ((v.agents & ~universe.full().bits()) != 0) {
    throw std::invalid_argument("sequent mentions an agent outside the universe");
  }
  MemoTable memo;
  if (derivable(logic, s, &memo, options)) {
    throw std::invalid_argument("sequent is derivable; no countermodel exists");
  }
  FormulaSet omega = subformulas(s.antecedent + s.succedent);

  std::vector<SaturatedSequent> states;
  std::map<std::pair<FormulaSet, FormulaSet>, std::size_t> index;
  auto add = [&](const Sequent& seed) {
    SaturatedSequent st = saturate(logic, seed, omega, &memo, options);
    auto key = std::make_pair(st.theta, st.pi);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    states.push_back(std::move(st));
    index.emplace(std::move(key), states.size() - 1);
    return states.size() - 1;
  };
  auto edge_ok = [&](std::size_t i, std::size_t j, Group g) {
    return detail::includes_set(states[j].theta,
                                detail::flat_subgroups_set(states[i].theta, g));
  };

  add(s);
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<Formula> boxes;
    for (const Formula& f : states[i].pi) {
      if (f.is_boxed()) boxes.push_back(f);
    }
    for (const Formula& f : boxes) {
      FormulaSet body = detail::flat_subgroups_set(states[i].theta, f.group());
      add(Sequent{FormulaMultiset::of(body), {f.child()}});
    }
    if (logic == Logic::KD_D) {
      for (std::size_t a = 0; a < universe.size(); ++a) {
        Group g = Group::singleton(static_cast<AgentId>(a));
        bool served = false;
        for (std::size_t j = 0; j < states.size() && !served; ++j) served = edge_ok(i, j, g);
        if (served) continue;
        FormulaSet body = detail::flat_subgroups_set(states[i].theta, g);
        add(Sequent{FormulaMultiset::of(body), {}});
      }
    }
  }

  PseudoModel m(states.size(), universe.size());
  for (const std::string& var : omega_vars(omega)) m.declare(var);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const Formula& f : states[i].theta) {
      if (f.is_var()) m.set_true(f.name(), i);
    }
  }
  auto groups = universe.all_groups();
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      for (Group g : groups) {
        if (edge_ok(i, j, g)) m.add_edge(g, i, j);
      }
    }
  }

  Countermodel out{std::move(m), 0, std::move(states)};
  if (!out.model.in_class(frame_class_for(logic)) || !falsified_at(out.model, 0, s)) {
    throw std::logic_error("countermodel construction failed verification");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive small-model search

namespace detail {

// Down-closed sets of groups: the admissible edge labels of an anti-monotone
// family. Label bit i means the pair is in R of the group with bits (i+1).
inline std::vector<std::uint32_t> downset_labels(std::size_t agents) {
  std::uint32_t ngroups = (std::uint32_t{1} << agents) - 1;
  std::vector<std::uint32_t> out;
  for (std::uint64_t lab = 0; lab < (std::uint64_t{1} << ngroups); ++lab) {
    bool ok = true;
    for (std::uint32_t h = 1; h <= ngroups && ok; ++h) {
      if (!((lab >> (h - 1)) & 1)) continue;
      for (std::uint32_t g = 1; g <= ngroups && ok; ++g) {
        if ((g & ~h) == 0 && !((lab >> (g - 1)) & 1)) ok = false;
      }
    }
    if (ok) out.push_back(static_cast<std::uint32_t>(lab));
  }
  return out;
}

}  // namespace detail

class CombinatorialBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PointedModel {
  PseudoModel model;
  std::size_t state;
};

// Searches every pseudo-model of the logic's frame class with 1..max_states
// states over the universe's agents and the sequent's variables, and returns
// the first state falsifying s.
inline std::optional<PointedModel> enumerate_small_models(Logic logic, const Sequent& s,
                                                          const AgentUniverse& universe,
                                                          std::size_t max_states,
                                                          std::uint64_t max_models = 50'000'000) {
  if (universe.size() > 2) {
    throw CombinatorialBudgetExceeded("exhaustive model search supports at most 2 agents");
  }
  Vocabulary v = vocab(s.antecedent);
  v.merge(vocab(s.succedent));
  std::vector<std::string> vars(v.vars.begin(), v.vars.end());
  const auto labels = detail::downset_labels(universe.size());
  const auto groups = universe.all_groups();
  const FrameClass cls = frame_class_for(logic);

  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= max_states; ++n) {
    std::uint64_t fam = 1;
    for (std::size_t k = 0; k < n * n; ++k) fam *= labels.size();
    std::uint64_t vals = std::uint64_t{1} << (n * vars.size());
    total += fam * vals;
  }
  if (total > max_models) throw CombinatorialBudgetExceeded("too many small models to enumerate");

  for (std::size_t n = 1; n <= max_states; ++n) {
    std::vector<std::size_t> digit(n * n, 0);
    while (true) {
      PseudoModel m(n, universe.size());
      for (std::size_t k = 0; k < n * n; ++k) {
        for (Group g : groups) {
          if ((labels[digit[k]] >> (g.bits() - 1)) & 1) m.add_edge(g, k / n, k % n);
        }
      }
      if (m.in_class(cls)) {
        std::uint64_t vals = std::uint64_t{1} << (n * vars.size());
        for (std::uint64_t val = 0; val < vals; ++val) {
          PseudoModel mv = m;
          for (std::size_t x = 0; x < vars.size(); ++x) {
            mv.declare(vars[x]);
            for (std::size_t w = 0; w < n; ++w) {
              if ((val >> (x * n + w)) & 1) mv.set_true(vars[x], w);
            }
          }
          for (std::size_t w = 0; w < n; ++w) {
            if (falsified_at(mv, w, s)) return PointedModel{std::move(mv), w};
          }
        }
      }
      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == labels.size()) digit[k++] = 0;
      if (k == digit.size()) break;
    }
  }
  return std::nullopt;
}

}  // namespace dkinterp
