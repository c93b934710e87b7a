// Property suites over seeded random and exhaustive corpora. Each suite
// returns counts and the first few failures; the JSON report carries no
// timings, so a fixed seed fixes the report byte for byte.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dkinterp/corpus.hpp"
#include "dkinterp/interpolation.hpp"
#include "dkinterp/io.hpp"
#include "dkinterp/oracle.hpp"
#include "dkinterp/prover.hpp"
#include "dkinterp/semantics.hpp"
#include "dkinterp/syntax.hpp"

namespace dkinterp {

struct RandomCorpusSpec {
  std::size_t count = 100;  // instances per random suite; (i)/(ii) probes use twice as many
  std::size_t max_weight = 12;
  std::size_t var_pool = 3;
  std::uint64_t seed = 1;
};

struct SelftestConfig {
  RandomCorpusSpec corpus;
  std::size_t agents = 3;         // random suites
  std::size_t axiom_count = 50;   // per axiom schema
  std::size_t oracle_weight = 6;  // exhaustive corpus, capped by corpus.max_weight
  ProverOptions options{};
};

struct SuiteResult {
  SuiteResult(std::string n, std::string l) : name(std::move(n)), logic(std::move(l)) {}

  std::string name;
  std::string logic;
  std::size_t instances = 0;
  std::size_t required = 0;
  std::size_t passed = 0;
  std::vector<std::string> failures;  // first few
  json extra = json::object();

  bool ok() const { return instances >= required && passed == instances; }
  void fail(std::string what) {
    if (failures.size() < 5) failures.push_back(std::move(what));
  }
};

// Proof and descent bookkeeping shared by every suite of one run.
struct RunLedger {
  DescentAudit audit;
  std::size_t proofs_checked = 0;
  std::size_t proofs_accepted = 0;

  bool check(Logic logic, const ProofTree& t) {
    ++proofs_checked;
    bool ok = check_proof(logic, t).ok;
    proofs_accepted += ok;
    return ok;
  }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xc2b2ae3d27d4eb4full);
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  return x;
}

inline AgentUniverse letters(std::size_t n) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  if (n == 0 || n > 8) throw std::invalid_argument("between 1 and 8 agents");
  return AgentUniverse(std::vector<std::string>(names, names + n));
}

inline std::vector<std::string> var_names(std::size_t n) {
  static const char* names[] = {"p", "q", "r", "s", "t", "u", "v", "w"};
  if (n == 0 || n > 8) throw std::invalid_argument("between 1 and 8 variables");
  return std::vector<std::string>(names, names + n);
}

inline Alphabet alphabet(std::size_t vars, const AgentUniverse& u) {
  return Alphabet{var_names(vars), u.all_groups()};
}

// The alphabet with the target removed.
inline Alphabet restrict_alphabet(const Alphabet& a, const ElimTarget& t) {
  Alphabet out;
  for (const auto& v : a.vars) {
    if (!t.var || v != *t.var) out.vars.push_back(v);
  }
  for (Group g : a.groups) {
    if (!t.is_agent_in(g)) out.groups.push_back(g);
  }
  return out;
}

inline const std::vector<Logic> kAllLogics{Logic::K_D, Logic::KD_D, Logic::KTplus_D};

inline Formula interpolant_of(Logic logic, const ElimTarget& t, const Sequent& s,
                              const ProverOptions& options, RunLedger& ledger) {
  Interpolator in(logic, t, options);
  Interpolant a = in.interpolate(s);
  audit_trace(logic, a.trace, ledger.audit);
  return a.formula;
}

inline ProverOptions audited(ProverOptions o, RunLedger& ledger) {
  o.audit = &ledger.audit;
  return o;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Axiom instances

inline std::vector<SuiteResult> axiom_suites(const SelftestConfig& cfg, RunLedger& ledger) {
  struct Schema {
    const char* name;
    Logic logic;
    std::function<Formula(Rng&, const Alphabet&, const AgentUniverse&)> make;
  };
  auto body = [&](Rng& rng, const Alphabet& al) {
    return random_formula(rng, al, rng.between(1, std::max<std::size_t>(1, cfg.corpus.max_weight / 3)));
  };
  std::vector<Schema> schemas{
      {"axiom_DK", Logic::K_D,
       [&](Rng& rng, const Alphabet& al, const AgentUniverse&) {
         Group g = rng.pick(al.groups);
         Formula a = body(rng, al), b = body(rng, al);
         return Formula::implies(Formula::dist(g, Formula::implies(a, b)),
                                 Formula::implies(Formula::dist(g, a), Formula::dist(g, b)));
       }},
      {"axiom_Incl", Logic::K_D,
       [&](Rng& rng, const Alphabet& al, const AgentUniverse& u) {
         Group g = rng.pick(al.groups);
         std::uint32_t extra = static_cast<std::uint32_t>(rng.below(u.full().bits() + 1));
         Group h = Group::from_bits((g.bits() | extra) & u.full().bits());
         Formula a = body(rng, al);
         return Formula::implies(Formula::dist(g, a), Formula::dist(h, a));
       }},
      {"axiom_DD", Logic::KD_D,
       [&](Rng& rng, const Alphabet&, const AgentUniverse& u) {
         AgentId a = static_cast<AgentId>(rng.below(u.size()));
         return Formula::neg(Formula::dist(Group::singleton(a), Formula::bottom()));
       }},
      {"axiom_DT", Logic::KTplus_D,
       [&](Rng& rng, const Alphabet& al, const AgentUniverse&) {
         Formula a = body(rng, al);
         return Formula::implies(Formula::dist(rng.pick(al.groups), a), a);
       }},
  };
  std::vector<SuiteResult> out;
  for (std::size_t k = 0; k < schemas.size(); ++k) {
    const Schema& sc = schemas[k];
    SuiteResult r{sc.name, logic_name(sc.logic)};
    r.required = cfg.corpus.max_weight == 0 ? 0 : cfg.axiom_count;
    Rng rng(detail::mix_seed(cfg.corpus.seed, 1, k));
    for (std::size_t i = 0; i < r.required; ++i) {
      // Instances range over universes of one to cfg.agents agents.
      AgentUniverse u = detail::letters(rng.between(1, cfg.agents));
      Alphabet al = detail::alphabet(cfg.corpus.var_pool, u);
      Formula f = sc.make(rng, al, u);
      Sequent s{{}, FormulaMultiset::of(std::vector<Formula>{f})};
      ++r.instances;
      Verdict v = prove(sc.logic, pose(sc.logic, s), detail::audited(cfg.options, ledger));
      auto* d = std::get_if<Derivable>(&v);
      if (d && ledger.check(sc.logic, d->proof)) {
        ++r.passed;
      } else {
        r.fail(format_formula(f, u));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural admissibility probes

// Draws until pred accepts or the attempt cap is hit.
template <class Draw, class Pred>
auto draw_until(Rng& rng, std::size_t cap, Draw draw, Pred pred) -> std::optional<decltype(draw(rng))> {
  for (std::size_t i = 0; i < cap; ++i) {
    auto x = draw(rng);
    if (pred(x)) return x;
  }
  return std::nullopt;
}

inline std::vector<SuiteResult> structural_suites(const SelftestConfig& cfg, RunLedger& ledger) {
  std::vector<SuiteResult> out;
  const AgentUniverse u = detail::letters(cfg.agents);
  const Alphabet al = detail::alphabet(cfg.corpus.var_pool, u);
  const std::size_t n = cfg.corpus.max_weight == 0 ? 0 : cfg.corpus.count;
  const std::size_t cap = 400;
  const std::size_t w = cfg.corpus.max_weight;
  for (std::size_t li = 0; li < detail::kAllLogics.size(); ++li) {
    const Logic logic = detail::kAllLogics[li];
    const ProverOptions opts = detail::audited(cfg.options, ledger);
    // Contraction is checked without memoization, whose keys already
    // identify multisets up to contraction.
    ProverOptions raw = opts;
    raw.use_memo = false;
    MemoTable memo;
    auto holds = [&](const Sequent& s) { return derivable(logic, s, &memo, opts); };
    auto holds_raw = [&](const Sequent& s) { return derivable(logic, s, nullptr, raw); };
    auto text = [&](const Sequent& s) { return format_sequent(s, u); };

    SuiteResult weak{"weakening", logic_name(logic)}, contr{"contraction", logic_name(logic)},
        cut{"cut", logic_name(logic)};
    weak.required = contr.required = cut.required = n;
    Rng rng(detail::mix_seed(cfg.corpus.seed, 2, li));
    for (std::size_t i = 0; i < n; ++i) {
      // Weakening: a derivable sequent stays derivable with one more formula.
      auto s = draw_until(rng, cap, [&](Rng& g) { return random_sequent(g, al, w); }, holds);
      if (s) {
        ++weak.instances;
        Formula phi = random_formula(rng, al, rng.between(1, std::max<std::size_t>(1, w / 3)));
        Sequent t = *s;
        (rng.chance(1, 2) ? t.antecedent : t.succedent).insert(phi);
        if (holds(t)) {
          ++weak.passed;
        } else {
          weak.fail(text(*s) + " / " + text(t));
        }
      }

      // Contraction: duplicating a member changes nothing.
      auto d = draw_until(
          rng, cap,
          [&](Rng& g) {
            Sequent x = random_sequent(g, al, std::max<std::size_t>(1, 2 * w / 3));
            bool left = !x.antecedent.empty() && (x.succedent.empty() || g.chance(1, 2));
            auto elems = (left ? x.antecedent : x.succedent).elements();
            Sequent dup = x;
            (left ? dup.antecedent : dup.succedent).insert(g.pick(elems));
            return std::pair{x, dup};
          },
          [&](const auto& xd) { return holds_raw(xd.second); });
      if (d) {
        ++contr.instances;
        if (holds_raw(d->first)) {
          ++contr.passed;
        } else {
          contr.fail(text(d->second) + " / " + text(d->first));
        }
      }

      // Cut: Γ ⇒ Δ,φ and φ,Γ′ ⇒ Δ′ give Γ,Γ′ ⇒ Δ,Δ′. Half the draws share
      // one context; the cut formula is a context subformula half the time.
      struct CutCase {
        Sequent left, right;
        Formula phi;
      };
      auto c = draw_until(
          rng, cap,
          [&](Rng& g) {
            const std::size_t cw = std::max<std::size_t>(1, w / 2);
            Sequent x = random_sequent(g, al, cw);
            Sequent y = g.chance(1, 2) ? x : random_sequent(g, al, cw);
            Formula phi = random_formula(g, al, g.between(1, std::max<std::size_t>(1, w / 3)));
            FormulaSet sub = subformulas(x.antecedent + x.succedent + y.antecedent + y.succedent);
            if (!sub.empty() && g.chance(1, 2)) {
              std::vector<Formula> pool(sub.begin(), sub.end());
              phi = g.pick(pool);
            }
            return CutCase{x, y, phi};
          },
          [&](const CutCase& k) {
            Sequent l = k.left, r = k.right;
            l.succedent.insert(k.phi);
            r.antecedent.insert(k.phi);
            return holds(l) && holds(r);
          });
      if (c) {
        ++cut.instances;
        Sequent joined{c->left.antecedent + c->right.antecedent, c->left.succedent + c->right.succedent};
        if (holds(joined)) {
          ++cut.passed;
        } else {
          cut.fail(text(c->left) + " ; " + text(c->right) + " cut " + format_formula(c->phi, u));
        }
      }
    }
    out.push_back(std::move(weak));
    out.push_back(std::move(contr));
    out.push_back(std::move(cut));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interpolant conditions

inline std::vector<SuiteResult> interpolation_suites(const SelftestConfig& cfg, RunLedger& ledger) {
  std::vector<SuiteResult> out;
  const AgentUniverse u = detail::letters(cfg.agents);
  const Alphabet al = detail::alphabet(cfg.corpus.var_pool, u);
  const std::size_t w = cfg.corpus.max_weight;
  const std::size_t n_basic = w == 0 ? 0 : 2 * cfg.corpus.count;
  const std::size_t n_side = w == 0 ? 0 : cfg.corpus.count;
  const std::size_t cap = 400;

  auto target = [&](Rng& rng) {
    ElimTarget t;
    t.var = rng.pick(al.vars);
    t.agent = static_cast<AgentId>(rng.below(u.size()));
    return t;
  };
  auto describe = [&](const ElimTarget& t, const Sequent& s) {
    return format_sequent(s, u) + " elim (" + *t.var + "," + u.name(*t.agent) + ")";
  };

  for (std::size_t li = 0; li < detail::kAllLogics.size(); ++li) {
    const Logic logic = detail::kAllLogics[li];
    const ProverOptions opts = detail::audited(cfg.options, ledger);
    SuiteResult basic{"interpolant_vocabulary_entailment", logic_name(logic)};
    SuiteResult side{"interpolant_uniformity", logic_name(logic)};
    basic.required = n_basic;
    side.required = n_side;

    Rng rng(detail::mix_seed(cfg.corpus.seed, 3, li));
    std::size_t vocab_ok = 0, entail_ok = 0;
    for (std::size_t i = 0; i < n_basic; ++i) {
      Sequent s = random_sequent(rng, al, w);
      ElimTarget t = target(rng);
      Formula a = detail::interpolant_of(logic, t, s, opts, ledger);
      InterpolantReport rep = verify_interpolant(logic, t, s, a, {}, opts);
      ++basic.instances;
      vocab_ok += rep.vocabulary;
      entail_ok += rep.entailment;
      if (rep.vocabulary && rep.entailment) {
        ++basic.passed;
      } else {
        basic.fail(describe(t, s) + " gives " + format_formula(a, u));
      }
    }
    basic.extra = {{"vocabulary", vocab_ok}, {"entailment", entail_ok}};

    std::size_t draws = 0;
    for (std::size_t i = 0; i < n_side; ++i) {
      // Draw an underivable Γ ⇒ Δ, a target and target-free Π, Λ until
      // Π,Γ ⇒ Δ,Λ holds.
      MemoTable memo;
      std::optional<std::tuple<Sequent, ElimTarget, SideTest>> inst;
      for (std::size_t k = 0; k < cap && !inst; ++k) {
        Sequent s = random_sequent(rng, al, w);
        ElimTarget t = target(rng);
        Alphabet rest = detail::restrict_alphabet(al, t);
        if (rest.vars.empty() && rest.groups.empty()) continue;
        SideTest st{random_multiset(rng, rest, std::max<std::size_t>(1, w / 2), 3),
                    random_multiset(rng, rest, std::max<std::size_t>(1, w / 2), 3)};
        if (derivable(logic, s, &memo, opts)) continue;
        if (derivable(logic, Sequent{st.pi + s.antecedent, s.succedent + st.lambda}, &memo, opts)) {
          inst.emplace(s, t, st);
        }
        ++draws;
      }
      if (!inst) continue;
      auto& [s, t, st] = *inst;
      ++side.instances;
      Formula a = detail::interpolant_of(logic, t, s, opts, ledger);
      InterpolantReport rep = verify_interpolant(logic, t, s, a, {st}, opts);
      if (rep.uniformity()) {
        ++side.passed;
      } else {
        side.fail(describe(t, s) + " with " + detail::format_list(st.pi, u, ascii_notation()) + " ; " +
                  detail::format_list(st.lambda, u, ascii_notation()));
      }
    }
    side.extra = {{"draws", draws}};
    out.push_back(std::move(basic));
    out.push_back(std::move(side));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prover, countermodel and oracle agreement on the exhaustive corpus

struct OracleCorpus {
  std::vector<Formula> formulas;
  std::vector<SmallModelOracle::Result> verdicts;
};

inline OracleCorpus oracle_corpus(std::size_t max_weight) {
  const AgentUniverse u = detail::letters(2);
  OracleCorpus c;
  c.formulas = enumerate_formulas(Alphabet{{"p"}, u.all_groups()}, max_weight);
  if (!c.formulas.empty()) c.verdicts = SmallModelOracle(2, {"p"}, 3).check(c.formulas);
  return c;
}

// Tab-separated table: one line per formula with the verdict for each frame
// class (All, SerialSingletons, Reflexive), either "valid" or the first
// falsifier as model@state, followed by the formula. '#' lines are comments.
inline void write_oracle_table(std::ostream& out, const OracleCorpus& c) {
  const AgentUniverse u = detail::letters(2);
  out << "# exhaustive 3-state oracle, variables {p}, agents {a,b}\n";
  out << "# all\tserial\treflexive\tformula\n";
  for (std::size_t i = 0; i < c.formulas.size(); ++i) {
    for (const auto& f : c.verdicts[i].falsifier) {
      if (f) {
        out << f->model << '@' << f->state;
      } else {
        out << "valid";
      }
      out << '\t';
    }
    out << format_formula(c.formulas[i], u) << '\n';
  }
}

inline OracleCorpus read_oracle_table(std::istream& in) {
  const AgentUniverse u = detail::letters(2);
  OracleCorpus c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    SmallModelOracle::Result r;
    std::size_t pos = 0;
    for (auto& slot : r.falsifier) {
      std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) throw std::invalid_argument("malformed oracle line: " + line);
      std::string cell = line.substr(pos, tab - pos);
      if (cell != "valid") {
        std::size_t at = cell.find('@');
        if (at == std::string::npos) throw std::invalid_argument("malformed oracle cell: " + cell);
        slot = SmallModelOracle::Falsifier{std::stoull(cell.substr(0, at)),
                                           static_cast<std::size_t>(std::stoul(cell.substr(at + 1)))};
      }
      pos = tab + 1;
    }
    c.formulas.push_back(parse_formula(line.substr(pos), u));
    c.verdicts.push_back(r);
  }
  return c;
}

inline std::vector<SuiteResult> oracle_suites(const OracleCorpus& corpus, const SelftestConfig& cfg,
                                              RunLedger& ledger) {
  std::vector<SuiteResult> out;
  const AgentUniverse u = detail::letters(2);
  const SmallModelOracle oracle(2, {"p"}, 3);
  for (Logic logic : detail::kAllLogics) {
    const FrameClass cls = frame_class_for(logic);
    SuiteResult r{"oracle_agreement", logic_name(logic)};
    r.required = corpus.formulas.size();
    const ProverOptions opts = detail::audited(cfg.options, ledger);
    MemoTable memo;
    std::size_t derivable_n = 0, countermodels = 0, beyond_oracle = 0, largest = 0;
    for (std::size_t i = 0; i < corpus.formulas.size(); ++i) {
      const Formula& f = corpus.formulas[i];
      const auto& falsifier = corpus.verdicts.at(i).falsifier[static_cast<int>(cls)];
      Sequent s{{}, FormulaMultiset::of(std::vector<Formula>{f})};
      ++r.instances;
      std::string problem;
      Verdict v = prove(logic, pose(logic, s), memo, opts);
      if (auto* d = std::get_if<Derivable>(&v)) {
        ++derivable_n;
        if (!ledger.check(logic, d->proof)) problem = "proof rejected";
        if (falsifier) {
          PseudoModel m = oracle.model(falsifier->model);
          if (m.in_class(cls) && !model_check(m, falsifier->state, f)) problem = "derivable but falsified";
        }
      } else {
        Countermodel cm = countermodel(logic, s, u, opts);
        ++countermodels;
        largest = std::max(largest, cm.model.num_states());
        if (!cm.model.in_class(cls) || !falsified_at(cm.model, cm.witness, s)) {
          problem = "countermodel does not verify";
        } else if (!falsifier) {
          if (cm.model.num_states() <= 3) problem = "oracle missed a small countermodel";
          else ++beyond_oracle;
        } else {
          PseudoModel m = oracle.model(falsifier->model);
          if (!m.in_class(cls) || model_check(m, falsifier->state, f)) problem = "oracle falsifier does not verify";
        }
      }
      if (problem.empty()) {
        ++r.passed;
      } else {
        r.fail(format_formula(f, u) + ": " + problem);
      }
    }
    r.extra = {{"derivable", derivable_n},
               {"countermodels", countermodels},
               {"largest_countermodel", largest},
               {"valid_beyond_three_states", beyond_oracle}};
    out.push_back(std::move(r));
  }
  return out;
}

// Cross-checks the batched oracle against the one-model-at-a-time search on
// every stride-th corpus formula. Both run at two states, where the
// sequential search is cheap enough to finish.
inline SuiteResult enumeration_suite(const std::vector<Formula>& formulas, std::size_t stride) {
  SuiteResult r{"oracle_enumeration_crosscheck", "all"};
  const AgentUniverse u = detail::letters(2);
  std::vector<Formula> sample;
  for (std::size_t i = 0; i < formulas.size(); i += stride) sample.push_back(formulas[i]);
  if (sample.empty()) return r;
  const auto batch = SmallModelOracle(2, {"p"}, 2).check(sample);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    Sequent s{{}, FormulaMultiset::of(std::vector<Formula>{sample[i]})};
    for (Logic logic : detail::kAllLogics) {
      ++r.instances;
      auto found = enumerate_small_models(logic, s, u, 2);
      bool ok = batch[i].valid(frame_class_for(logic)) == !found.has_value();
      if (found) ok = ok && found->model.in_class(frame_class_for(logic)) &&
                      falsified_at(found->model, found->state, s);
      if (ok) {
        ++r.passed;
      } else {
        r.fail(std::string(logic_name(logic)) + " " + format_formula(sample[i], u));
      }
    }
  }
  r.required = r.instances;
  return r;
}

// ---------------------------------------------------------------------------
// Report

inline json suite_json(const SuiteResult& r) {
  json j = {{"suite", r.name},       {"logic", r.logic},   {"instances", r.instances},
            {"required", r.required}, {"passed", r.passed}, {"ok", r.ok()},
            {"failures", r.failures}};
  if (!r.extra.empty()) j["stats"] = r.extra;
  return j;
}

struct SelftestReport {
  std::vector<SuiteResult> suites;
  RunLedger ledger;

  bool ok() const {
    for (const auto& s : suites) {
      if (!s.ok()) return false;
    }
    return ledger.audit.violations == 0 && ledger.proofs_accepted == ledger.proofs_checked;
  }

  json to_json(const SelftestConfig& cfg) const {
    json suites_j = json::array();
    for (const auto& s : suites) suites_j.push_back(suite_json(s));
    return {{"seed", cfg.corpus.seed},
            {"count", cfg.corpus.count},
            {"max_weight", cfg.corpus.max_weight},
            {"var_pool", cfg.corpus.var_pool},
            {"agents", cfg.agents},
            {"oracle_weight", std::min(cfg.oracle_weight, cfg.corpus.max_weight)},
            {"suites", std::move(suites_j)},
            {"proof_checker", {{"checked", ledger.proofs_checked}, {"accepted", ledger.proofs_accepted}}},
            {"descent_audit",
             {{"edges", ledger.audit.edges_checked}, {"violations", ledger.audit.violations}}},
            {"ok", ok()}};
  }
};

inline SelftestReport run_selftest(const SelftestConfig& cfg) {
  SelftestReport rep;
  auto add = [&](std::vector<SuiteResult> v) {
    for (auto& s : v) rep.suites.push_back(std::move(s));
  };
  add(axiom_suites(cfg, rep.ledger));
  add(structural_suites(cfg, rep.ledger));
  add(interpolation_suites(cfg, rep.ledger));
  OracleCorpus corpus = oracle_corpus(std::min(cfg.oracle_weight, cfg.corpus.max_weight));
  add(oracle_suites(corpus, cfg, rep.ledger));
  rep.suites.push_back(enumeration_suite(corpus.formulas, 97));
  return rep;
}

}  // namespace dkinterp
