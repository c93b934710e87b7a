// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Thresholds are fixed below and printed with each line.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "dkinterp/dkinterp.hpp"

using namespace dkinterp;

namespace {

constexpr double kGoldenSeconds = 1.0;
constexpr std::size_t kLoopNodes = 1000;
constexpr double kAxiomSeconds = 60.0;
constexpr std::size_t kBasicPerLogic = 200;
constexpr std::size_t kUniformityPerLogic = 100;
constexpr std::size_t kStructuralPerProbe = 100;
constexpr std::size_t kDeterminismSeed = 7;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& title, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  C" << n << "  " << title << ": " << detail << std::endl;
}

bool suites_ok(const std::vector<SuiteResult>& v, std::size_t min_instances, std::string& detail) {
  bool ok = true;
  std::ostringstream d;
  for (const auto& s : v) {
    bool good = s.ok() && s.instances >= min_instances;
    ok = ok && good;
    d << " " << s.name << "[" << s.logic << "]=" << s.passed << "/" << s.instances;
    for (const auto& f : s.failures) d << " {" << f << "}";
  }
  detail = d.str();
  return ok;
}

std::string capture(const std::string& cmd, int& status) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

}  // namespace

int main() {
  SelftestConfig cfg;  // seed 1, 100 instances, weight 12, 3 variables, 3 agents
  RunLedger ledger;
  const ProverOptions audit = detail::audited(cfg.options, ledger);

  // C1
  {
    const AgentUniverse u = AgentUniverse::parse_csv("1,2");
    ElimTarget t;
    t.var = "p";
    t.agent = u.require("1");
    auto t0 = Clock::now();
    Interpolant a = Interpolator(Logic::K_D, t, audit).interpolate(
        parse_sequent("D{1}q & D{1}p, D{2}p => D{1}p -> D{2}r", u));
    double secs = seconds_since(t0);
    audit_trace(Logic::K_D, a.trace, ledger.audit);
    std::string got = format_formula(a.formula, u);
    const std::string want = "<D{2}>false | D{2}r";
    std::ostringstream d;
    d << "got \"" << got << "\", want \"" << want << "\"; " << secs << " s (limit " << kGoldenSeconds << " s)";
    report(1, got == want && secs < kGoldenSeconds, "golden interpolant", d.str());
  }

  // C2
  {
    const AgentUniverse u = AgentUniverse::parse_csv("a");
    const Sequent s = parse_sequent("p => ~D{a}~(p & q)", u);
    Prover pr(Logic::KTplus_D, audit);
    Verdict v = pr.prove(pose(Logic::KTplus_D, s));
    const std::size_t nodes = pr.stats().nodes_expanded;
    Countermodel cm = countermodel(Logic::KTplus_D, s, u, audit);
    bool model_ok = cm.model.in_class(FrameClass::Reflexive) && falsified_at(cm.model, cm.witness, s) &&
                    model_check(cm.model, cm.witness, parse_formula("D{a}~(p & q)", u));
    std::ostringstream d;
    d << (is_derivable(v) ? "Derivable" : "NotDerivable") << " after " << nodes << " nodes (limit < "
      << kLoopNodes << "); countermodel " << cm.model.num_states() << " state(s), reflexive and falsifying: "
      << (model_ok ? "yes" : "no");
    report(2, !is_derivable(v) && nodes < kLoopNodes && model_ok, "golden termination", d.str());
  }

  // C3
  {
    auto t0 = Clock::now();
    auto suites = axiom_suites(cfg, ledger);
    double secs = seconds_since(t0);
    std::string d;
    bool ok = suites_ok(suites, cfg.axiom_count, d);
    std::ostringstream tail;
    tail << "; " << secs << " s (limit " << kAxiomSeconds << " s)";
    report(3, ok && secs < kAxiomSeconds, "axiom suite", d + tail.str());
  }

  // C4
  {
    auto suites = interpolation_suites(cfg, ledger);
    bool ok = true;
    std::ostringstream d;
    for (const auto& s : suites) {
      std::size_t need = s.name == "interpolant_uniformity" ? kUniformityPerLogic : kBasicPerLogic;
      ok = ok && s.ok() && s.instances >= need;
      d << " " << s.name << "[" << s.logic << "]=" << s.passed << "/" << s.instances << " (need " << need << ")";
      for (const auto& f : s.failures) d << " {" << f << "}";
    }
    report(4, ok, "interpolant conditions", d.str());
  }

  // C5
  {
    std::ifstream in(DKINTERP_ORACLE_TABLE);
    OracleCorpus corpus = read_oracle_table(in);
    const auto expect = enumerate_formulas(Alphabet{{"p"}, detail::letters(2).all_groups()}, 6);
    bool same_corpus = corpus.formulas == expect;
    std::string d;
    auto suites = oracle_suites(corpus, cfg, ledger);
    suites.push_back(enumeration_suite(corpus.formulas, 97));
    bool ok = same_corpus && suites_ok(suites, 1, d);
    std::ostringstream head;
    head << corpus.formulas.size() << " formulas from the frozen table (corpus "
         << (same_corpus ? "matches" : "DIFFERS FROM") << " enumeration);";
    for (const auto& s : suites) {
      if (s.extra.contains("largest_countermodel")) {
        head << " " << s.logic << " largest countermodel " << s.extra["largest_countermodel"];
      }
    }
    report(5, ok, "oracle agreement", head.str() + d);
  }

  // C7 covers the searches and traces of C1 to C5, so it is read off here.
  const std::size_t edges = ledger.audit.edges_checked, violations = ledger.audit.violations;
  const std::size_t checked = ledger.proofs_checked, accepted = ledger.proofs_accepted;

  // C6
  {
    RunLedger own;
    auto suites = structural_suites(cfg, own);
    std::string d;
    report(6, suites_ok(suites, kStructuralPerProbe, d), "structural properties", d);
  }

  {
    std::ostringstream d;
    d << edges << " edges, " << violations << " violations; proofs " << accepted << "/" << checked << " accepted";
    report(7, violations == 0 && edges > 0 && accepted == checked, "termination measure audit", d.str());
  }

  // C8
  {
    const std::string cmd = std::string("'") + DKINTERP_CLI + "' --seed " + std::to_string(kDeterminismSeed) +
                            " selftest 2>&1";
    int s1 = 0, s2 = 0;
    std::string a = capture(cmd, s1);
    std::string b = capture(cmd, s2);
    std::ostringstream d;
    d << "two runs with seed " << kDeterminismSeed << ": " << a.size() << " and " << b.size()
      << " bytes, exit " << s1 << "/" << s2 << ", " << (a == b ? "identical" : "DIFFERENT");
    report(8, a == b && !a.empty() && s1 == 0 && s2 == 0, "determinism", d.str());
  }

  std::cout << "note: uniformity instances with a union of antecedent groups over three or more agents "
               "can fall outside the table (see the UnionGroupGapWithThreeAgents unit test)."
            << std::endl;
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
