// Command-line front end.
//
// Exit status: 0 for a positive verdict (derivable, model found, suites
// pass), 1 for a negative one, 2 for usage, parse and budget errors.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dkinterp/dkinterp.hpp"

namespace {

using namespace dkinterp;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

struct Session {
  std::string logic = "k";
  std::string agents = "a,b";
  std::string format = "text";
  std::size_t budget = default_budget();
  std::uint64_t seed = 1;

  Logic parsed_logic() const { return parse_logic(logic); }
  AgentUniverse universe() const { return AgentUniverse::parse_csv(agents); }
  ProverOptions options() const {
    ProverOptions o;
    o.budget = budget;
    return o;
  }
};

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  for (const auto& s : out) {
    if (s.empty()) throw std::invalid_argument("empty entry in list '" + csv + "'");
  }
  return out;
}

void require_format(const Session& s, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (s.format == f) return;
  }
  throw std::invalid_argument("format '" + s.format + "' is not available for this command");
}

int cmd_prove(const Session& s, const std::string& text) {
  require_format(s, {"text", "json", "latex"});
  const Logic logic = s.parsed_logic();
  const AgentUniverse u = s.universe();
  const AnySequent query = pose(logic, parse_sequent(text, u));
  Verdict v = prove(logic, query, s.options());
  if (auto* d = std::get_if<Derivable>(&v)) {
    CheckResult c = check_proof(logic, d->proof);
    if (!c.ok) {
      std::cerr << "internal error: extracted proof rejected: " << c.message << "\n";
      return kError;
    }
  }
  const bool yes = is_derivable(v);
  if (s.format == "json") {
    std::cout << verdict_to_json(logic, query, v, u).dump(2) << "\n";
  } else if (s.format == "latex") {
    if (yes) {
      std::cout << proof_to_latex(std::get<Derivable>(v).proof, u);
    } else {
      std::cout << "% NotDerivable: " << format_any(query, u) << "\n";
      for (const auto& f : std::get<NotDerivable>(v).failure) std::cout << "% stuck at $" << format_any(f, u, latex_notation()) << "$\n";
    }
  } else if (yes) {
    std::cout << "Derivable\n" << proof_to_text(std::get<Derivable>(v).proof, u);
  } else {
    std::cout << "NotDerivable\n";
    for (const auto& f : std::get<NotDerivable>(v).failure) std::cout << "  stuck at " << format_any(f, u) << "\n";
  }
  return yes ? kYes : kNo;
}

struct InterpolateArgs {
  std::string mode = "a";
  std::string var;
  std::string agent;
  std::string vars;
  std::string agents_elim;
  bool verify = false;
};

int cmd_interpolate(const Session& s, const InterpolateArgs& a, const std::string& text) {
  require_format(s, {"text", "json", "latex"});
  const Logic logic = s.parsed_logic();
  const AgentUniverse u = s.universe();
  const ProverOptions opts = s.options();
  json doc = {{"logic", logic_name(logic)}, {"mode", a.mode}};
  Formula result = Formula::bottom();
  bool verified = true;

  if (a.mode == "a") {
    if (!a.vars.empty() || !a.agents_elim.empty()) {
      throw std::invalid_argument("mode a takes --var and --agent, not lists");
    }
    ElimTarget t;
    if (!a.var.empty()) t.var = a.var;
    if (!a.agent.empty()) t.agent = u.require(a.agent);
    if (!t.var && !t.agent) throw std::invalid_argument("mode a needs --var or --agent");
    Sequent seq = parse_sequent(text, u);
    Interpolator in(logic, t, opts);
    Interpolant itp = in.interpolate(seq);
    result = itp.formula;
    doc["sequent"] = format_sequent(seq, u);
    doc["trace"] = trace_to_json(itp.trace, u);
    if (a.verify) {
      InterpolantReport r = verify_interpolant(logic, t, seq, result, {}, opts);
      doc["verification"] = {{"vocabulary", r.vocabulary}, {"entailment", r.entailment}};
      verified = r.vocabulary && r.entailment;
    }
  } else if (a.mode == "pre" || a.mode == "post") {
    if (!a.var.empty() || !a.agent.empty()) {
      throw std::invalid_argument("modes pre and post take --vars and --agents-elim");
    }
    std::vector<std::string> vars = a.vars.empty() ? std::vector<std::string>{} : split_csv(a.vars);
    std::vector<AgentId> agents;
    if (!a.agents_elim.empty()) {
      for (const auto& n : split_csv(a.agents_elim)) agents.push_back(u.require(n));
    }
    if (vars.empty() && agents.empty()) throw std::invalid_argument("empty elimination lists");
    Formula alpha = parse_formula(text, u);
    result = a.mode == "pre" ? pre_interpolant(logic, alpha, vars, agents, opts)
                             : post_interpolant(logic, alpha, vars, agents, opts);
    doc["formula_in"] = format_formula(alpha, u);
    if (a.verify) {
      Vocabulary v = vocab(result);
      bool vocab_ok = true;
      for (const auto& x : vars) vocab_ok = vocab_ok && !v.vars.count(x);
      for (AgentId g : agents) vocab_ok = vocab_ok && !v.has_agent(g);
      // pre(α) ⇒ α and α ⇒ post(α).
      Sequent e = a.mode == "pre" ? Sequent{FormulaMultiset::of(std::vector<Formula>{result}),
                                            FormulaMultiset::of(std::vector<Formula>{alpha})}
                                  : Sequent{FormulaMultiset::of(std::vector<Formula>{alpha}),
                                            FormulaMultiset::of(std::vector<Formula>{result})};
      bool entail = derivable(logic, e, nullptr, opts);
      doc["verification"] = {{"vocabulary", vocab_ok}, {"entailment", entail}};
      verified = vocab_ok && entail;
    }
  } else {
    throw std::invalid_argument("unknown mode '" + a.mode + "' (expected a, pre or post)");
  }

  doc["formula"] = format_formula(result, u);
  if (s.format == "json") {
    std::cout << doc.dump(2) << "\n";
  } else if (s.format == "latex") {
    std::cout << "$" << format_formula(result, u, latex_notation()) << "$\n";
  } else {
    std::cout << format_formula(result, u) << "\n";
    if (a.verify) {
      std::cout << "vocabulary: " << (doc["verification"]["vocabulary"].get<bool>() ? "ok" : "FAIL")
                << "\nentailment: " << (doc["verification"]["entailment"].get<bool>() ? "ok" : "FAIL")
                << "\n";
    }
  }
  return verified ? kYes : kNo;
}

int cmd_countermodel(const Session& s, const std::string& text) {
  require_format(s, {"text", "json", "dot"});
  const Logic logic = s.parsed_logic();
  const AgentUniverse u = s.universe();
  Sequent seq = parse_sequent(text, u);
  if (derivable(logic, seq, nullptr, s.options())) {
    std::cerr << "sequent is derivable; no countermodel\n";
    return kNo;
  }
  Countermodel cm = countermodel(logic, seq, u, s.options());
  if (!cm.model.in_class(frame_class_for(logic)) || !falsified_at(cm.model, cm.witness, seq)) {
    std::cerr << "internal error: countermodel does not verify\n";
    return kError;
  }
  if (s.format == "json") {
    json j = model_to_json(cm.model, u, cm.witness);
    j["frame_class"] = frame_class_name(frame_class_for(logic));
    std::cout << j.dump(2) << "\n";
  } else if (s.format == "dot") {
    std::cout << model_to_dot(cm.model, u, cm.witness);
  } else {
    std::cout << model_to_text(cm.model, u, cm.witness);
  }
  return kYes;
}

struct SelftestArgs {
  std::size_t count = 100;
  std::size_t max_weight = 12;
  std::size_t var_pool = 3;
  std::size_t oracle_weight = 6;
};

int cmd_selftest(const Session& s, const SelftestArgs& a) {
  require_format(s, {"text", "json"});
  SelftestConfig cfg;
  cfg.corpus = RandomCorpusSpec{a.count, a.max_weight, a.var_pool, s.seed};
  cfg.oracle_weight = a.oracle_weight;
  cfg.options = s.options();
  SelftestReport rep = run_selftest(cfg);
  std::cout << rep.to_json(cfg).dump(2) << "\n";
  return rep.ok() ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure and uniform interpolants for K_D, KD_D and KT_D"};
  app.require_subcommand(1);
  app.fallthrough();

  Session s;
  app.add_option("--logic", s.logic, "k, kd or kt")->check(CLI::IsMember({"k", "kd", "kt"}));
  app.add_option("--agents", s.agents, "agent names, comma separated");
  app.add_option("--format", s.format, "text, json, latex or dot")
      ->check(CLI::IsMember({"text", "json", "latex", "dot"}));
  app.add_option("--budget", s.budget, "node budget per proof search (default $DKINTERP_BUDGET)");
  app.add_option("--seed", s.seed, "random seed");

  std::string input;
  int status = kError;

  auto* prove_cmd = app.add_subcommand("prove", "decide a sequent and print a proof or failure");
  prove_cmd->add_option("sequent", input, "e.g. \"D{a}p => p\"")->required();
  prove_cmd->callback([&] { status = cmd_prove(s, input); });

  InterpolateArgs ia;
  auto* itp_cmd = app.add_subcommand("interpolate", "compute an A-formula or a pre/post interpolant");
  itp_cmd->add_option("input", input, "sequent (mode a) or formula (pre/post)")->required();
  itp_cmd->add_option("--mode", ia.mode, "a, pre or post")->check(CLI::IsMember({"a", "pre", "post"}));
  itp_cmd->add_option("--var", ia.var, "variable to eliminate (mode a)");
  itp_cmd->add_option("--agent", ia.agent, "agent to eliminate (mode a)");
  itp_cmd->add_option("--vars", ia.vars, "variables to eliminate (pre/post)");
  itp_cmd->add_option("--agents-elim", ia.agents_elim, "agents to eliminate (pre/post)");
  itp_cmd->add_flag("--verify", ia.verify, "check the vocabulary and entailment conditions");
  itp_cmd->callback([&] { status = cmd_interpolate(s, ia, input); });

  auto* cm_cmd = app.add_subcommand("countermodel", "build a verified countermodel");
  cm_cmd->add_option("sequent", input)->required();
  cm_cmd->callback([&] { status = cmd_countermodel(s, input); });

  SelftestArgs sa;
  auto* st_cmd = app.add_subcommand("selftest", "run the property suites and print a JSON report");
  st_cmd->add_option("--count", sa.count, "instances per random suite");
  st_cmd->add_option("--max-weight", sa.max_weight, "maximum weight of random sequents");
  st_cmd->add_option("--var-pool", sa.var_pool, "number of variables in random formulas")
      ->check(CLI::Range(1, 8));
  st_cmd->add_option("--oracle-weight", sa.oracle_weight, "maximum weight of the exhaustive corpus");
  st_cmd->callback([&] { status = cmd_selftest(s, sa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kError;
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return status;
}
