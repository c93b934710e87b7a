// JSON, LaTeX and Graphviz renderings of proofs, interpolation traces,
// models and verdicts. Proof documents in JSON and LaTeX both read back into
// ProofTree values that check_proof can validate.

#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dkinterp/interpolation.hpp"
#include "dkinterp/prover.hpp"
#include "dkinterp/semantics.hpp"
#include "dkinterp/syntax.hpp"

namespace dkinterp {

using nlohmann::json;

inline AnySequent parse_any(Logic logic, std::string_view text, const AgentUniverse& u) {
  if (logic == Logic::KTplus_D) return parse_tsequent(text, u);
  return parse_sequent(text, u);
}

// ---------------------------------------------------------------------------
// Proofs

inline json proof_to_json(const ProofTree& t, const AgentUniverse& u) {
  json principal = json::array();
  for (const PrincipalRef& p : t.principal) {
    principal.push_back({{"side", side_name(p.side)},
                         {"formula", format_formula(p.formula, u)},
                         {"count", p.count}});
  }
  json premises = json::array();
  for (const ProofTree& c : t.premises) premises.push_back(proof_to_json(c, u));
  return {{"rule", rule_name(t.rule)},
          {"conclusion", format_any(t.conclusion, u)},
          {"principal", std::move(principal)},
          {"premises", std::move(premises)}};
}

inline json proof_document(Logic logic, const ProofTree& t, const AgentUniverse& u) {
  return {{"logic", logic_name(logic)}, {"agents", u.names()}, {"proof", proof_to_json(t, u)}};
}

namespace detail {
inline Side parse_side(const std::string& s) {
  if (s == "store") return Side::Store;
  if (s == "antecedent") return Side::Antecedent;
  if (s == "succedent") return Side::Succedent;
  throw std::invalid_argument("unknown side '" + s + "'");
}
}  // namespace detail

inline ProofTree proof_from_json(const json& j, Logic logic, const AgentUniverse& u) {
  ProofTree t{parse_any(logic, j.at("conclusion").get<std::string>(), u), RuleTag::InitVar, {}, {}};
  auto rule = parse_rule(j.at("rule").get<std::string>());
  if (!rule) throw std::invalid_argument("unknown rule '" + j.at("rule").get<std::string>() + "'");
  t.rule = *rule;
  for (const json& p : j.at("principal")) {
    t.principal.push_back(PrincipalRef{detail::parse_side(p.at("side").get<std::string>()),
                                       parse_formula(p.at("formula").get<std::string>(), u),
                                       p.at("count").get<std::size_t>()});
  }
  for (const json& c : j.at("premises")) t.premises.push_back(proof_from_json(c, logic, u));
  return t;
}

// bussproofs source, one inference command per line.
inline std::string proof_to_latex(const ProofTree& t, const AgentUniverse& u) {
  std::string body;
  auto emit = [&](auto&& self, const ProofTree& n) -> void {
    if (n.premises.empty()) body += "\\AxiomC{}\n";
    for (const ProofTree& c : n.premises) self(self, c);
    static const char* infer[] = {"\\UnaryInfC", "\\UnaryInfC", "\\BinaryInfC", "\\TrinaryInfC"};
    if (n.premises.size() > 3) throw std::invalid_argument("rule with more than three premises");
    body += "\\RightLabel{\\scriptsize " + std::string(rule_name(n.rule)) + "}\n";
    body += std::string(infer[n.premises.size()]) + "{$" +
            format_any(n.conclusion, u, latex_notation()) + "$}\n";
  };
  emit(emit, t);
  return "\\begin{prooftree}\n" + body + "\\end{prooftree}\n";
}

// Indented tree, conclusion first, premises below.
inline std::string proof_to_text(const ProofTree& t, const AgentUniverse& u) {
  std::string out;
  auto emit = [&](auto&& self, const ProofTree& n, std::size_t depth) -> void {
    out += std::string(2 * depth, ' ') + "[" + rule_name(n.rule) + "] " + format_any(n.conclusion, u) + "\n";
    for (const ProofTree& c : n.premises) self(self, c, depth + 1);
  };
  emit(emit, t, 0);
  return out;
}

// Reads proof_to_latex output back. Principal formulas are not part of the
// rendering; they are recovered from the enumerated move with the same rule
// and premises, and left empty when there is none.
inline ProofTree proof_from_latex(std::string_view text, Logic logic, const AgentUniverse& u) {
  struct Slot {
    bool axiom_marker;
    ProofTree tree;
  };
  std::vector<Slot> stack;
  std::optional<RuleTag> label;
  std::istringstream in{std::string(text)};
  std::string line;
  auto argument = [](const std::string& l, std::size_t from) {
    std::size_t open = l.find('{', from), close = l.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open) {
      throw std::invalid_argument("malformed LaTeX line: " + l);
    }
    return l.substr(open + 1, close - open - 1);
  };
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("\\begin", 0) == 0 || line.rfind("\\end", 0) == 0) continue;
    if (line.rfind("\\AxiomC", 0) == 0) {
      stack.push_back({true, {}});
      continue;
    }
    if (line.rfind("\\RightLabel", 0) == 0) {
      std::string arg = argument(line, 0);
      std::string name = arg.substr(arg.find_last_of(' ') + 1);
      label = parse_rule(name);
      if (!label) throw std::invalid_argument("unknown rule '" + name + "'");
      continue;
    }
    std::size_t arity = line.rfind("\\UnaryInfC", 0) == 0    ? 1
                        : line.rfind("\\BinaryInfC", 0) == 0 ? 2
                        : line.rfind("\\TrinaryInfC", 0) == 0 ? 3
                                                              : 0;
    if (arity == 0) throw std::invalid_argument("unexpected LaTeX line: " + line);
    if (!label) throw std::invalid_argument("inference without a rule label");
    if (stack.size() < arity) throw std::invalid_argument("inference without enough premises");
    std::string seq = argument(line, 0);
    if (seq.size() < 2 || seq.front() != '$' || seq.back() != '$') {
      throw std::invalid_argument("conclusion is not in math mode");
    }
    ProofTree t{parse_any(logic, seq.substr(1, seq.size() - 2), u), *label, {}, {}};
    std::vector<Slot> kids(stack.end() - static_cast<std::ptrdiff_t>(arity), stack.end());
    stack.resize(stack.size() - arity);
    if (!(arity == 1 && kids[0].axiom_marker)) {
      for (Slot& k : kids) {
        if (k.axiom_marker) throw std::invalid_argument("axiom marker inside a multi-premise inference");
        t.premises.push_back(std::move(k.tree));
      }
    }
    for (const Move& m : enumerate_backward_moves(logic, t.conclusion)) {
      if (m.rule != t.rule || m.premises.size() != t.premises.size()) continue;
      bool same = true;
      for (std::size_t i = 0; i < m.premises.size() && same; ++i) {
        same = m.premises[i] == t.premises[i].conclusion;
      }
      if (same) {
        t.principal = m.principal;
        break;
      }
    }
    stack.push_back({false, std::move(t)});
    label.reset();
  }
  if (stack.size() != 1 || stack[0].axiom_marker) throw std::invalid_argument("LaTeX proof is not a single tree");
  return std::move(stack[0].tree);
}

// ---------------------------------------------------------------------------
// Interpolation traces

inline json trace_to_json(const TracePtr& n, const AgentUniverse& u) {
  json kids = json::array();
  for (const TracePtr& c : n->children) kids.push_back(trace_to_json(c, u));
  return {{"line", n->line},
          {"sequent", format_any(n->sequent, u)},
          {"result", format_formula(n->result, u)},
          {"children", std::move(kids)}};
}

// ---------------------------------------------------------------------------
// Models

namespace detail {
inline AgentUniverse model_universe(const PseudoModel& m, const AgentUniverse& u) {
  if (u.size() == m.num_agents()) return u;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m.num_agents(); ++a) names.push_back("a" + std::to_string(a));
  return AgentUniverse(std::move(names));
}
}  // namespace detail

inline json model_to_json(const PseudoModel& m, const AgentUniverse& universe,
                          std::optional<std::size_t> witness = std::nullopt) {
  const AgentUniverse u = detail::model_universe(m, universe);
  json rel = json::array();
  for (Group g : u.all_groups()) {
    json edges = json::array();
    for (auto [i, j] : m.edges(g)) edges.push_back({i, j});
    rel.push_back({{"group", format_group(g, u)}, {"edges", std::move(edges)}});
  }
  json val = json::object();
  for (const auto& [var, truth] : m.valuation()) {
    json on = json::array();
    for (std::size_t s = 0; s < truth.size(); ++s) {
      if (truth[s]) on.push_back(s);
    }
    val[var] = std::move(on);
  }
  json out = {{"states", m.num_states()},
              {"agents", u.names()},
              {"relations", std::move(rel)},
              {"valuation", std::move(val)}};
  if (witness) out["witness"] = *witness;
  return out;
}

inline PseudoModel model_from_json(const json& j) {
  AgentUniverse u(j.at("agents").get<std::vector<std::string>>());
  PseudoModel m(j.at("states").get<std::size_t>(), u.size());
  for (const json& r : j.at("relations")) {
    std::string text = r.at("group").get<std::string>();
    Formula probe = parse_formula("D" + text + " false", u);
    for (const json& e : r.at("edges")) {
      m.add_edge(probe.group(), e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
  }
  for (const auto& [var, on] : j.at("valuation").items()) {
    m.declare(var);
    for (const json& s : on) m.set_true(var, s.get<std::size_t>());
  }
  return m;
}

inline std::string model_to_text(const PseudoModel& m, const AgentUniverse& universe,
                                 std::optional<std::size_t> witness = std::nullopt) {
  const AgentUniverse u = detail::model_universe(m, universe);
  std::string out = "states: " + std::to_string(m.num_states()) + "\n";
  if (witness) out += "witness: w" + std::to_string(*witness) + "\n";
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    std::string vars;
    for (const auto& [var, truth] : m.valuation()) {
      if (truth[s]) vars += (vars.empty() ? "" : " ") + var;
    }
    out += "w" + std::to_string(s) + ": {" + vars + "}\n";
  }
  for (Group g : u.all_groups()) {
    std::string edges;
    for (auto [i, j] : m.edges(g)) {
      edges += (edges.empty() ? "" : " ") + ("w" + std::to_string(i) + "->w" + std::to_string(j));
    }
    out += "R" + format_group(g, u) + ": " + (edges.empty() ? "-" : edges) + "\n";
  }
  return out;
}

inline std::string model_to_dot(const PseudoModel& m, const AgentUniverse& universe,
                                std::optional<std::size_t> witness = std::nullopt) {
  const AgentUniverse u = detail::model_universe(m, universe);
  std::string out = "digraph model {\n  node [shape=circle];\n";
  for (std::size_t s = 0; s < m.num_states(); ++s) {
    std::string label = "w" + std::to_string(s);
    std::string vars;
    for (const auto& [var, truth] : m.valuation()) {
      if (!truth[s]) continue;
      vars += (vars.empty() ? "" : ",") + var;
    }
    if (!vars.empty()) label += "\\n" + vars;
    out += "  w" + std::to_string(s) + " [label=\"" + label + "\"" +
           (witness && *witness == s ? ", shape=doublecircle" : "") + "];\n";
  }
  const auto groups = u.all_groups();
  for (std::size_t i = 0; i < m.num_states(); ++i) {
    for (std::size_t j = 0; j < m.num_states(); ++j) {
      std::string label;
      for (Group g : groups) {
        if (!m.has_edge(g, i, j)) continue;
        label += (label.empty() ? "" : " ") + format_group(g, u);
      }
      if (label.empty()) continue;
      out += "  w" + std::to_string(i) + " -> w" + std::to_string(j) + " [label=\"" + label + "\"];\n";
    }
  }
  return out + "}\n";
}

// ---------------------------------------------------------------------------
// Verdicts

inline json verdict_to_json(Logic logic, const AnySequent& query, const Verdict& v,
                            const AgentUniverse& u) {
  json out = {{"logic", logic_name(logic)}, {"sequent", format_any(query, u)}};
  if (auto* d = std::get_if<Derivable>(&v)) {
    out["verdict"] = "Derivable";
    out["proof"] = proof_to_json(d->proof, u);
    out["size"] = d->proof.size();
    out["height"] = d->proof.height();
  } else {
    out["verdict"] = "NotDerivable";
    json failure = json::array();
    for (const AnySequent& s : std::get<NotDerivable>(v).failure) failure.push_back(format_any(s, u));
    out["failure"] = std::move(failure);
  }
  return out;
}

}  // namespace dkinterp
