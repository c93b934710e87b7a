// Eliminates p and agent 1 from a K_D sequent and checks the result.

#include <iostream>

#include "dkinterp/dkinterp.hpp"

int main() {
  using namespace dkinterp;
  const AgentUniverse u = AgentUniverse::parse_csv("1,2");
  Sequent s = parse_sequent("D{1}q & D{1}p, D{2}p => D{1}p -> D{2}r", u);
  ElimTarget t;
  t.var = "p";
  t.agent = u.require("1");

  Interpolator in(Logic::K_D, t);
  Interpolant a = in.interpolate(s);
  std::cout << "A = " << format_formula(a.formula, u) << "\n";

  InterpolantReport r = verify_interpolant(Logic::K_D, t, s, a.formula);
  std::cout << "vocabulary " << (r.vocabulary ? "ok" : "FAIL") << ", entailment "
            << (r.entailment ? "ok" : "FAIL") << "\n";
  std::cout << trace_to_json(a.trace, u).dump(2) << "\n";
}
