// Proves one instance of each axiom schema and prints the proofs.

#include <iostream>

#include "dkinterp/dkinterp.hpp"

int main() {
  using namespace dkinterp;
  const AgentUniverse u = AgentUniverse::parse_csv("a,b");
  const struct {
    Logic logic;
    const char* text;
  } cases[] = {
      {Logic::K_D, "=> D{a}(p -> q) -> (D{a}p -> D{a}q)"},
      {Logic::K_D, "=> D{a}p -> D{a,b}p"},
      {Logic::KD_D, "=> ~D{a}false"},
      {Logic::KTplus_D, "=> D{a,b}p -> p"},
  };
  for (const auto& c : cases) {
    AnySequent s = pose(c.logic, parse_sequent(c.text, u));
    Verdict v = prove(c.logic, s);
    std::cout << logic_name(c.logic) << "  " << format_any(s, u) << "\n";
    if (auto* d = std::get_if<Derivable>(&v)) {
      std::cout << proof_to_text(d->proof, u)
                << "checker: " << (check_proof(c.logic, d->proof).ok ? "accepted" : "rejected") << "\n\n";
    } else {
      std::cout << "not derivable\n\n";
    }
  }
}
