// Builds a reflexive countermodel and prints it as Graphviz.

#include <iostream>

#include "dkinterp/dkinterp.hpp"

int main() {
  using namespace dkinterp;
  const AgentUniverse u = AgentUniverse::parse_csv("a");
  Sequent s = parse_sequent("p => ~D{a}~(p & q)", u);
  Countermodel cm = countermodel(Logic::KTplus_D, s, u);
  std::cout << model_to_dot(cm.model, u, cm.witness);
}
