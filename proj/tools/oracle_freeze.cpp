// Regenerates or checks the frozen oracle table used by the acceptance suite.
//
//   oracle_freeze write tests/data/oracle_w6.tsv
//   oracle_freeze check tests/data/oracle_w6.tsv

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dkinterp/selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exhaustive small-model oracle table"};
  std::string mode, path;
  std::size_t weight = 6;
  app.add_option("mode", mode, "write or check")->required()->check(CLI::IsMember({"write", "check"}));
  app.add_option("file", path, "table path")->required();
  app.add_option("--weight", weight, "maximum formula weight");
  CLI11_PARSE(app, argc, argv);

  std::ostringstream fresh;
  dkinterp::write_oracle_table(fresh, dkinterp::oracle_corpus(weight));
  if (mode == "write") {
    std::ofstream out(path, std::ios::binary);
    out << fresh.str();
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return 2;
    }
    return 0;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return 2;
  }
  std::ostringstream frozen;
  frozen << in.rdbuf();
  if (frozen.str() != fresh.str()) {
    std::cerr << "oracle table differs from a fresh run\n";
    return 1;
  }
  std::cout << "oracle table matches\n";
  return 0;
}
