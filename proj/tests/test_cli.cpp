#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "dkinterp/io.hpp"

namespace {

struct CliRun {
  int status;
  std::string out;
};

// Runs the CLI with `args` (already shell-quoted); stderr is discarded.
CliRun cli(const std::string& args) {
  std::string cmd = std::string("'") + DKINTERP_CLI + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace

TEST(Prove, ExitCodes) {
  EXPECT_EQ(cli("prove --logic kt --agents a,b 'D{a}p => p'").status, 0);
  EXPECT_EQ(cli("prove --logic k --agents a '=> D{a}false -> false'").status, 1);
  EXPECT_EQ(cli("prove --logic k 'p & => p'").status, 2);
  EXPECT_EQ(cli("prove --logic k 'D{z}p => p'").status, 2);
  EXPECT_EQ(cli("prove --logic s4 'p => p'").status, 2);
  EXPECT_EQ(cli("prove --budget 2 'D{a}(p & q) => D{a}p & D{a}q'").status, 2);
  EXPECT_EQ(cli("").status, 2);
}

TEST(Prove, Formats) {
  CliRun text = cli("prove --logic kt --agents a 'D{a}p => p'");
  EXPECT_EQ(text.out, "Derivable\n[DTplus] | D{a}p => p\n  [InitVar] D{a}p | p => p\n");

  CliRun j = cli("--format json prove --logic kd 'D{a}false =>'");
  ASSERT_EQ(j.status, 0);
  dkinterp::json doc = dkinterp::json::parse(j.out);
  EXPECT_EQ(doc["verdict"], "Derivable");
  EXPECT_EQ(doc["proof"]["rule"], "DD");

  CliRun tex = cli("prove --format latex 'p => p'");
  EXPECT_NE(tex.out.find("\\begin{prooftree}"), std::string::npos);

  CliRun no = cli("prove --format json '=> p'");
  EXPECT_EQ(no.status, 1);
  EXPECT_EQ(dkinterp::json::parse(no.out)["verdict"], "NotDerivable");
}

TEST(Prove, EnvironmentBudget) {
  EXPECT_EQ(cli("prove 'D{a}(p & q) => D{a}p & D{a}q'").status, 0);
  CliRun r{};
  std::string cmd = std::string("DKINTERP_BUDGET=2 '") + DKINTERP_CLI +
                    "' prove 'D{a}(p & q) => D{a}p & D{a}q' >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  EXPECT_EQ(r.status, 2);
}

TEST(Interpolate, Golden) {
  CliRun r = cli("interpolate --logic k --agents 1,2 --mode a --var p --agent 1 "
              "'D{1}q & D{1}p, D{2}p => D{1}p -> D{2}r'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "<D{2}>false | D{2}r\n");
}

TEST(Interpolate, EmptySequent) {
  CliRun r = cli("interpolate --mode a --var p --agent a '=>'");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "false\n");
}

TEST(Interpolate, PostVerified) {
  CliRun r = cli("interpolate --mode post --vars p --agents-elim a --verify p");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "true\nvocabulary: ok\nentailment: ok\n");
}

TEST(Interpolate, JsonTrace) {
  CliRun r = cli("--format json interpolate --mode a --var p --verify 'q => q'");
  ASSERT_EQ(r.status, 0);
  auto j = dkinterp::json::parse(r.out);
  EXPECT_EQ(j["formula"], "~q | q");
  EXPECT_EQ(j["trace"]["line"], "11");
  EXPECT_EQ(j["verification"]["entailment"], true);
}

TEST(Interpolate, Errors) {
  EXPECT_EQ(cli("interpolate --mode pre p").status, 2);
  EXPECT_EQ(cli("interpolate --mode a 'p => p'").status, 2);
  EXPECT_EQ(cli("interpolate --mode a --var p --agent z 'p => p'").status, 2);
  EXPECT_EQ(cli("interpolate --mode pre --var p p").status, 2);
  EXPECT_EQ(cli("interpolate --mode a --vars p 'p => p'").status, 2);
}

TEST(Countermodel, Reflexive) {
  CliRun r = cli("--format json countermodel --logic kt --agents a 'p => ~D{a}~(p & q)'");
  ASSERT_EQ(r.status, 0);
  auto j = dkinterp::json::parse(r.out);
  EXPECT_EQ(j["frame_class"], "Reflexive");
  dkinterp::PseudoModel m = dkinterp::model_from_json(j);
  EXPECT_TRUE(m.in_class(dkinterp::FrameClass::Reflexive));
  std::size_t w = j["witness"];
  EXPECT_TRUE(dkinterp::falsified_at(m, w, dkinterp::parse_sequent("p => ~D{a}~(p & q)", dkinterp::AgentUniverse::parse_csv("a"))));
}

TEST(Countermodel, DerivableAndDot) {
  EXPECT_EQ(cli("countermodel 'D{a}p => D{a,b}p'").status, 1);
  CliRun dot = cli("--format dot countermodel --logic kd 'D{a,b}false =>'");
  EXPECT_EQ(dot.status, 0);
  EXPECT_EQ(dot.out.rfind("digraph model {", 0), 0u);
  EXPECT_EQ(cli("--format latex countermodel '=> p'").status, 2);
}

TEST(Selftest, EmptyCorpusPasses) {
  CliRun r = cli("selftest --count 3 --max-weight 0");
  EXPECT_EQ(r.status, 0);
  auto j = dkinterp::json::parse(r.out);
  EXPECT_EQ(j["ok"], true);
}
