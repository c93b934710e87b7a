#include <gtest/gtest.h>

#include "dkinterp/corpus.hpp"
#include "dkinterp/prover.hpp"
#include "dkinterp/syntax.hpp"

using namespace dkinterp;

namespace {

const AgentUniverse kAB = AgentUniverse::parse_csv("a,b");

Sequent S(const std::string& s) { return parse_sequent(s, kAB); }
TSequent T(const std::string& s) { return parse_tsequent(s, kAB); }
Formula F(const std::string& s) { return parse_formula(s, kAB); }

ProofTree leaf(const AnySequent& s, const Formula& p) {
  return ProofTree{s, RuleTag::InitVar, {{Side::Antecedent, p, 1}, {Side::Succedent, p, 1}}, {}};
}

}  // namespace

TEST(Moves, PropositionalStepIsUnique) {
  auto moves = enumerate_backward_moves(Logic::K_D, S("p & q => r"));
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].rule, RuleTag::LAnd);
  ASSERT_EQ(moves[0].premises.size(), 1u);
  EXPECT_EQ(std::get<Sequent>(moves[0].premises[0]), S("p, q => r"));
}

TEST(Moves, DKTakesAllSubgroupBoxes) {
  auto moves = enumerate_backward_moves(Logic::K_D, S("D{a}p, D{a,b}q => D{a,b}r"));
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].rule, RuleTag::DK);
  EXPECT_EQ(std::get<Sequent>(moves[0].premises[0]), S("p, q => r"));

  auto narrow = enumerate_backward_moves(Logic::K_D, S("D{a}p, D{a,b}q => D{a}r"));
  ASSERT_EQ(narrow.size(), 1u);
  EXPECT_EQ(std::get<Sequent>(narrow[0].premises[0]), S("p => r"));
}

TEST(Moves, DDInSerialLogicOnly) {
  auto kd = enumerate_backward_moves(Logic::KD_D, S("D{a}false =>"));
  ASSERT_EQ(kd.size(), 1u);
  EXPECT_EQ(kd[0].rule, RuleTag::DD);
  EXPECT_EQ(std::get<Sequent>(kd[0].premises[0]), S("false =>"));
  EXPECT_TRUE(enumerate_backward_moves(Logic::K_D, S("D{a}false =>")).empty());
  // Only exact singleton boxes feed DD.
  EXPECT_TRUE(enumerate_backward_moves(Logic::KD_D, S("D{a,b}false =>")).empty());
}

TEST(Moves, DDBeforeDK) {
  auto moves = enumerate_backward_moves(Logic::KD_D, S("D{a}p, D{b}q => D{a}r"));
  ASSERT_EQ(moves.size(), 3u);
  EXPECT_EQ(moves[0].rule, RuleTag::DD);
  EXPECT_EQ(moves[1].rule, RuleTag::DD);
  EXPECT_EQ(moves[2].rule, RuleTag::DK);
}

TEST(Moves, InitialSequents) {
  auto v = enumerate_backward_moves(Logic::K_D, S("p, q & r => p"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, RuleTag::InitVar);
  EXPECT_TRUE(v[0].premises.empty());
  auto b = enumerate_backward_moves(Logic::K_D, S("false => q"));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].rule, RuleTag::InitBot);
}

TEST(Moves, ReflexiveCalculus) {
  auto t = enumerate_backward_moves(Logic::KTplus_D, T("| D{a}p, D{b}q => r"));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].rule, RuleTag::DTplus);
  EXPECT_EQ(std::get<TSequent>(t[0].premises[0]), T("D{a}p | p, D{b}q => r"));

  auto k = enumerate_backward_moves(Logic::KTplus_D, T("D{a}p, D{b}q | p, q => D{a}r"));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].rule, RuleTag::DKplus);
  EXPECT_EQ(std::get<TSequent>(k[0].premises[0]), T("| p => r"));
}

TEST(Moves, ShapeMismatch) {
  EXPECT_THROW(enumerate_backward_moves(Logic::K_D, T("| p => p")), std::invalid_argument);
  EXPECT_THROW(enumerate_backward_moves(Logic::KTplus_D, S("p => p")), std::invalid_argument);
}

TEST(Checker, AcceptsProverOutput) {
  Verdict v = prove(Logic::K_D, S("D{a}p => D{a,b}p"));
  ASSERT_TRUE(is_derivable(v));
  const ProofTree& t = std::get<Derivable>(v).proof;
  EXPECT_TRUE(check_proof(Logic::K_D, t).ok);
  EXPECT_FALSE(check_proof(Logic::KTplus_D, t).ok);
}

TEST(Checker, AcceptsAxiomLeaf) {
  EXPECT_TRUE(check_proof(Logic::K_D, leaf(S("p => p"), F("p"))).ok);
  EXPECT_FALSE(check_proof(Logic::K_D, leaf(S("p => q"), F("p"))).ok);
}

TEST(Checker, RejectsSubgroupBoxLeftInContext) {
  const Sequent concl = S("D{a}p, D{b}q => D{a,b}p");
  ProofTree good{concl, RuleTag::DK,
                 {{Side::Succedent, F("D{a,b}p"), 1}, {Side::Antecedent, F("D{a}p"), 1},
                  {Side::Antecedent, F("D{b}q"), 1}},
                 {leaf(S("p, q => p"), F("p"))}};
  EXPECT_TRUE(check_proof(Logic::K_D, good).ok) << check_proof(Logic::K_D, good).message;

  // D{b}q has group within {a,b}, so it may not stay in the context.
  ProofTree bad{concl, RuleTag::DK,
                {{Side::Succedent, F("D{a,b}p"), 1}, {Side::Antecedent, F("D{a}p"), 1}},
                {leaf(S("p => p"), F("p"))}};
  CheckResult r = check_proof(Logic::K_D, bad);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(r.path.empty());
  EXPECT_NE(r.message.find("side condition"), std::string::npos) << r.message;
}

TEST(Checker, ReportsPathToBadNode) {
  Verdict v = prove(Logic::K_D, S("p & q => q & p"));
  ASSERT_TRUE(is_derivable(v));
  ProofTree t = std::get<Derivable>(v).proof;
  ASSERT_EQ(t.rule, RuleTag::LAnd);
  ASSERT_EQ(t.premises[0].rule, RuleTag::RAnd);
  t.premises[0].premises[1].rule = RuleTag::InitBot;
  CheckResult r = check_proof(Logic::K_D, t);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.path, (std::vector<std::size_t>{0, 1}));
}

TEST(Checker, DDConditions) {
  ProofTree dd{S("D{a}false =>"), RuleTag::DD, {{Side::Antecedent, F("D{a}false"), 1}},
               {ProofTree{S("false =>"), RuleTag::InitBot, {{Side::Antecedent, F("false"), 1}}, {}}}};
  EXPECT_TRUE(check_proof(Logic::KD_D, dd).ok);
  EXPECT_FALSE(check_proof(Logic::K_D, dd).ok);

  // A second {a}-box left in the context violates the DD side condition.
  ProofTree ctx = dd;
  ctx.conclusion = S("D{a}false, D{a}q =>");
  EXPECT_FALSE(check_proof(Logic::KD_D, ctx).ok);

  ProofTree empty{S("=>"), RuleTag::DD, {}, {ProofTree{S("=>"), RuleTag::InitBot, {}, {}}}};
  EXPECT_FALSE(check_proof(Logic::KD_D, empty).ok);
}

TEST(Checker, RuleArity) {
  ProofTree t = leaf(S("p => p"), F("p"));
  t.premises.push_back(leaf(S("p => p"), F("p")));
  EXPECT_FALSE(check_proof(Logic::K_D, t).ok);
}

TEST(Moves, FuzzInstantiatesToCheckedNodes) {
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  for (Logic logic : {Logic::K_D, Logic::KD_D, Logic::KTplus_D}) {
    Rng rng(40 + static_cast<int>(logic));
    std::size_t nodes = 0;
    for (int i = 0; i < 500; ++i) {
      AnySequent s = pose(logic, random_sequent(rng, al, 12));
      for (const Move& m : enumerate_backward_moves(logic, s)) {
        auto err = check_step(logic, s, m.rule, m.principal, m.premises);
        EXPECT_FALSE(err.has_value()) << format_any(s, kAB) << ": " << err.value_or("");
        ++nodes;
      }
    }
    EXPECT_GT(nodes, 400u);
  }
}

TEST(Moves, DKPremisesIgnoreAntecedentDuplicates) {
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  Rng rng(77);
  int critical = 0;
  for (int i = 0; i < 2000 && critical < 100; ++i) {
    Sequent s;
    for (int k = 0; k < 3; ++k) {
      s.antecedent.insert(Formula::dist(rng.pick(al.groups), random_formula(rng, al, 3)));
    }
    s.succedent.insert(Formula::dist(rng.pick(al.groups), random_formula(rng, al, 3)));
    if (!is_critical(s)) continue;
    ++critical;
    Sequent dup = s;
    dup.antecedent.insert_all(s.antecedent);
    auto a = enumerate_backward_moves(Logic::K_D, s);
    auto b = enumerate_backward_moves(Logic::K_D, dup);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j].rule != RuleTag::DK) continue;
      const auto& pa = std::get<Sequent>(a[j].premises[0]);
      const auto& pb = std::get<Sequent>(b[j].premises[0]);
      EXPECT_EQ(pa.antecedent.collapsed(), pb.antecedent.collapsed());
      EXPECT_EQ(pa.succedent, pb.succedent);
    }
  }
  EXPECT_EQ(critical, 100);
}

TEST(Logic, Names) {
  EXPECT_EQ(parse_logic("k"), Logic::K_D);
  EXPECT_EQ(parse_logic("kd"), Logic::KD_D);
  EXPECT_EQ(parse_logic("kt"), Logic::KTplus_D);
  EXPECT_THROW(parse_logic("s5"), std::invalid_argument);
  EXPECT_FALSE(rule_allowed(Logic::K_D, RuleTag::DD));
  EXPECT_FALSE(rule_allowed(Logic::KTplus_D, RuleTag::DK));
  EXPECT_TRUE(rule_allowed(Logic::KTplus_D, RuleTag::DTplus));
}
