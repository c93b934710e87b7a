#include <gtest/gtest.h>

#include "dkinterp/corpus.hpp"
#include "dkinterp/syntax.hpp"

using namespace dkinterp;

namespace {

const AgentUniverse kAB = AgentUniverse::parse_csv("a,b");
const AgentUniverse kABCD = AgentUniverse::parse_csv("a,b,c,d");

Formula F(const std::string& s, const AgentUniverse& u = kAB) { return parse_formula(s, u); }
Group G(std::initializer_list<AgentId> members) { return Group::from_members(members); }

}  // namespace

TEST(Agents, UniverseParsing) {
  AgentUniverse u = AgentUniverse::parse_csv(" a , b2 ,c ");
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u.name(1), "b2");
  EXPECT_EQ(u.require("c"), 2);
  EXPECT_FALSE(u.find("d").has_value());
  EXPECT_THROW(AgentUniverse::parse_csv("a,a"), std::invalid_argument);
  EXPECT_THROW(AgentUniverse::parse_csv(""), std::invalid_argument);
  EXPECT_EQ(kAB.all_groups().size(), 3u);
}

TEST(Agents, GroupsAreMemberSets) {
  EXPECT_EQ(G({1, 0}), G({0, 1}));
  EXPECT_TRUE(G({0}).subset_of(G({0, 1})));
  EXPECT_FALSE(G({0, 1}).subset_of(G({1})));
  EXPECT_TRUE(Group::singleton(1).is_singleton(1));
  EXPECT_EQ(G({0, 1}).without(1), G({0}));
  EXPECT_FALSE(G({0}).without(0).has_value());
}

TEST(Parse, GrammarExamples) {
  EXPECT_EQ(F("D{a,b}(p -> q)"), Formula::dist(G({0, 1}), Formula::implies(Formula::var("p"), Formula::var("q"))));
  EXPECT_EQ(F("<D{a}> p"), Formula::neg(Formula::dist(G({0}), Formula::neg(Formula::var("p")))));
  EXPECT_EQ(F("true"), Formula::neg(Formula::bottom()));
  EXPECT_EQ(F("false"), Formula::bottom());
}

TEST(Parse, PrecedenceAndAssociativity) {
  Formula p = Formula::var("p"), q = Formula::var("q"), r = Formula::var("r");
  EXPECT_EQ(F("p -> q -> r"), Formula::implies(p, Formula::implies(q, r)));
  EXPECT_EQ(F("p | q & r"), Formula::disj(p, Formula::conj(q, r)));
  EXPECT_EQ(F("p & q | r"), Formula::disj(Formula::conj(p, q), r));
  EXPECT_EQ(F("p & q & r"), Formula::conj(Formula::conj(p, q), r));
  EXPECT_EQ(F("~p & q"), Formula::conj(Formula::neg(p), q));
  EXPECT_EQ(F("D{a}p & q"), Formula::conj(Formula::dist(G({0}), p), q));
}

TEST(Parse, UnicodeAliases) {
  EXPECT_EQ(F("\xC2\xAC p \xE2\x88\xA7 q \xE2\x86\x92 \xE2\x8A\xA5"), F("~p & q -> false"));
  EXPECT_EQ(parse_sequent("p \xE2\x87\x92 \xE2\x8A\xA4", kAB), parse_sequent("p => true", kAB));
}

TEST(Parse, Errors) {
  EXPECT_THROW(F("D{a}(p"), ParseError);
  EXPECT_THROW(F("D{z}p"), ParseError);
  EXPECT_THROW(F("D{}p"), ParseError);
  EXPECT_THROW(F("p q"), ParseError);
  EXPECT_THROW(F("p $ q"), ParseError);
  EXPECT_THROW(parse_sequent("p", kAB), ParseError);
  try {
    F("p & ");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Parse, Sequents) {
  Sequent s = parse_sequent("p, p, D{a}q => r", kAB);
  EXPECT_EQ(s.antecedent.count(Formula::var("p")), 2u);
  EXPECT_EQ(s.succedent.size(), 1u);
  Sequent e = parse_sequent("=>", kAB);
  EXPECT_TRUE(e.antecedent.empty() && e.succedent.empty());

  TSequent t = parse_tsequent("D{a}p, D{b}q | p | q => r", kAB);
  EXPECT_EQ(t.store.size(), 2u);
  EXPECT_EQ(t.antecedent.count(F("p | q")), 1u);
  TSequent bare = parse_tsequent("p | q => r", kAB);
  EXPECT_TRUE(bare.store.empty());
  EXPECT_EQ(bare.antecedent.count(F("p | q")), 1u);
  EXPECT_THROW(parse_tsequent("p | q => r | ", kAB), ParseError);
}

TEST(Print, RoundTripOnCorpus) {
  Rng rng(7);
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, al, rng.between(1, 14));
    std::string text = format_formula(f, kAB);
    EXPECT_EQ(F(text), f) << text;
    std::string tex = format_formula(f, kAB, latex_notation());
    EXPECT_EQ(F(tex), f) << tex;
  }
}

TEST(Print, Spellings) {
  EXPECT_EQ(format_formula(F("~D{a}~p"), kAB), "<D{a}>p");
  EXPECT_EQ(format_formula(F("~false"), kAB), "true");
  EXPECT_EQ(format_formula(F("(p | q) | r"), kAB), "p | q | r");
  EXPECT_EQ(format_formula(F("p | (q | r)"), kAB), "p | (q | r)");
  EXPECT_EQ(format_formula(F("(p -> q) -> r"), kAB), "(p -> q) -> r");
  EXPECT_EQ(format_formula(F("D{a,b}(p & q)"), kAB, latex_notation()), "D_{a,b}(p \\wedge q)");
  EXPECT_EQ(format_tsequent(TSequent({}, {}, {}), kAB), "| =>");
}

TEST(Weight, Examples) {
  EXPECT_EQ(weight(Formula::bottom()), 1u);
  EXPECT_EQ(weight(F("D{a,b}p")), 2u);
  EXPECT_EQ(weight(F("p & q")), 3u);
  EXPECT_EQ(weight(F("<D{a}>p")), 4u);
}

TEST(Weight, StrictSubterms) {
  Rng rng(11);
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, al, rng.between(1, 12));
    ASSERT_GE(weight(f), 1u);
    for (const Formula& g : subformulas(f)) {
      if (!(g == f)) {
        EXPECT_LT(weight(g), weight(f));
      }
    }
  }
}

TEST(Subformulas, Examples) {
  EXPECT_EQ(subformulas(F("D{a}p")), (FormulaSet{F("p"), F("D{a}p")}));
  EXPECT_EQ(subformulas(F("false")), (FormulaSet{Formula::bottom()}));
  EXPECT_EQ(subformulas(F("~p | q")), (FormulaSet{F("p"), F("~p"), F("q"), F("~p | q")}));
}

TEST(Subformulas, Closed) {
  Rng rng(13);
  Alphabet al{{"p", "q", "r"}, kAB.all_groups()};
  for (int i = 0; i < 200; ++i) {
    FormulaSet s = subformulas(random_formula(rng, al, rng.between(1, 12)));
    for (const Formula& g : s) {
      for (const Formula& h : subformulas(g)) EXPECT_TRUE(s.count(h));
    }
  }
}

TEST(Vocab, Examples) {
  Vocabulary v = vocab(F("D{a,b}(p -> q)"));
  EXPECT_EQ(v.vars, (std::set<std::string>{"p", "q"}));
  EXPECT_EQ(v.agent_list(), (std::vector<AgentId>{0, 1}));
  Vocabulary b = vocab(Formula::bottom());
  EXPECT_TRUE(b.vars.empty());
  EXPECT_EQ(b.agents, 0u);
  Vocabulary m = vocab(FormulaMultiset::of(std::vector<Formula>{F("p"), F("D{a}p")}));
  EXPECT_EQ(m.vars, (std::set<std::string>{"p"}));
  EXPECT_EQ(m.agent_list(), (std::vector<AgentId>{0}));
}

TEST(Projection, Examples) {
  auto M = [](std::vector<Formula> v) { return FormulaMultiset::of(v); };
  EXPECT_EQ(flat_subgroups(M({F("D{a}p"), F("q"), F("D{a,b}r")}), G({0, 1})), M({F("p"), F("r")}));
  EXPECT_EQ(natural_contains_agent(M({F("D{a}p"), F("D{b}q")}), 0), M({F("D{a}p")}));
  EXPECT_TRUE(box_all(FormulaMultiset{}, G({0})).empty());
  EXPECT_EQ(project(M({F("D{a}p"), F("D{a}p")}), Projection::flat, G({0})).count(F("p")), 2u);
}

TEST(Projection, FlatSubgroupsIsUnionOverSubgroups) {
  Rng rng(17);
  Alphabet al{{"p", "q"}, kABCD.all_groups()};
  const auto groups = kABCD.all_groups();
  for (int i = 0; i < 100; ++i) {
    FormulaMultiset m = random_multiset(rng, al, 20, 6);
    for (int k = 0; k < 3; ++k) m.insert(Formula::dist(rng.pick(groups), random_formula(rng, al, 2)));
    for (Group g : groups) {
      FormulaMultiset expect;
      for (Group h : groups) {
        if (h.subset_of(g)) expect.insert_all(flat(m, h));
      }
      EXPECT_EQ(flat_subgroups(m, g), expect);
    }
  }
}

TEST(CanonicalOrder, StrictTotal) {
  Rng rng(19);
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  for (int i = 0; i < 2000; ++i) {
    Formula x = random_formula(rng, al, rng.between(1, 6));
    Formula y = random_formula(rng, al, rng.between(1, 6));
    Formula z = random_formula(rng, al, rng.between(1, 6));
    int rel = (x < y) + (y < x) + (x == y);
    EXPECT_EQ(rel, 1);
    EXPECT_FALSE(x < x);
    if (x < y && y < z) {
      EXPECT_TRUE(x < z);
    }
  }
}

TEST(CanonicalOrder, ConnectiveRanks) {
  std::vector<Formula> ranked{F("p"), F("false"), F("~p"), F("p & p"), F("p | p"), F("p -> p"), F("D{a}p")};
  for (std::size_t i = 0; i + 1 < ranked.size(); ++i) EXPECT_TRUE(ranked[i] < ranked[i + 1]) << i;
}

TEST(Corpus, ExhaustiveCount) {
  Alphabet al{{"p"}, kAB.all_groups()};
  EXPECT_EQ(enumerate_formulas(al, 1).size(), 2u);
  EXPECT_EQ(enumerate_formulas(al, 2).size(), 10u);
  auto all = enumerate_formulas(al, 6);
  EXPECT_EQ(all.size(), 14742u);
  EXPECT_EQ(FormulaSet(all.begin(), all.end()).size(), all.size());
  for (const Formula& f : all) EXPECT_LE(weight(f), 6u);
}

TEST(Corpus, SeededStreamsRepeat) {
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  Rng a(5), b(5);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(random_formula(a, al, 9), random_formula(b, al, 9));
  }
  Rng c(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(weight(random_formula(c, al, 9)), 9u);
}
