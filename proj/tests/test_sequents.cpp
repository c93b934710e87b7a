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

}  // namespace

TEST(Critical, PlainSequents) {
  EXPECT_TRUE(is_critical(S("p, D{a}q => false")));
  EXPECT_FALSE(is_critical(S("p & q =>")));
  EXPECT_TRUE(is_critical(S("=>")));
  EXPECT_FALSE(is_critical(S("=> ~D{a}p")));
}

TEST(Critical, TSequents) {
  EXPECT_TRUE(is_critical_T(T("D{a}r | p => q, D{b}s")));
  EXPECT_FALSE(is_critical_T(T("| D{a}r => q")));
  EXPECT_FALSE(is_critical_T(T("| p => ~q")));
  EXPECT_TRUE(is_critical_T(T("| =>")));
}

TEST(TSequent, StoreMustBeBoxed) {
  EXPECT_THROW(TSequent(FormulaMultiset{F("p")}, {}, {}), std::invalid_argument);
  EXPECT_NO_THROW(TSequent(FormulaMultiset{F("D{a}p")}, {}, {}));
}

TEST(BoxedCount, Examples) {
  EXPECT_EQ(boxed_count(FormulaMultiset{F("D{a}D{b}p")}), 2u);
  EXPECT_EQ(boxed_count(FormulaMultiset{F("p")}), 0u);
  EXPECT_EQ(boxed_count(FormulaMultiset{F("D{a}p"), F("D{a}p")}), 1u);
  EXPECT_EQ(boxed_count(FormulaMultiset{F("D{a}p")}, FormulaMultiset{F("~D{a}p")}), 1u);
}

TEST(BoxedCount, MultiplicityInvariant) {
  Rng rng(3);
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  for (int i = 0; i < 200; ++i) {
    FormulaMultiset m = random_multiset(rng, al, 16, 5);
    FormulaMultiset doubled = m + m;
    EXPECT_EQ(boxed_count(m), boxed_count(doubled));
  }
}

TEST(Measure, Examples) {
  EXPECT_TRUE(measure_lt(MeasureKind::wt_order, S("p =>"), S("p & p =>")));
  EXPECT_FALSE(measure_lt(MeasureKind::wt_order, S("p =>"), S("p =>")));
  EXPECT_TRUE(measure_lt(MeasureKind::lex_order, T("| p => q"), T("D{a}p | p => q")));
  EXPECT_FALSE(measure_lt(MeasureKind::lex_order, T("D{a}p | p => q"), T("D{a}p | p => q")));
  // Equal b, then weight decides.
  EXPECT_TRUE(measure_lt(MeasureKind::lex_order, T("D{a}p | p => q"), T("D{a}p | p & p => q")));
  // Smaller b wins even with larger weight.
  EXPECT_TRUE(measure_lt(MeasureKind::lex_order, T("| p & p & p => q"), T("| D{a}p =>")));
}

TEST(Measure, KindMismatch) {
  EXPECT_THROW(measure_lt(MeasureKind::wt_order, T("| p =>"), T("| p =>")), std::invalid_argument);
  EXPECT_THROW(measure_lt(MeasureKind::lex_order, S("p =>"), S("p =>")), std::invalid_argument);
}

TEST(Measure, DescentAcrossEnumeratedMoves) {
  Alphabet al{{"p", "q"}, kAB.all_groups()};
  for (Logic logic : {Logic::K_D, Logic::KD_D, Logic::KTplus_D}) {
    Rng rng(100 + static_cast<int>(logic));
    const MeasureKind kind = measure_for(logic);
    std::size_t edges = 0;
    for (int i = 0; i < 400; ++i) {
      AnySequent s = pose(logic, random_sequent(rng, al, 14));
      if (logic == Logic::KTplus_D && rng.chance(1, 2)) {
        auto t = std::get<TSequent>(s);
        t.store.insert(Formula::dist(rng.pick(al.groups), random_formula(rng, al, 3)));
        s = t;
      }
      for (const Move& m : enumerate_backward_moves(logic, s)) {
        for (const AnySequent& p : m.premises) {
          ++edges;
          EXPECT_TRUE(measure_lt(kind, p, s)) << format_any(s, kAB) << "  ->  " << format_any(p, kAB);
        }
      }
    }
    EXPECT_GT(edges, 200u);
  }
}
