#include <gtest/gtest.h>

#include "ctt/error.hpp"
#include "ctt/prover.hpp"
#include "ctt/semantics.hpp"
#include "ctt/syntax.hpp"
#include "support/mutations.hpp"

using namespace ctt;
using ctt::testing::demo_canonical;
using ctt::testing::demo_decls;
using ctt::testing::demo_molecular;

namespace {

Sequent seq(const std::string& text) { return parse_sequent(text); }

Sequent demo_seq(const std::string& text) {
  CtsContext ctx;
  parse_cts("L:e->~e@0", ctx);
  for (const char* n : {"A", "B", "C", "D"}) parse_cts(std::string(n) + ":e@0", ctx);
  return parse_sequent(text, ctx);
}

}  // namespace

TEST(SequentText, ParseAndRender) {
  Sequent s = seq("x:bot@0, and[1](x, y:bot@0) => y, x");
  EXPECT_EQ(s.ante.size(), 2u);
  EXPECT_EQ(s.succ.size(), 2u);
  // Each member is rendered self-contained.
  EXPECT_EQ(render(s), "x:bot@0, and[1](x:bot@0,y:bot@0) => y:bot@0, x:bot@0");
  EXPECT_TRUE(parse_sequent(render(s)).same_as(s));
  // Set semantics: duplicates disappear.
  EXPECT_EQ(seq("x:bot@0, x => x").ante.size(), 1u);
  EXPECT_EQ(render(seq("=> x:bot@0")), "=> x:bot@0");
  EXPECT_EQ(render(seq("x:bot@0 =>")), "x:bot@0 =>");
  EXPECT_THROW(seq("a:e@0 => a"), Error);
  EXPECT_THROW(seq("x:bot@0"), Error);
}

TEST(RuleIds, RoundTripAndCount) {
  auto rules = all_cts_rules();
  EXPECT_EQ(rules.size(), 31u);
  for (const auto& r : rules) EXPECT_EQ(parse_rule_id(to_string(r)), r);
  EXPECT_EQ(to_string(parse_rule_id("negLr")), "negLr");
  EXPECT_THROW(parse_rule_id("impL"), Error);
}

TEST(CheckRule, Axiom) {
  Sequent s = seq("x:bot@0, y:bot@0 => x, z:bot@0");
  EXPECT_TRUE(check_rule_instance(s, {}, parse_rule_id("Ax")).ok);
  RuleCheck bad = check_rule_instance(seq("x:bot@0 => y:bot@0"), {}, parse_rule_id("Ax"));
  EXPECT_FALSE(bad.ok);
  EXPECT_FALSE(bad.violation.empty());
}

TEST(CheckRule, ConjunctionRight) {
  CtsContext ctx;
  Sequent c = parse_sequent("g:bot@0 => and[2](a:bot@1, b:bot@0), d:bot@0", ctx);
  std::vector<Sequent> p{parse_sequent("g => a, d", ctx), parse_sequent("g => b, d", ctx)};
  EXPECT_TRUE(check_rule_instance(c, p, parse_rule_id("andR")).ok);
  // Premises follow the schema order.
  std::swap(p[0], p[1]);
  EXPECT_FALSE(check_rule_instance(c, p, parse_rule_id("andR")).ok);
  std::swap(p[0], p[1]);
  p.pop_back();
  EXPECT_FALSE(check_rule_instance(c, p, parse_rule_id("andR")).ok);
}

TEST(CheckRule, NegationLeftWithRankJumpRejected) {
  auto good = ctt::testing::subst_case("negLr", 0, 1);
  EXPECT_TRUE(check_rule_instance(good.conclusion, {good.premise}, parse_rule_id("negLr")).ok);
  auto bad = ctt::testing::subst_case("negLr", 1, 1);
  RuleCheck r = check_rule_instance(bad.conclusion, {bad.premise}, parse_rule_id("negLr"));
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.violation.find("requires h+1 <= k"), std::string::npos) << r.violation;
  EXPECT_NE(r.violation.find("h=1, k=1"), std::string::npos) << r.violation;
}

TEST(CheckRule, DoubleLineBothDirections) {
  for (const auto& c : ctt::testing::unmutated()) {
    CtsRuleId id = parse_rule_id(c.rule);
    EXPECT_TRUE(check_rule_instance(c.conclusion, {c.premise}, id, Direction::Down).ok) << c.rule;
    EXPECT_TRUE(check_rule_instance(c.premise, {c.conclusion}, id, Direction::Up).ok) << c.rule;
    // Down read upside down is not an instance.
    EXPECT_FALSE(check_rule_instance(c.premise, {c.conclusion}, id, Direction::Down).ok) << c.rule;
  }
}

TEST(CheckRule, TenMutationsRejected) {
  auto ms = ctt::testing::mutations();
  ASSERT_EQ(ms.size(), 10u);
  for (const auto& c : ms) {
    RuleCheck r = check_rule_instance(c.conclusion, {c.premise}, parse_rule_id(c.rule));
    EXPECT_FALSE(r.ok) << c.rule;
    EXPECT_NE(r.violation.find("requires h"), std::string::npos) << c.rule << ": " << r.violation;
  }
}

TEST(CheckRule, BigOperatorIntroduction) {
  CtsContext ctx;
  Sequent c = parse_sequent("All[1](x:e@0; (f:~e@0 x)) => (f a:e@0)", ctx);
  Sequent p = parse_sequent("All[1](x:e@0; (f x)), (f a) => (f a)", ctx);
  EXPECT_TRUE(check_rule_instance(c, {p}, parse_rule_id("allL")).ok);
  // Eigenvariable must be fresh.
  Sequent c2 = parse_sequent("(f a) => All[1](x:e@0; (f x))", ctx);
  EXPECT_FALSE(check_rule_instance(c2, {parse_sequent("(f a) => (f a)", ctx)},
                                   parse_rule_id("allR"))
                   .ok);
  EXPECT_TRUE(check_rule_instance(c2, {parse_sequent("(f a) => (f y:e@0)", ctx)},
                                  parse_rule_id("allR"))
                  .ok);
}

TEST(Derivations, OneNodeAxiom) {
  Derivation d{"n1", parse_rule_id("Ax"), Direction::Down, {}, seq("x:bot@0 => x"), {}};
  EXPECT_TRUE(check_derivation(d).ok);
  EXPECT_EQ(height(d), 1);
  EXPECT_EQ(size(d), 1);
}

TEST(Derivations, ExcludedMiddleAtRankOne) {
  std::string text =
      "node a rule=Ax dir=down pos=- concl=x:bot@0 => x premises=-\n"
      "node b rule=negR dir=down pos=- concl==> x:bot@0, neg[1](x) premises=a\n"
      "node c rule=orR dir=down pos=- concl==> or[1](x:bot@0, neg[1](x)) premises=b\n";
  Derivation d = parse_derivation(text);
  EXPECT_EQ(d.id, "c");
  DerivationCheck r = check_derivation(d);
  EXPECT_TRUE(r.ok) << r.node << ": " << r.violation;
  EXPECT_TRUE(sequent_valid(d.conclusion.ante, d.conclusion.succ, standard_family()).valid);
}

TEST(Derivations, HandBuiltScopeChain) {
  Derivation d = parse_derivation(ctt::testing::demo_reading1_derivation());
  DerivationCheck r = check_derivation(d);
  EXPECT_TRUE(r.ok) << r.node << ": " << r.violation;
  EXPECT_EQ(size(d), 5);
  EXPECT_TRUE(d.conclusion.same_as(
      demo_seq(demo_molecular(1) + " => " + demo_canonical(1))));
}

TEST(Derivations, HandBuiltScopeChainReadingTwo) {
  Derivation d = parse_derivation(ctt::testing::demo_reading2_derivation());
  DerivationCheck r = check_derivation(d);
  EXPECT_TRUE(r.ok) << r.node << ": " << r.violation;
  EXPECT_TRUE(d.conclusion.same_as(
      demo_seq(demo_molecular(2) + " => " + demo_canonical(2))));
  // Swapping the first step's branch breaks the side condition.
  std::string text = ctt::testing::demo_reading2_derivation();
  text.replace(text.find("rule=andLr"), 10, "rule=andLl");
  EXPECT_FALSE(check_derivation(parse_derivation(text)).ok);
}

TEST(Derivations, RoundTripText) {
  Derivation d = parse_derivation(ctt::testing::demo_reading1_derivation());
  std::string once = render(d);
  Derivation again = parse_derivation(once);
  EXPECT_EQ(render(again), once);
  EXPECT_TRUE(check_derivation(again).ok);
  EXPECT_TRUE(again.conclusion.same_as(d.conclusion));
}

TEST(Derivations, FailingNodeLocated) {
  auto bad = ctt::testing::subst_case("negLr", 1, 1);
  // Make the premise an axiom so only the substitution step is wrong.
  Cts q = bad.premise.succ[0];
  Sequent prem = Sequent::make(bad.premise.ante, {bad.premise.ante[0], q});
  Sequent concl = Sequent::make(bad.conclusion.ante, {bad.premise.ante[0], q});
  Derivation leaf{"leaf", parse_rule_id("Ax"), Direction::Down, {}, prem, {}};
  EXPECT_TRUE(check_derivation(leaf).ok);
  Derivation step{"step", parse_rule_id("negLr"), Direction::Down, {}, concl, {leaf}};
  Derivation root{"root", parse_rule_id("orR"), Direction::Down, {},
                  Sequent::make(concl.ante, {Cts::disj(1, concl.succ[0], concl.succ[1])}), {step}};
  DerivationCheck r = check_derivation(root);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.node, "step");
  EXPECT_EQ(r.path, std::vector<int>{0});
  EXPECT_NE(r.violation.find("requires h+1 <= k"), std::string::npos) << r.violation;
}

TEST(Derivations, ParseErrorsCarryLine) {
  try {
    parse_derivation("node a rule=Ax dir=down pos=- concl=x:bot@0 => x premises=-\nnode b rule=Ax\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_derivation("node a rule=Ax dir=down pos=- concl=x:bot@0 => x premises=zz\n"),
               Error);
  EXPECT_THROW(parse_derivation(""), Error);
}

TEST(Prove, Axiom) {
  auto d = prove(seq("x:bot@0 => x"), 5);
  ASSERT_TRUE(d);
  EXPECT_EQ(to_string(d->rule), "Ax");
  EXPECT_TRUE(check_derivation(*d).ok);
}

TEST(Prove, DistinctAtomsAbsent) {
  EXPECT_FALSE(prove(seq("x:bot@0 => y:bot@0"), 30));
  EXPECT_THROW(prove(seq("x:bot@0 => x"), 0), Error);
}

TEST(Prove, ScopeReadingsBothWays) {
  for (int k : {1, 2}) {
    for (bool forward : {true, false}) {
      std::string a = demo_molecular(k), b = demo_canonical(k);
      Sequent goal = demo_seq(forward ? a + " => " + b : b + " => " + a);
      auto d = prove(goal, 30);
      ASSERT_TRUE(d) << "k=" << k << " forward=" << forward;
      DerivationCheck r = check_derivation(*d);
      EXPECT_TRUE(r.ok) << r.node << ": " << r.violation;
      EXPECT_TRUE(d->conclusion.same_as(goal));
      EXPECT_LE(height(*d), 30);
    }
  }
  // The readings are not interchangeable.
  EXPECT_FALSE(prove(demo_seq(demo_canonical(2) + " => " + demo_canonical(1)), 30));
}

TEST(Prove, ClassicalTautologies) {
  for (const char* t : {"=> or[1](x:bot@0, neg[1](x))", "neg[1](neg[1](x:bot@0)) => x",
                        "and[1](x:bot@0, y:bot@0) => or[1](y, x)",
                        "=> neg[2](and[1](x:bot@0, neg[1](x)))"}) {
    auto d = prove(seq(t), 30);
    ASSERT_TRUE(d) << t;
    EXPECT_TRUE(check_derivation(*d).ok) << t;
  }
  EXPECT_FALSE(prove(seq("or[1](x:bot@0, y:bot@0) => x"), 30));
}

TEST(Prove, QuantifierWitness) {
  auto d = prove(seq("All[1](x:e@0; (f:~e@0 x)) => (f a:e@0)"), 10);
  ASSERT_TRUE(d);
  EXPECT_TRUE(check_derivation(*d).ok);
  d = prove(seq("(f:~e@0 a:e@0) => Ex[1](x:e@0; (f x))"), 10);
  ASSERT_TRUE(d);
  EXPECT_TRUE(check_derivation(*d).ok);
}

TEST(Prove, OutputsAreSemanticallyValid) {
  for (const char* t : {"neg[1](neg[1](x:bot@0)) => x", "=> or[1](x:bot@0, neg[1](x))"}) {
    auto d = prove(seq(t), 30);
    ASSERT_TRUE(d);
    EXPECT_TRUE(sequent_valid(d->conclusion.ante, d->conclusion.succ, standard_family()).valid);
  }
}

TEST(CtsHarness, AllRulesAgreeWithSemantics) {
  HarnessReport rep = cts_harness("all", standard_family(), 500, 2024);
  EXPECT_TRUE(rep.ok()) << rep.records();
  EXPECT_GE(rep.checked, 500) << rep.records();
}

TEST(CtsHarness, EachRuleChecked) {
  for (const auto& r : all_cts_rules()) {
    HarnessReport rep = cts_harness(to_string(r), standard_family(), 20, 5);
    EXPECT_TRUE(rep.ok()) << rep.records();
    EXPECT_GE(rep.checked, 20) << to_string(r) << "\n" << rep.records();
  }
  EXPECT_THROW(cts_harness("nope", standard_family(), 1, 0), Error);
}
