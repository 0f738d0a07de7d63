#include <gtest/gtest.h>

#include "ctt/error.hpp"
#include "ctt/rewrite.hpp"
#include "ctt/semantics.hpp"
#include "ctt/syntax.hpp"

using namespace ctt;

namespace {

Type T(const std::string& s) { return parse_type(s); }

ModelConfig model(std::map<std::string, int> sizes) {
  ModelConfig m;
  m.base_sizes = std::move(sizes);
  return m;
}

Elem ind(const std::string& base, int i) { return Elem::individual(T(base), i); }

Elem lit(const std::string& text, const std::string& ty, const ModelConfig& m) {
  return parse_elem(text, T(ty), m);
}

const TypeContext kCtx = {{"p", T("e")},        {"q", T("e")},   {"c", T("bot -> bot")},
                          {"r", T("e -> t")},   {"h", T("bot")}, {"u", T("bot")},
                          {"f", T("e -> bot")}};

Term S(const std::string& s) { return parse_slm(s, kCtx); }

}  // namespace

TEST(EvalSlm, IdentityTable) {
  auto m = model({{"e", 3}});
  Elem v = eval_slm(S("\\x:e. x"), m, {});
  ASSERT_EQ(v.kind(), Elem::Kind::Table);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(v.entries()[static_cast<std::size_t>(i)], ind("e", i));
}

TEST(EvalSlm, EtaMuIdentity) {
  auto m = model({{"e", 3}});
  for (int i = 0; i < 3; ++i) {
    Elem v = eval_slm(S("#x:~e. (x p)"), m, {{"p", ind("e", i)}});
    EXPECT_TRUE(ba_equal(v, ind("e", i))) << render(v);
  }
}

TEST(EvalSlm, ConstantFalseBodyIsBottom) {
  auto m = model({{"e", 3}});
  Assignment rho{{"p", ind("e", 0)}, {"c", lit("table{0->0,1->0}", "bot -> bot", m)}};
  Elem v = eval_slm(S("#x:~e. (c (x p))"), m, rho);
  EXPECT_EQ(v.type(), T("e"));
  EXPECT_EQ(v.rank(), 1);
  EXPECT_TRUE(ba_equal(v, Elem::join(1, T("e"), {})));
  rho.insert_or_assign("c", lit("table{0->1,1->1}", "bot -> bot", m));
  EXPECT_TRUE(ba_equal(eval_slm(S("#x:~e. (c (x p))"), m, rho), Elem::meet(1, T("e"), {})));
}

TEST(EvalSlm, ErrorsAndTypeChecks) {
  auto m = model({{"e", 2}});
  EXPECT_THROW(eval_slm(S("(f p)"), m, {{"p", ind("e", 0)}}), Error);
  try {
    eval_slm(S("(f p)"), m, {{"p", ind("e", 0)}});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unassigned);
  }
  // A lambda whose body is a rank-1 shadow has no rank-0 table.
  for (const char* text : {"\\z:e. #x:~e. (x z)", "#x:~e. (x #y:~e. (y p))"}) {
    try {
      eval_slm(S(text), m, {{"p", ind("e", 0)}});
      FAIL() << "expected an error for " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::RankOverflow) << e.what();
    }
  }
}

TEST(EvalSlm, MuNeedsRankCap) {
  auto m = model({{"e", 2}});
  m.rank_cap = 0;
  try {
    eval_slm(S("#x:~e. (x p)"), m, {{"p", ind("e", 0)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankOverflow);
  }
}

TEST(CheckEquation, Examples) {
  auto m = model({{"e", 3}});
  Assignment rho{{"p", ind("e", 0)}, {"q", ind("e", 1)}};
  EXPECT_FALSE(check_equation(S("p"), S("q"), m, rho));
  EXPECT_TRUE(check_equation(S("((\\x:e. x) p)"), S("p"), m, rho));
  EXPECT_THROW(check_equation(S("p"), S("h"), m, rho), Error);
}

TEST(CheckEquation, MuRuleNegationContext) {
  auto m = model({{"e", 2}, {"t", 2}});
  Term lhs = S("((#x:~(e -> t). (c (x r))) q)");
  auto rhs = contract_at(lhs, {}, RuleTag::Mu);
  ASSERT_TRUE(rhs);
  Elem rt = lit("table{a->b,b->a}", "e -> t", m);
  Assignment rho{{"c", lit("table{0->1,1->0}", "bot -> bot", m)}, {"r", rt}, {"q", ind("e", 0)}};
  Elem lv = eval_slm(lhs, m, rho), rv = eval_slm(*rhs, m, rho);
  EXPECT_TRUE(ba_equal(lv, rv));
  // Both sides are the rank-1 complement of the same rank-0 atom (R Q).
  Elem expect = Elem::neg(1, ind("t", 1));
  EXPECT_TRUE(ba_equal(lv, expect)) << render(lv);
  EXPECT_TRUE(ba_equal(rv, expect)) << render(rv);
}

TEST(ClassifyContext, FourClasses) {
  auto m = model({{"e", 2}});
  EXPECT_EQ(classify_context({S("h"), "h"}, m, {}), ContextClass::T1);
  EXPECT_EQ(classify_context({S("#y:~bot. (y (c h))"), "h"}, m,
                             {{"c", lit("table{0->1,1->0}", "bot -> bot", m)}}),
            ContextClass::T2);
  EXPECT_EQ(classify_context({S("(f p)"), "h"}, m,
                             {{"f", lit("table{a->0,b->0}", "e -> bot", m)}, {"p", ind("e", 0)}}),
            ContextClass::T3);
  EXPECT_EQ(classify_context({S("(c h)"), "h"}, m,
                             {{"c", lit("table{0->1,1->1}", "bot -> bot", m)}}),
            ContextClass::T4);
  EXPECT_STREQ(to_string(ContextClass::T3), "T3");
}

TEST(EvalCts, OperatorsKeepRank) {
  auto m = model({{"e", 3}});
  Elem v = eval_cts(parse_cts("and[1](x:bot@0, y:bot@0)"), m,
                    {{"x", Elem::truth(false)}, {"y", Elem::truth(true)}});
  EXPECT_EQ(v.kind(), Elem::Kind::Meet);
  EXPECT_EQ(v.rank(), 1);
  EXPECT_EQ(render(v), "and[1](0,1)");
  EXPECT_TRUE(ba_equal(v, Elem::truth(false)));
}

TEST(EvalCts, BigConjunctionRangesOverDomain) {
  auto m = model({{"e", 3}});
  Elem pt = lit("table{a->1,b->1,c->0}", "e -> bot", m);
  Elem v = eval_cts(parse_cts("(p:e->bot@0 All[1](x:e@0))"), m, {{"p", pt}});
  Elem expect = Elem::meet(1, T("bot"), {Elem::truth(true), Elem::truth(true), Elem::truth(false)});
  EXPECT_TRUE(ba_equal(v, expect));
  EXPECT_FALSE(*bot_value(v));
  pt = lit("table{a->1,b->1,c->1}", "e -> bot", m);
  EXPECT_TRUE(*bot_value(eval_cts(parse_cts("(p:e->bot@0 All[1](x:e@0))"), m, {{"p", pt}})));
}

TEST(EvalCts, UnassignedVariable) {
  auto m = model({{"e", 2}});
  try {
    eval_cts(parse_cts("x:bot@0"), m, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unassigned);
  }
}

TEST(Sequent, AxiomAndExcludedMiddle) {
  std::vector<ModelConfig> fam{model({{"e", 1}}), model({{"e", 2}})};
  Cts a = parse_cts("x:bot@0");
  EXPECT_TRUE(sequent_valid({a}, {a}, fam).valid);
  EXPECT_TRUE(sequent_valid({}, {parse_cts("or[1](x:bot@0, neg[1](x:bot@0))")}, fam).valid);
  Cts pa = parse_cts("(p:e->bot@0 a:e@0)");
  EXPECT_TRUE(sequent_valid({}, {parse_cts("or[1]((p:e->bot@0 a:e@0), neg[1]((p:e->bot@0 a:e@0)))")},
                            fam).valid);
  EXPECT_TRUE(sequent_valid({pa}, {pa}, fam).valid);
}

TEST(Sequent, InvalidWithCounterexample) {
  std::vector<ModelConfig> fam{model({{"e", 2}})};
  Verdict v = sequent_valid({}, {parse_cts("x:bot@0")}, fam);
  EXPECT_FALSE(v.valid);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->second, "{x=0}");
  v = sequent_valid({parse_cts("or[1](x:bot@0, y:bot@0)")}, {parse_cts("x:bot@0")}, fam);
  EXPECT_FALSE(v.valid);
}

TEST(Sequent, RankOneVariablesRangeOverD1) {
  auto m = model({{"e", 2}});
  auto as = enumerate_assignments({CtsVar{"z", T("e"), 1}, CtsVar{"x", T("bot"), 0}}, m);
  EXPECT_EQ(as.size(), 16u * 2u);
  EXPECT_THROW(enumerate_assignments({CtsVar{"z", T("e"), 1}, CtsVar{"w", T("e"), 1}}, m, 100),
               Error);
  // Higher-rank double complement is an identity.
  std::vector<ModelConfig> fam{m};
  Cts z = parse_cts("(p:e->bot@0 z:e@1)");
  EXPECT_TRUE(sequent_valid({z}, {parse_cts("neg[2](neg[2]((p:e->bot@0 z:e@1)))")}, fam).valid);
}

TEST(Sequent, RenderAssignment) {
  Assignment rho{{"x", Elem::truth(true)}, {"p", ind("e", 1)}};
  EXPECT_EQ(render(rho), "{p=b, x=1}");
}

class Harness : public ::testing::TestWithParam<std::string> {};

TEST_P(Harness, SoundOnSmallModels) {
  for (int size = 1; size <= 3; ++size) {
    auto m = model({{"e", size}});
    HarnessReport rep = slm_harness(GetParam(), m, 100, 7 + static_cast<std::uint64_t>(size));
    EXPECT_TRUE(rep.ok()) << rep.records();
    EXPECT_EQ(rep.trials, 100);
    EXPECT_GE(rep.checked, 100) << rep.records();
  }
}

INSTANTIATE_TEST_SUITE_P(Rules, Harness,
                         ::testing::Values("rule1", "rule2", "rule3", "rule4", "rule5", "rule6",
                                           "rule7", "rule8", "rule9", "rule10", "rule11",
                                           "rule12"));

TEST(HarnessExtra, TwoBaseTypes) {
  auto m = model({{"e", 2}, {"t", 2}});
  for (const char* r : {"beta", "eta", "beta-mu", "eta-mu", "mu"}) {
    HarnessReport rep = slm_harness(r, m, 100, 42);
    EXPECT_TRUE(rep.ok()) << rep.records();
    EXPECT_GE(rep.checked, 100);
  }
}

TEST(HarnessExtra, NegativeControlsFail) {
  auto m = model({{"e", 2}});
  HarnessReport unguarded = slm_harness("eta-mu-unguarded", m, 100, 3);
  EXPECT_FALSE(unguarded.ok());
  HarnessReport corrupt = slm_harness("mu-corrupt", m, 20, 3);
  EXPECT_FALSE(corrupt.ok());
  EXPECT_NE(corrupt.records().find("status=fail"), std::string::npos);
}

TEST(HarnessExtra, ReproducibleAndRecords) {
  auto m = model({{"e", 2}});
  HarnessReport a = slm_harness("rule8", m, 30, 11), b = slm_harness("rule8", m, 30, 11);
  EXPECT_EQ(a.records(), b.records());
  EXPECT_NE(a.records().find("rule=rule8 seed=11 trials=30"), std::string::npos);
  EXPECT_THROW(slm_harness("rule99", m, 1, 0), Error);
}
