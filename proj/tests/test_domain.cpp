#include <gtest/gtest.h>

#include <random>

#include "ctt/domain.hpp"
#include "ctt/error.hpp"
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

// Replaces every atom by `_` so only the operator skeleton remains.
std::string shape(const Elem& e) {
  if (e.is_atom()) return "_";
  std::string out = e.kind() == Elem::Kind::Neg    ? "neg"
                    : e.kind() == Elem::Kind::Meet ? "and"
                                                   : "or";
  out += std::to_string(e.rank()) + "(";
  for (const auto& c : e.children()) out += shape(c) + " ";
  return out + ")";
}

}  // namespace

TEST(Enumerate, RankZeroIndividuals) {
  auto m = model({{"e", 3}});
  auto d = enumerate_domain(m, T("e"), 0);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(render(d[0]) + render(d[1]) + render(d[2]), "abc");
  EXPECT_EQ(enumerate_domain(m, T("~e"), 0).size(), 8u);
  EXPECT_EQ(enumerate_domain(m, T("e -> e"), 0).size(), 27u);
}

TEST(Enumerate, RankOneBot) {
  auto m = model({});
  EXPECT_EQ(enumerate_domain(m, Type::bot(), 1).size(), 16u);
}

TEST(Enumerate, RankOneThreeAtomsPairwiseDistinct) {
  auto m = model({{"e", 3}});
  auto d = enumerate_domain(m, T("e"), 1);
  ASSERT_EQ(d.size(), 256u);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      ASSERT_FALSE(ba_equal(d[i], d[j])) << render(d[i]) << " vs " << render(d[j]);
}

TEST(Enumerate, Caps) {
  EXPECT_THROW(enumerate_domain(model({{"e", 2}}), T("e"), 2), Error);
  EXPECT_THROW(model({{"e", 9}}).validate(), Error);
  EXPECT_THROW(enumerate_domain(model({{"e", 3}}), T("~e"), 1), Error);
  EXPECT_THROW(enumerate_domain(model({}), T("e"), 0), Error);
}

TEST(BaEqual, SpecExamples) {
  Type e = T("e");
  Elem a = ind("e", 0);
  EXPECT_TRUE(ba_equal(Elem::meet(1, e, {a, Elem::neg(1, a)}), Elem::join(1, e, {})));
  EXPECT_FALSE(ba_equal(Elem::neg(2, Elem::neg(1, a)), a));
  EXPECT_TRUE(ba_equal(Elem::neg(1, Elem::neg(1, a)), a));
  EXPECT_TRUE(ba_equal(Elem::neg(2, Elem::neg(2, Elem::neg(1, a))), Elem::neg(1, a)));
}

TEST(BaEqual, DistinctIndividualsAreIndependentAtRankOne) {
  Elem a = ind("e", 0), b = ind("e", 1);
  EXPECT_FALSE(ba_equal(Elem::meet(1, T("e"), {a, b}), Elem::join(1, T("e"), {})));
  EXPECT_FALSE(ba_equal(a, b));
}

TEST(BaEqual, BotIsTwoValued) {
  Elem zero = Elem::truth(false), one = Elem::truth(true);
  EXPECT_TRUE(ba_equal(Elem::meet(1, Type::bot(), {zero, one}), zero));
  EXPECT_TRUE(ba_equal(Elem::neg(2, zero), one));
  Elem x = Elem::symbol("x", Type::bot());
  EXPECT_TRUE(ba_equal(Elem::join(1, Type::bot(), {x, Elem::neg(1, x)}), one));
  EXPECT_FALSE(ba_equal(x, one));
  EXPECT_EQ(bot_value(Elem::join(2, Type::bot(), {x, Elem::neg(1, x)})), true);
  EXPECT_EQ(bot_value(x), std::nullopt);
}

TEST(BaEqual, TypeMismatchThrows) {
  EXPECT_THROW(ba_equal(ind("e", 0), Elem::truth(true)), Error);
}

TEST(BaLeq, Examples) {
  Type e = T("e");
  Elem a = ind("e", 0), b = ind("e", 1);
  EXPECT_TRUE(ba_leq(Elem::join(1, e, {}), a));
  EXPECT_TRUE(ba_leq(a, Elem::join(1, e, {a, b})));
  EXPECT_FALSE(ba_leq(a, b));
  EXPECT_TRUE(ba_leq(a, Elem::meet(1, e, {})));
}

TEST(Apply, TableLookupAndSymbolic) {
  auto m = model({{"e", 2}});
  Elem f = parse_elem("table{a->1, b->0}", T("~e"), m);
  EXPECT_EQ(apply_elem(f, ind("e", 0), m), Elem::truth(true));
  EXPECT_EQ(apply_elem(f, ind("e", 1), m), Elem::truth(false));
  Elem s = Elem::symbol("x", T("e"));
  EXPECT_EQ(render(apply_elem(f, s, m)), "(table{a->1, b->0} x)");
  EXPECT_THROW(apply_elem(f, Elem::truth(true), m), Error);
}

TEST(Apply, SpecExamples) {
  auto m = model({{"e", 2}, {"t", 2}});
  Elem p = Elem::symbol("p", T("e -> t")), q = Elem::symbol("q", T("e -> t"));
  Elem r = Elem::symbol("r", T("e -> t")), s = Elem::symbol("s", T("e -> t"));
  Elem a = Elem::symbol("a", T("e"));
  EXPECT_EQ(render(apply_elem(Elem::meet(1, T("e -> t"), {p, q}), a, m)),
            "and[1]((p a),(q a))");
  EXPECT_EQ(render(apply_elem(r, Elem::neg(1, a), m)), "neg[1]((r a))");
  Elem b = Elem::symbol("b", T("e"));
  Elem out = apply_elem(Elem::meet(2, T("e -> t"), {p, q}), Elem::join(2, T("e"), {a, b}), m);
  EXPECT_EQ(render(out), "and[2](or[2]((p a),(p b)), or[2]((q a),(q b)))");
  // Lower-rank functor: the argument's operator ends up outermost.
  Elem out2 = apply_elem(Elem::meet(1, T("e -> t"), {p, q}), Elem::join(2, T("e"), {a, b}), m);
  EXPECT_EQ(render(out2), "or[2](and[1]((p a),(q a)), and[1]((p b),(q b)))");
}

TEST(Apply, EmptyMeetShiftsType) {
  auto m = model({{"e", 2}});
  Elem top = Elem::meet(1, T("~e"), {});
  Elem out = apply_elem(top, ind("e", 0), m);
  EXPECT_EQ(out.type(), Type::bot());
  EXPECT_EQ(render(out), "and[1]()");
  EXPECT_EQ(bot_value(out), true);
}

// The expansion conditions, exhaustively over |D0_e| = 2 with rank-1 shadows.
TEST(Apply, ExpansionConditionsExhaustive) {
  auto m = model({{"e", 2}, {"t", 2}});
  for (const char* tau : {"t", "bot"}) {
    Type fn = Type::arrow(T("e"), T(tau));
    Type cod = T(tau);
    auto tables = enumerate_domain(m, fn, 0);
    auto shadows = enumerate_domain(m, T("e"), 1);
    auto atoms = enumerate_domain(m, T("e"), 0);
    for (const auto& r : tables) {
      for (const auto& a : shadows) {
        ASSERT_TRUE(ba_equal(apply_elem(r, Elem::neg(1, a), m),
                             Elem::neg(1, apply_elem(r, a, m))));
        for (const auto& b : shadows) {
          ASSERT_TRUE(ba_equal(apply_elem(r, Elem::meet(1, T("e"), {a, b}), m),
                               Elem::meet(1, cod, {apply_elem(r, a, m), apply_elem(r, b, m)})));
          ASSERT_TRUE(ba_equal(apply_elem(r, Elem::join(1, T("e"), {a, b}), m),
                               Elem::join(1, cod, {apply_elem(r, a, m), apply_elem(r, b, m)})));
        }
      }
      std::vector<Elem> imgs;
      for (const auto& x : atoms) imgs.push_back(apply_elem(r, x, m));
      ASSERT_TRUE(ba_equal(apply_elem(r, Elem::meet(1, T("e"), atoms), m),
                           Elem::meet(1, cod, imgs)));
      ASSERT_TRUE(ba_equal(apply_elem(r, Elem::join(1, T("e"), atoms), m),
                           Elem::join(1, cod, imgs)));
      // Functor side: p, q range over tables, a over atoms and shadows.
      for (const auto& q : tables) {
        for (const auto& a : atoms) {
          Elem pa = apply_elem(r, a, m), qa = apply_elem(q, a, m);
          ASSERT_TRUE(ba_equal(apply_elem(Elem::neg(1, r), a, m), Elem::neg(1, pa)));
          ASSERT_TRUE(ba_equal(apply_elem(Elem::meet(1, fn, {r, q}), a, m),
                               Elem::meet(1, cod, {pa, qa})));
          ASSERT_TRUE(ba_equal(apply_elem(Elem::join(1, fn, {r, q}), a, m),
                               Elem::join(1, cod, {pa, qa})));
        }
      }
      std::vector<Elem> at_a;
      for (const auto& p : tables) at_a.push_back(apply_elem(p, atoms[0], m));
      ASSERT_TRUE(ba_equal(apply_elem(Elem::meet(1, fn, tables), atoms[0], m),
                           Elem::meet(1, cod, at_a)));
      ASSERT_TRUE(ba_equal(apply_elem(Elem::join(1, fn, tables), atoms[0], m),
                           Elem::join(1, cod, at_a)));
    }
  }
}

TEST(Canonicalize, SectionExamples) {
  auto m = model({{"e", 2}, {"t", 2}});
  Elem c1 = canonicalize(
      parse_cts("((and[1](p:e->~t@0, q:e->~t@0) neg[1](a:e@0)) or[2](r:t@0, s:t@0))"), m);
  EXPECT_EQ(render(c1, true),
            "or[2](and[1](neg[1](((p a) r)), neg[1](((q a) r))), "
            "and[1](neg[1](((p a) s)), neg[1](((q a) s))))");
  Elem c2 = canonicalize(
      parse_cts("(and[1](p:~t@0, q:~t@0) (neg[1](a:e->t@0) or[2](r:e@0, s:e@0)))"), m);
  EXPECT_EQ(render(c2, true),
            "or[2](and[1](neg[1]((p (a r))), neg[1]((q (a r)))), "
            "and[1](neg[1]((p (a s))), neg[1]((q (a s)))))");
  Elem c3 = canonicalize(
      parse_cts("(and[2](p:~t@0, q:~t@0) (neg[1](a:e->t@0) or[2](r:e@0, s:e@0)))"), m);
  EXPECT_EQ(render(c3, true),
            "and[2](or[2](neg[1]((p (a r))), neg[1]((p (a s)))), "
            "or[2](neg[1]((q (a r))), neg[1]((q (a s)))))");
  EXPECT_EQ(shape(c1), shape(c2));
  EXPECT_NE(shape(c2), shape(c3));
}

TEST(Canonicalize, DemoReadings) {
  auto m = model({{"e", 2}});
  CtsContext ctx{{"L", {T("e -> ~e"), 0}}, {"A", {T("e"), 0}}, {"B", {T("e"), 0}},
                 {"C", {T("e"), 0}}, {"D", {T("e"), 0}}};
  auto c1 = canonicalize(parse_cts("((L or[1](C,D)) and[1](A,B))", ctx), m);
  auto c2 = canonicalize(parse_cts("((L or[1](C,D)) and[2](A,B))", ctx), m);
  EXPECT_EQ(render(c1), "or[1](and[1](((L C) A),((L C) B)), and[1](((L D) A),((L D) B)))");
  EXPECT_EQ(render(c2), "and[2](or[1](((L C) A),((L D) A)), or[1](((L C) B),((L D) B)))");
}

TEST(Canonicalize, FixpointOnCanonicalInput) {
  auto m = model({{"e", 2}});
  Cts t = parse_cts("and[1]((p:~e@0 x:e@0), neg[1]((p y:e@0)))");
  Elem c = canonicalize(t, m);
  EXPECT_EQ(render(c), "and[1]((p x), neg[1]((p y)))");
}

TEST(Canonicalize, BigOperatorsExpandOverTheDomain) {
  auto m = model({{"e", 3}});
  Elem c = canonicalize(parse_cts("(f:~e@0 All[1](z:e@0))"), m);
  EXPECT_EQ(render(c), "and[1]((f a),(f b),(f c))");
  Elem fam = canonicalize(parse_cts("Ex[1](z:e@0; (f:~e@0 z))"), m);
  EXPECT_EQ(render(fam), "or[1]((f a),(f b),(f c))");
  EXPECT_THROW(canonicalize(parse_cts("(f:~e@0 All[1](z:e@1))"), m), Error);
}

// Denotation is preserved: instantiating the canonical form agrees with
// interpreting the molecular input directly, under every rank-0 assignment.
TEST(Canonicalize, PreservesDenotation) {
  auto m = model({{"e", 2}, {"t", 2}});
  std::vector<std::string> exprs = {
      "((and[1](p:e->~t@0, q:e->~t@0) neg[1](a:e@0)) or[2](r:t@0, s:t@0))",
      "(and[1](p:~t@0, q:~t@0) (neg[1](a:e->t@0) or[2](r:e@0, s:e@0)))",
      "(and[2](p:~t@0, q:~t@0) (neg[1](a:e->t@0) or[2](r:e@0, s:e@0)))",
  };
  std::mt19937 rng(3);
  for (const auto& text : exprs) {
    Cts t = parse_cts(text);
    Elem canon = canonicalize(t, m);
    for (int trial = 0; trial < 200; ++trial) {
      Assignment rho;
      for (const auto& v : free_vars(t)) {
        auto dom = enumerate_domain(m, v.type, 0);
        rho.insert_or_assign(v.name, dom[rng() % dom.size()]);
      }
      ASSERT_TRUE(ba_equal(interpret_cts(t, m, rho, false), instantiate(canon, rho, m)));
    }
  }
}

TEST(Tidy, FlattensAndDeduplicates) {
  Type e = T("e");
  Elem a = ind("e", 0), b = ind("e", 1);
  Elem x = Elem::meet(1, e, {Elem::meet(1, e, {a, b}), a, Elem::join(1, e, {b})});
  EXPECT_EQ(render(tidy(x)), "and[1](a, b, or[1](b))");
  Elem y = Elem::meet(2, e, {Elem::meet(1, e, {a, b}), b});
  EXPECT_EQ(render(tidy(y)), "and[2](and[1](a,b), b)");
}

TEST(ParseElem, LiteralsAndErrors) {
  auto m = model({{"e", 2}});
  EXPECT_EQ(render(parse_elem("or[1](a, neg[1](b))", T("e"), m)), "or[1](a, neg[1](b))");
  EXPECT_THROW(parse_elem("table{a->1}", T("~e"), m), Error);
  EXPECT_THROW(parse_elem("table{a->1, c->0}", T("~e"), m), Error);
  EXPECT_THROW(parse_elem("2", Type::bot(), m), Error);
  EXPECT_THROW(parse_elem("a", Type::bot(), m), Error);
  Elem f = parse_elem("table{b->0, a->1}", T("~e"), m);
  EXPECT_EQ(render(f), "table{a->1, b->0}");
}

TEST(Iso, WorkedExample) {
  auto m = model({{"e", 3}});
  Elem out = iso_from_sets(m, T("e"), {{true, false, false}, {false, true, true}});
  EXPECT_EQ(render(out), "or[1](and[1](a, neg[1](b), neg[1](c)), and[1](neg[1](a), b, c))");
  // Same reading through the ~~e table.
  auto tables = enumerate_domain(m, T("~e"), 0);
  auto keys = rank0_atoms(m, T("~e"));
  std::vector<Elem> entries;
  for (const auto& g : *keys) {
    std::string r = render(g);
    entries.push_back(Elem::truth(r == "table{a->1, b->0, c->0}" ||
                                  r == "table{a->0, b->1, c->1}"));
  }
  Elem f = Elem::table(T("~~e"), keys, entries);
  EXPECT_TRUE(ba_equal(iso_i(f, m), out));
  EXPECT_EQ(render(iso_i(f, m), true), render(out, true));
}

TEST(Iso, BottomAndTop) {
  auto m = model({{"e", 3}});
  auto keys = rank0_atoms(m, T("~e"));
  Elem none = Elem::table(T("~~e"), keys, std::vector<Elem>(keys->size(), Elem::truth(false)));
  Elem all = Elem::table(T("~~e"), keys, std::vector<Elem>(keys->size(), Elem::truth(true)));
  EXPECT_EQ(render(iso_i(none, m)), "or[1]()");
  EXPECT_TRUE(ba_equal(iso_i(all, m), Elem::meet(1, T("e"), {})));
  EXPECT_EQ(iso_i(all, m).children().size(), 8u);
}

TEST(Iso, HigherRankIsStructural) {
  auto m = model({{"e", 1}});
  auto f = enumerate_domain(m, T("~~e"), 0);
  Elem x = Elem::meet(1, T("~~e"), {f[1], Elem::neg(1, f[2])});
  Elem y = iso_i(x, m);
  EXPECT_EQ(y.rank(), 2);
  EXPECT_EQ(y.kind(), Elem::Kind::Meet);
  EXPECT_EQ(y.child(1).kind(), Elem::Kind::Neg);
  EXPECT_EQ(y.child(1).rank(), 2);
}

TEST(Iso, IterateParity) {
  auto m = model({{"e", 1}});
  auto f2 = enumerate_domain(m, T("~~e"), 0);
  EXPECT_EQ(iso_iterate(f2[3], m), iso_i(f2[3], m));
  auto f3 = enumerate_domain(m, T("~~~e"), 0);
  Elem odd = iso_iterate(f3[5], m);
  EXPECT_EQ(odd.type(), T("~e"));
  EXPECT_EQ(odd.rank(), 1);
  auto keys = rank0_atoms(m, T("~~~e"));
  std::vector<Elem> entries;
  for (std::size_t i = 0; i < keys->size(); ++i) entries.push_back(Elem::truth(i % 3 == 0));
  Elem f4 = Elem::table(T("~~~~e"), keys, entries);
  Elem even = iso_iterate(f4, m);
  EXPECT_EQ(even.type(), T("e"));
  EXPECT_EQ(even.rank(), 2);
  ModelConfig low = m;
  low.rank_cap = 1;
  EXPECT_THROW(iso_iterate(f4, low), Error);
  EXPECT_THROW(iso_iterate(enumerate_domain(m, T("~e"), 0)[0], m), Error);
}

// Corollary 4 at |D0_e| = 1: the double reduction of ~~~~e is injective.
TEST(Iso, FourNegationsInjectiveAtSizeOne) {
  auto m = model({{"e", 1}});
  auto d1 = enumerate_domain(m, T("e"), 1);  // 4 generators of rank 2
  auto fs = enumerate_domain(m, T("~~~~e"), 0);
  ASSERT_EQ(fs.size(), 65536u);
  std::set<std::vector<bool>> seen;
  for (std::size_t i = 0; i < fs.size(); i += 97) {
    Elem y = iso_iterate(fs[i], m);
    ASSERT_TRUE(seen.insert(truth_table(y, 2, d1)).second) << i;
  }
}
