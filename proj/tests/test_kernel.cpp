// Term kernel: interning, smart constructors, negation normal form, display.
//
// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kmt/term.hpp"
#include "kmt/theories/theories.hpp"

using namespace kmt;

TEST_CASE("interning is canonical") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  TermId b = inat_gt("x", 1);
  CHECK(a == b);

  TermId p = st.mk_seq(st.mk_star(inat_inc("x")), inat_gt("x", 2));
  TermId q = st.mk_seq(st.mk_star(inat_inc("x")), inat_gt("x", 2));
  CHECK(p == q);

  CHECK(inat_gt("x", 1) != inat_gt("x", 2));
  CHECK(inat_gt("x", 1) != inat_gt("y", 1));
  CHECK(st.zero() == 0);
  CHECK(st.one() == 1);
  CHECK(st.zero() != st.one());
}

TEST_CASE("plus flattens, deduplicates, sorts, drops zero") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  TermId b = inat_gt("y", 3);
  TermId c = inat_gt("z", 0);

  CHECK(st.mk_plus({a, b}) == st.mk_plus({b, a}));
  CHECK(st.mk_plus({a, a}) == a);
  CHECK(st.mk_plus({a, st.zero()}) == a);
  CHECK(st.mk_plus({}) == st.zero());
  CHECK(st.mk_plus({st.zero()}) == st.zero());
  CHECK(st.mk_plus({st.plus2(a, b), c}) == st.mk_plus({a, b, c}));
  CHECK(st.mk_plus({st.plus2(a, b), st.plus2(b, c)}) == st.mk_plus({a, b, c}));

  Node n = st.node(st.mk_plus({a, b, c}));
  CHECK(n.tag == Tag::Plus);
  CHECK(n.kids.size() == 3);
}

TEST_CASE("seq annihilates on zero, elides one, associates right") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  TermId m = inat_inc("x");
  TermId n = inat_inc("y");

  CHECK(st.mk_seq(st.zero(), m) == st.zero());
  CHECK(st.mk_seq(m, st.zero()) == st.zero());
  CHECK(st.mk_seq(st.one(), m) == m);
  CHECK(st.mk_seq(m, st.one()) == m);
  CHECK(st.mk_seq(st.mk_seq(a, m), n) == st.mk_seq(a, st.mk_seq(m, n)));
  CHECK(st.seq_of({a, m, n}) == st.mk_seq(a, st.mk_seq(m, n)));
  CHECK(st.seq_of({}) == st.one());
  CHECK(st.seq_of({m}) == m);
}

TEST_CASE("star collapses trivial bodies") {
  TermStore& st = store();
  TermId m = inat_inc("x");
  CHECK(st.mk_star(st.zero()) == st.one());
  CHECK(st.mk_star(st.one()) == st.one());
  CHECK(st.mk_star(m) != st.one());
  CHECK(st.tag(st.mk_star(m)) == Tag::Star);
  CHECK(st.mk_star(m) == st.mk_star(m));
}

TEST_CASE("negation cancels double application and rejects actions") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  CHECK(st.mk_not(st.mk_not(a)) == a);
  CHECK(st.tag(st.mk_not(a)) == Tag::Not);
  CHECK_THROWS_AS((void)st.mk_not(inat_inc("x")), std::invalid_argument);
  CHECK_THROWS_AS((void)st.mk_not(st.mk_star(a)), std::invalid_argument);
  CHECK_THROWS_AS((void)st.mk_not(st.mk_seq(a, inat_inc("x"))),
                  std::invalid_argument);
}

TEST_CASE("nnf pushes negation to primitives") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  TermId b = inat_gt("y", 3);

  CHECK(st.nnf(st.mk_not(st.zero())) == st.one());
  CHECK(st.nnf(st.mk_not(st.one())) == st.zero());
  CHECK(st.nnf(st.mk_not(st.mk_not(a))) == a);
  CHECK(st.nnf(st.mk_not(st.plus2(a, b))) ==
        st.mk_seq(st.nnf(st.mk_not(a)), st.nnf(st.mk_not(b))));
  CHECK(st.nnf(st.mk_not(st.mk_seq(a, b))) ==
        st.plus2(st.mk_not(a), st.mk_not(b)));
  CHECK(st.nnf(st.mk_not(a)) == st.mk_not(a));

  // Idempotent by intern identity.
  TermId t = st.mk_not(st.mk_seq(st.plus2(a, b), st.mk_not(b)));
  CHECK(st.nnf(st.nnf(t)) == st.nnf(t));
}

TEST_CASE("is_test tracks the predicate fragment") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  TermId m = inat_inc("x");
  CHECK(st.is_test(st.zero()));
  CHECK(st.is_test(st.one()));
  CHECK(st.is_test(a));
  CHECK(st.is_test(st.mk_not(a)));
  CHECK(st.is_test(st.plus2(a, st.mk_not(a))));
  CHECK(st.is_test(st.mk_seq(a, a)));
  CHECK_FALSE(st.is_test(m));
  CHECK_FALSE(st.is_test(st.mk_star(a)));
  CHECK_FALSE(st.is_test(st.mk_seq(a, m)));
  CHECK_FALSE(st.is_test(st.plus2(a, m)));
}

TEST_CASE("display renders with minimal parentheses") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  TermId b = inat_gt("y", 3);
  TermId m = inat_inc("x");

  CHECK(st.display(st.zero()) == "false");
  CHECK(st.display(st.one()) == "true");
  CHECK(st.display(a) == "x>1");
  CHECK(st.display(m) == "inc(x)");
  CHECK(st.display(st.mk_not(a)) == "~x>1");
  CHECK(st.display(st.mk_seq(a, m)) == "x>1; inc(x)");
  CHECK(st.display(st.mk_star(m)) == "inc(x)*");
  CHECK(st.display(st.mk_star(st.mk_seq(a, m))) == "(x>1; inc(x))*");
  CHECK(st.display(st.mk_seq(st.plus2(a, b), m)) == "(x>1 + y>3); inc(x)");
  CHECK(st.display(st.mk_not(st.plus2(a, b))) == "~(x>1 + y>3)");
  CHECK(st.display(inat_assign("x", 5)) == "x:=5");
  CHECK(st.display(bv_set("b")) == "set(b)");
  CHECK(st.display(bv_eq("b")) == "b=true");
  CHECK(st.display(nk_assign("f", "v")) == "f<-v");
  CHECK(st.display(sp_lt("B", kSpInf)) == "B<inf");
  CHECK(st.display(ltlf_since(st.one(), a)) == "since(true, x>1)");
}

TEST_CASE("levels and sizes are monotone in structure") {
  TermStore& st = store();
  TermId a = inat_gt("x", 1);
  TermId m = inat_inc("x");
  TermId comp = st.mk_seq(st.mk_star(m), a);
  CHECK(st.size(comp) > st.size(a));
  CHECK(st.size(comp) > st.size(st.mk_star(m)));
  CHECK(st.level(a) == st.level(m));

  // LTLf wraps its inner theory one universe level up.
  TermId tmp = ltlf_ever(a);
  CHECK(st.level(tmp) > st.level(a));
  CHECK(st.level(st.plus2(tmp, a)) == st.level(tmp));
}

TEST_CASE("interning is stable across random rebuild orders") {
  TermStore& st = store();
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    std::vector<TermId> pool{inat_gt("x", 1), inat_gt("y", 2), inat_inc("x"),
                             inat_inc("y"), st.one()};
    auto pick = [&] { return pool[rng() % pool.size()]; };
    TermId l = pick(), r = pick(), s = pick();
    TermId t1 = st.mk_plus({st.mk_seq(l, r), s, st.mk_seq(l, r)});
    TermId t2 = st.mk_plus({s, st.mk_seq(l, r)});
    CHECK(t1 == t2);
  }
}
