// Built-in theories: frozen pushback tables, action semantics, random
// pushback round-trips, and algebraic consequence laws.
//
// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kmt/automata.hpp"
#include "kmt/normalize.hpp"
#include "kmt/oracle.hpp"
#include "kmt/theories/theories.hpp"

using namespace kmt;

namespace {

NF nf_of(std::vector<std::pair<TermId, TermId>> pairs) {
  NF x;
  for (auto& [a, m] : pairs) x.add(a, m);
  x.canon();
  return x;
}

NatExpr nat_const(int64_t n) {
  NatExpr e;
  e.n = n;
  return e;
}

NatExpr nat_var(const std::string& v) {
  NatExpr e;
  e.is_var = true;
  e.var = v;
  return e;
}

// π·a rebuilt from the theory's own pushback must match the original under
// the full decision procedure.
void pushback_roundtrip(const std::string& handle, int rounds, uint64_t seed) {
  auto ses = make_session(handle);
  Theory& th = *ses.theory;
  TermStore& st = store();
  std::mt19937_64 rng(seed);
  std::vector<std::pair<TermId, TermId>> pairs;
  std::vector<TermId> ctx;
  for (int i = 0; i < rounds; ++i) {
    TermId pi = th.rand_act(rng);
    TermId a = th.rand_test(rng);
    pairs.emplace_back(pi, a);
    ctx.push_back(st.mk_seq(pi, a));
  }
  th.bind(ctx);
  for (auto& [pi, a] : pairs) {
    CAPTURE(st.display(pi));
    CAPTURE(st.display(a));
    TestSet bs;
    try {
      bs = ses.engine->push_test_prim(pi, a);
    } catch (const TheoryError&) {
      continue;
    }
    std::vector<TermId> parts;
    for (TermId b : bs) parts.push_back(st.mk_seq(b, pi));
    EquivResult r = equivalent(st.mk_seq(pi, a), st.mk_plus(parts), *ses.engine);
    CHECK(r.equivalent);
  }
}

}  // namespace

TEST_CASE("pushback through any action annihilates on zero") {
  auto ses = make_session("incnat");
  CHECK(ses.engine->pb_dot(inat_inc("x"), store().zero()) == NF{});
  CHECK(ses.engine->pb_dot(inat_assign("x", 2), store().zero()) == NF{});
}

TEST_CASE("bitvec pushback table") {
  auto ses = make_session("bitvec");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId b = bv_eq("b");

  CHECK(eng.pb_dot(bv_set("b"), b) == nf_of({{st.one(), bv_set("b")}}));
  CHECK(eng.pb_dot(bv_unset("b"), b) == NF{});
  CHECK(eng.pb_dot(bv_set("b"), st.mk_not(b)) == NF{});
  CHECK(eng.pb_dot(bv_unset("b"), st.mk_not(b)) ==
        nf_of({{st.one(), bv_unset("b")}}));
  CHECK(eng.pb_dot(bv_set("b"), bv_eq("c")) ==
        nf_of({{bv_eq("c"), bv_set("b")}}));

  CHECK(equivalent(st.mk_seq(bv_set("b"), b), bv_set("b"), eng).equivalent);
  CHECK(equivalent(st.mk_seq(bv_unset("b"), b), st.zero(), eng).equivalent);
}

TEST_CASE("incnat pushback table") {
  auto ses = make_session("incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId inc = inat_inc("x");

  CHECK(eng.pb_dot(inc, inat_gt("x", 3)) == nf_of({{inat_gt("x", 2), inc}}));
  CHECK(eng.pb_dot(inc, inat_gt("x", 0)) == nf_of({{st.one(), inc}}));
  CHECK(eng.pb_dot(inc, st.mk_not(inat_gt("x", 3))) ==
        nf_of({{st.mk_not(inat_gt("x", 2)), inc}}));
  CHECK(eng.pb_dot(inat_inc("y"), inat_gt("x", 3)) ==
        nf_of({{inat_gt("x", 3), inat_inc("y")}}));
  CHECK(eng.pb_dot(inat_assign("x", 5), inat_gt("x", 3)) ==
        nf_of({{st.one(), inat_assign("x", 5)}}));
  CHECK(eng.pb_dot(inat_assign("x", 2), inat_gt("x", 3)) == NF{});
  CHECK(eng.pb_dot(inat_assign("x", 2), st.mk_not(inat_gt("x", 3))) ==
        nf_of({{st.one(), inat_assign("x", 2)}}));

  CHECK(equivalent(st.mk_seq(inc, inat_gt("x", 3)),
                   st.mk_seq(inat_gt("x", 2), inc), eng)
            .equivalent);
  CHECK(equivalent(st.mk_seq(inat_assign("x", 5), inat_gt("x", 3)),
                   inat_assign("x", 5), eng)
            .equivalent);
}

TEST_CASE("set pushback table") {
  auto ses = make_session("set-incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId in5 = set_in("s", 5);
  TermId in7 = set_in("s", 7);
  TermId ins5 = set_insert("s", nat_const(5));
  TermId rm5 = set_remove("s", nat_const(5));

  CHECK(eng.pb_dot(ins5, in5) == nf_of({{st.one(), ins5}, {in5, ins5}}));
  CHECK(eng.pb_dot(ins5, in7) == nf_of({{in7, ins5}}));
  CHECK(eng.pb_dot(rm5, in5) == NF{});
  CHECK(eng.pb_dot(rm5, in7) == nf_of({{in7, rm5}}));

  TermId insv = set_insert("s", nat_var("v"));
  TermId veq5 = inat_expr_eq(nat_var("v"), 5);
  CHECK(eng.pb_dot(insv, in5) == nf_of({{veq5, insv}, {in5, insv}}));

  CHECK(equivalent(st.mk_seq(ins5, in5), ins5, eng).equivalent);
  CHECK(equivalent(st.mk_seq(rm5, in5), st.zero(), eng).equivalent);
  CHECK(equivalent(st.mk_seq(rm5, st.mk_not(in5)), rm5, eng).equivalent);
}

TEST_CASE("map pushback table") {
  auto ses = make_session("map-incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId w37 = map_write("x", 3, nat_const(7));
  TermId r37 = map_read("x", nat_const(3), 7);
  TermId r39 = map_read("x", nat_const(3), 9);
  TermId r57 = map_read("x", nat_const(5), 7);

  CHECK(eng.pb_dot(w37, r37) == nf_of({{st.one(), w37}}));
  CHECK(eng.pb_dot(w37, r39) == NF{});
  CHECK(eng.pb_dot(w37, r57) == nf_of({{r57, w37}}));

  TermId wv = map_write("x", 3, nat_var("v"));
  CHECK(eng.pb_dot(wv, r37) == nf_of({{inat_expr_eq(nat_var("v"), 7), wv}}));

  TermId rv = map_read("x", nat_var("v"), 7);
  CHECK(eng.pb_dot(inat_assign("v", 4), rv) ==
        nf_of({{map_read("x", nat_const(4), 7), inat_assign("v", 4)}}));
  CHECK_THROWS_AS((void)eng.pb_dot(inat_inc("v"), rv), TheoryError);

  CHECK(equivalent(st.mk_seq(w37, r37), w37, eng).equivalent);
  CHECK(equivalent(st.mk_seq(w37, r39), st.zero(), eng).equivalent);
}

TEST_CASE("netkat pushback table") {
  auto ses = make_session("netkat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId w = nk_assign("f", "v");

  CHECK(eng.pb_dot(w, nk_eq("f", "v")) == nf_of({{st.one(), w}}));
  CHECK(eng.pb_dot(w, nk_eq("f", "w")) == NF{});
  CHECK(eng.pb_dot(w, nk_eq("g", "w")) == nf_of({{nk_eq("g", "w"), w}}));

  CHECK(equivalent(st.mk_seq(w, nk_eq("f", "v")), w, eng).equivalent);
  CHECK(equivalent(st.mk_seq(w, nk_eq("f", "w")), st.zero(), eng).equivalent);
  CHECK(equivalent(st.mk_seq(w, nk_eq("g", "w")),
                   st.mk_seq(nk_eq("g", "w"), w), eng)
            .equivalent);
}

TEST_CASE("ltlf pushback table") {
  auto ses = make_session("ltlf-incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId inc = inat_inc("x");
  TermId ever2 = ltlf_ever(inat_gt("x", 2));

  CHECK(eng.pb_dot(inc, ever2) ==
        nf_of({{inat_gt("x", 1), inc}, {ever2, inc}}));
  CHECK(eng.pb_dot(ltlf_noop(), ever2) ==
        nf_of({{inat_gt("x", 2), ltlf_noop()}, {ever2, ltlf_noop()}}));
  CHECK(eng.pb_dot(inc, ltlf_last(inat_gt("x", 1))) ==
        nf_of({{inat_gt("x", 1), inc}}));

  CHECK(equivalent(st.mk_seq(inc, ever2),
                   st.mk_seq(st.plus2(inat_gt("x", 1), ever2), inc), eng)
            .equivalent);

  // Temporal tests do not commute with the actions that establish them.
  EquivResult r = equivalent(st.mk_seq(inc, ltlf_ever(inat_gt("x", 0))),
                             st.mk_seq(ltlf_ever(inat_gt("x", 0)), inc), eng);
  CHECK_FALSE(r.equivalent);
  CHECK(r.cex.has_value());
}

TEST_CASE("shortest-paths pushback table") {
  auto ses = make_session("sp");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId m = sp_minp("B", {"A", "C", "D"});

  CHECK(eng.pb_dot(m, sp_lt("B", 3)) ==
        nf_of({{sp_lt("A", 2), m}, {sp_lt("C", 2), m}, {sp_lt("D", 2), m}}));
  CHECK(eng.pb_dot(m, sp_lt("B", 0)) == NF{});
  CHECK(eng.pb_dot(m, sp_lt("C", 2)) == nf_of({{sp_lt("C", 2), m}}));

  TermId m2 = sp_minp("B", {"A", "C"});
  CHECK(eng.pb_dot(m2, sp_lt("B", kSpInf)) ==
        nf_of({{sp_lt("A", kSpInf), m2}, {sp_lt("C", kSpInf), m2}}));

  CHECK(equivalent(st.mk_seq(m, sp_lt("B", 3)),
                   st.mk_seq(st.mk_plus({sp_lt("A", 2), sp_lt("C", 2),
                                         sp_lt("D", 2)}),
                             m),
                   eng)
            .equivalent);
}

TEST_CASE("product theory routes pushback by component") {
  auto ses = make_session("prod-bitvec-incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();

  CHECK(eng.pb_dot(bv_set("b"), inat_gt("x", 1)) ==
        nf_of({{inat_gt("x", 1), bv_set("b")}}));
  CHECK(eng.pb_dot(inat_inc("x"), bv_eq("b")) ==
        nf_of({{bv_eq("b"), inat_inc("x")}}));
  CHECK(eng.pb_dot(bv_set("b"), bv_eq("b")) ==
        nf_of({{st.one(), bv_set("b")}}));
  CHECK(eng.pb_dot(inat_inc("x"), inat_gt("x", 1)) ==
        nf_of({{inat_gt("x", 0), inat_inc("x")}}));

  CHECK(equivalent(st.mk_seq(bv_set("b"), inat_gt("x", 1)),
                   st.mk_seq(inat_gt("x", 1), bv_set("b")), eng)
            .equivalent);
}

TEST_CASE("action semantics over oracle states") {
  SUBCASE("set insert and remove keep a sorted value list") {
    auto ses = make_session("set-incnat");
    Theory& th = *ses.theory;
    Value st = Value::object();
    st = th.act(set_insert("s", nat_const(5)), st);
    st = th.act(set_insert("s", nat_const(2)), st);
    st = th.act(set_insert("s", nat_const(5)), st);
    CHECK(st["s"] == Value({2, 5}));
    st = th.act(set_remove("s", nat_const(5)), st);
    CHECK(st["s"] == Value({2}));
    CHECK(th.pred(set_in("s", 2), Trace{LogEntry{st, 0}},
                  [](TermId, const Trace&) { return false; }));
  }

  SUBCASE("map write stores under the stringified key") {
    auto ses = make_session("map-incnat");
    Theory& th = *ses.theory;
    Value st = Value::object();
    st = th.act(map_write("x", 3, nat_const(7)), st);
    CHECK(st["x"]["3"] == 7);
    Value st2 = Value::object();
    st2["v"] = 7;
    st2 = th.act(map_write("x", 3, nat_var("v")), st2);
    CHECK(st2["x"]["3"] == 7);
  }

  SUBCASE("netkat assignment overwrites the field") {
    auto ses = make_session("netkat");
    Value st = Value::object();
    st["f"] = "u";
    st = ses.theory->act(nk_assign("f", "v"), st);
    CHECK(st["f"] == "v");
  }

  SUBCASE("shortest-paths relaxation takes min plus one") {
    auto ses = make_session("sp");
    Theory& th = *ses.theory;
    Value st = Value::object();
    st["A"] = 2;
    st["C"] = "inf";
    Value out = th.act(sp_minp("B", {"A", "C"}), st);
    CHECK(out["B"] == 3);
    Value allinf = Value::object();
    Value out2 = th.act(sp_minp("B", {"A", "C"}), allinf);
    CHECK(out2["B"] == "inf");
  }

  SUBCASE("temporal noop leaves the state untouched") {
    auto ses = make_session("ltlf-incnat");
    Value st = Value::object();
    st["x"] = 3;
    CHECK(ses.theory->act(ltlf_noop(), st) == st);
  }
}

TEST_CASE("random pushbacks round-trip through the decision procedure") {
  pushback_roundtrip("bitvec", 50, 101);
  pushback_roundtrip("incnat", 50, 102);
  pushback_roundtrip("prod-bitvec-incnat", 50, 103);
  pushback_roundtrip("set-incnat", 50, 104);
  pushback_roundtrip("map-incnat", 50, 105);
  pushback_roundtrip("ltlf-incnat", 50, 106);
  pushback_roundtrip("netkat", 50, 107);
  pushback_roundtrip("sp", 50, 108);
}

TEST_CASE("pushback respects boolean complement") {
  for (const char* h : {"incnat", "bitvec", "netkat", "sp"}) {
    CAPTURE(h);
    auto ses = make_session(h);
    Theory& th = *ses.theory;
    TermStore& st = store();
    std::mt19937_64 rng(42);
    std::vector<std::pair<TermId, TermId>> pairs;
    std::vector<TermId> ctx;
    for (int i = 0; i < 15; ++i) {
      TermId pi = th.rand_act(rng);
      TermId a = th.rand_test(rng);
      pairs.emplace_back(pi, a);
      ctx.push_back(st.mk_seq(pi, a));
    }
    th.bind(ctx);
    for (auto& [pi, a] : pairs) {
      TermId split = st.plus2(st.mk_seq(pi, a), st.mk_seq(pi, st.nnf(st.mk_not(a))));
      CHECK(equivalent(pi, split, *ses.engine).equivalent);
    }
  }
}

TEST_CASE("star laws hold under the decision procedure") {
  for (const char* h : {"incnat", "bitvec"}) {
    CAPTURE(h);
    auto ses = make_session(h);
    Theory& th = *ses.theory;
    TermStore& st = store();
    std::mt19937_64 rng(271);
    for (int i = 0; i < 12; ++i) {
      TermId p = st.mk_seq(th.rand_test(rng), th.rand_act(rng));
      TermId q = rng() % 2 ? th.rand_act(rng)
                           : st.mk_seq(th.rand_test(rng), th.rand_act(rng));
      CAPTURE(st.display(p));
      CAPTURE(st.display(q));
      Engine& eng = *ses.engine;
      // Sliding, denesting, expansion, and the square decomposition.
      CHECK(equivalent(st.mk_seq(p, st.mk_star(st.mk_seq(q, p))),
                       st.mk_seq(st.mk_star(st.mk_seq(p, q)), p), eng)
                .equivalent);
      CHECK(equivalent(st.mk_star(st.plus2(p, q)),
                       st.mk_seq(st.mk_star(p),
                                 st.mk_star(st.mk_seq(q, st.mk_star(p)))),
                       eng)
                .equivalent);
      CHECK(equivalent(st.mk_star(p),
                       st.plus2(st.one(), st.mk_seq(p, st.mk_star(p))), eng)
                .equivalent);
      CHECK(equivalent(st.mk_star(p),
                       st.mk_seq(st.mk_star(st.mk_seq(p, p)),
                                 st.plus2(st.one(), p)),
                       eng)
                .equivalent);
    }
  }
}
