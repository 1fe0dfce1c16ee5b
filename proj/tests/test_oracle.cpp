// Bounded trace semantics: denotation clauses, temporal predicates, and
// the differential-testing comparator.
//
// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kmt/normalize.hpp"
#include "kmt/oracle.hpp"
#include "kmt/theories/theories.hpp"

using namespace kmt;

namespace {

Trace start(std::initializer_list<std::pair<std::string, int64_t>> vars) {
  Value st = Value::object();
  for (auto& [k, v] : vars) st[k] = v;
  return Trace{LogEntry{st, 0}};
}

Trace extend(Trace t, TermId action, Theory& th) {
  t.push_back(LogEntry{th.act(action, t.back().state), action});
  return t;
}

}  // namespace

TEST_CASE("denotation of tests filters the input trace") {
  auto ses = make_session("incnat");
  Theory& th = *ses.theory;
  Budget b{4, 3};
  Trace t0 = start({{"x", 0}});

  CHECK(denote(store().one(), t0, th, b) == TraceSet{t0});
  CHECK(denote(store().zero(), t0, th, b) == TraceSet{});
  CHECK(denote(inat_gt("x", 0), t0, th, b) == TraceSet{});

  Trace t1 = extend(t0, inat_inc("x"), th);
  CHECK(denote(inat_gt("x", 0), t1, th, b) == TraceSet{t1});
  CHECK(denote(store().mk_not(inat_gt("x", 0)), t1, th, b) == TraceSet{});
}

TEST_CASE("denotation of actions appends one logged entry") {
  auto ses = make_session("incnat");
  Theory& th = *ses.theory;
  Budget b{4, 3};
  TermId inc = inat_inc("x");
  Trace t0 = start({{"x", 0}});

  TraceSet d = denote(inc, t0, th, b);
  REQUIRE(d.size() == 1);
  const Trace& t = *d.begin();
  REQUIRE(t.size() == 2);
  CHECK(t[0] == t0[0]);
  CHECK(t[1].action == inc);
  CHECK(t[1].state["x"] == 1);

  TraceSet d2 = denote(store().mk_seq(inc, inc), t0, th, b);
  REQUIRE(d2.size() == 1);
  CHECK(d2.begin()->size() == 3);
  CHECK(d2.begin()->back().state["x"] == 2);

  // A third step exceeds the trace bound, so the whole product vanishes.
  CHECK(denote(store().seq_of({inc, inc, inc}), t0, th, b) == TraceSet{});

  TermId assign = inat_assign("x", 7);
  TraceSet d3 = denote(assign, t0, th, b);
  REQUIRE(d3.size() == 1);
  CHECK(d3.begin()->back().state["x"] == 7);
}

TEST_CASE("denotation of sums unions the branches") {
  auto ses = make_session("incnat");
  Theory& th = *ses.theory;
  Budget b{4, 3};
  TermId inc = inat_inc("x");
  Trace t0 = start({{"x", 0}});

  TraceSet d = denote(store().plus2(inc, store().one()), t0, th, b);
  CHECK(d.size() == 2);
  CHECK(d.count(t0) == 1);
  CHECK(d.count(extend(t0, inc, th)) == 1);
}

TEST_CASE("denotation of star saturates up to the bound") {
  auto ses = make_session("incnat");
  Theory& th = *ses.theory;
  Budget b{4, 3};
  TermId inc = inat_inc("x");
  Trace t0 = start({{"x", 0}});

  TraceSet d = denote(store().mk_star(inc), t0, th, b);
  Trace t1 = extend(t0, inc, th);
  Trace t2 = extend(t1, inc, th);
  CHECK(d == TraceSet{t0, t1, t2});

  // A star of a test never grows the trace.
  CHECK(denote(store().mk_star(inat_gt("x", 5)), t0, th, b) == TraceSet{t0});

  // Guarded loops stop when the guard fails.
  TermId loop = store().mk_star(store().mk_seq(store().mk_not(inat_gt("x", 0)), inc));
  CHECK(denote(loop, t0, th, b) == TraceSet{t0, t1});
}

TEST_CASE("well-formedness checks the logged successor states") {
  auto ses = make_session("incnat");
  Theory& th = *ses.theory;
  TermId inc = inat_inc("x");
  Trace t0 = start({{"x", 0}});
  Trace good = extend(extend(t0, inc, th), inc, th);
  CHECK(trace_well_formed(t0, th));
  CHECK(trace_well_formed(good, th));

  CHECK_FALSE(trace_well_formed(Trace{}, th));

  Trace bad_first = good;
  bad_first[0].action = inc;
  CHECK_FALSE(trace_well_formed(bad_first, th));

  Trace bad_mid = good;
  bad_mid[1].action = 0;
  CHECK_FALSE(trace_well_formed(bad_mid, th));

  Trace bad_state = good;
  bad_state[2].state["x"] = 9;
  CHECK_FALSE(trace_well_formed(bad_state, th));
}

TEST_CASE("temporal predicates read the whole history") {
  auto ses = make_session("ltlf-incnat");
  Theory& th = *ses.theory;
  TermId incx = inat_inc("x");
  TermId incy = inat_inc("y");
  Trace t0 = start({{"x", 0}, {"y", 0}});
  Trace t1 = extend(t0, incx, th);   // x=1 y=0
  Trace t2 = extend(t1, incx, th);   // x=2 y=0
  Trace t2y = extend(t2, incy, th);  // x=2 y=1

  TermId x1 = inat_gt("x", 1);

  SUBCASE("ever looks for any satisfying prefix") {
    CHECK(oracle_pred(ltlf_ever(x1), t2, th));
    CHECK(oracle_pred(ltlf_ever(x1), t2y, th));
    CHECK_FALSE(oracle_pred(ltlf_ever(x1), t1, th));
    CHECK_FALSE(oracle_pred(ltlf_ever(inat_gt("x", 2)), t2y, th));
  }

  SUBCASE("last steps back exactly one entry") {
    CHECK(oracle_pred(ltlf_last(inat_gt("x", 0)), t2, th));
    CHECK_FALSE(oracle_pred(ltlf_last(x1), t2, th));
    CHECK(oracle_pred(ltlf_last(x1), t2y, th));
    CHECK_FALSE(oracle_pred(ltlf_last(x1), t0, th));  // no previous entry
  }

  SUBCASE("since requires its first argument along the suffix") {
    CHECK(oracle_pred(ltlf_since(inat_gt("y", 0), x1), t2y, th));
    CHECK_FALSE(oracle_pred(ltlf_since(inat_gt("y", 0), inat_gt("x", 2)), t2y, th));
    Trace n0 = start({{"x", 2}});
    Trace n1 = extend(n0, ltlf_noop(), th);
    CHECK_FALSE(oracle_pred(ltlf_since(x1, inat_gt("x", 2)), n1, th));
    CHECK(oracle_pred(ltlf_since(x1, inat_gt("x", 1)), n1, th));
  }

  SUBCASE("start and always mark trace boundaries") {
    CHECK(oracle_pred(ltlf_start(), t0, th));
    CHECK_FALSE(oracle_pred(ltlf_start(), t1, th));
    CHECK(oracle_pred(ltlf_always(store().mk_not(inat_gt("x", 2))), t2y, th));
    CHECK_FALSE(oracle_pred(ltlf_always(store().mk_not(x1)), t2y, th));
    CHECK(oracle_pred(ltlf_wlast(x1), t0, th));
    CHECK(oracle_pred(ltlf_backto(x1, inat_gt("x", 5)), extend(start({{"x", 2}}), ltlf_noop(), th), th));
  }
}

TEST_CASE("bounded comparison validates algebraic laws") {
  auto ses = make_session("incnat");
  Theory& th = *ses.theory;
  TermStore& st = store();
  Budget b{5, 3};
  TermId p = inat_inc("x");
  TermId q = st.mk_seq(inat_gt("x", 0), inat_inc("x"));
  TermId r = inat_assign("x", 2);
  th.bind({p, q, r});

  CHECK(equiv_bounded(st.plus2(p, q), st.plus2(q, p), th, b).equivalent);
  CHECK(equiv_bounded(st.mk_seq(p, st.plus2(q, r)),
                      st.plus2(st.mk_seq(p, q), st.mk_seq(p, r)), th, b)
            .equivalent);
  CHECK(equiv_bounded(st.mk_star(p), st.plus2(st.one(), st.mk_seq(p, st.mk_star(p))),
                      th, b)
            .equivalent);
  CHECK(equiv_bounded(st.mk_seq(p, st.zero()), st.zero(), th, b).equivalent);
  CHECK(equiv_bounded(st.mk_star(st.plus2(p, q)),
                      st.mk_star(st.mk_seq(st.mk_star(p), st.mk_star(q))), th, b)
            .equivalent);
  CHECK_FALSE(equiv_bounded(p, q, th, b).equivalent);
}

TEST_CASE("tracing semantics distinguishes idempotent-looking programs") {
  SUBCASE("bit assignments leave distinct traces") {
    auto ses = make_session("bitvec");
    Theory& th = *ses.theory;
    TermId s = bv_set("b");
    th.bind({s});
    OracleResult r = equiv_bounded(store().mk_seq(s, s), s, th, Budget{4, 3});
    REQUIRE_FALSE(r.equivalent);
    REQUIRE(r.cex.has_value());
    const OracleCounterexample& cex = *r.cex;
    TraceSet left = denote(store().mk_seq(s, s), cex.initial, th, Budget{4, 3});
    TraceSet right = denote(s, cex.initial, th, Budget{4, 3});
    CHECK(left.count(cex.distinguishing) == (cex.in_left ? 1u : 0u));
    CHECK(right.count(cex.distinguishing) == (cex.in_left ? 0u : 1u));
    CHECK(trace_well_formed(cex.distinguishing, th));
  }

  SUBCASE("packet field writes leave distinct traces") {
    auto ses = make_session("netkat");
    Theory& th = *ses.theory;
    TermId w = nk_assign("f", "v");
    th.bind({w});
    OracleResult r = equiv_bounded(store().mk_seq(w, w), w, th, Budget{4, 3});
    CHECK_FALSE(r.equivalent);
    CHECK(r.cex.has_value());
  }
}

TEST_CASE("trace rendering is stable") {
  auto ses = make_session("incnat");
  Theory& th = *ses.theory;
  Trace t = extend(start({{"x", 0}}), inat_inc("x"), th);
  CHECK(trace_str(t) == "{\"x\":0} -inc(x)-> {\"x\":1}");
}
