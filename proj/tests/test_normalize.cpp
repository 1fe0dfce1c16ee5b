// Pushback normalization: frozen rule examples, soundness against the trace
// oracle, the restricted-action invariant, determinism, and fuel.
//
// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

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

bool is_restricted(TermId m);

// Star bodies are normal-form sums, so their summands may carry one leading
// guard; everywhere else tests other than 1 are banned.
bool star_summand_ok(TermId s) {
  TermStore& st = store();
  TermId cur = s;
  while (st.tag(cur) == Tag::Seq && st.is_test(st.node(cur).kids[0]))
    cur = st.node(cur).kids[1];
  if (st.is_test(cur)) return true;
  return is_restricted(cur);
}

bool is_restricted(TermId m) {
  TermStore& st = store();
  if (m == st.one()) return true;
  Node n = st.node(m);
  switch (n.tag) {
    case Tag::Prim:
      return !st.is_test(m);
    case Tag::Seq:
      return is_restricted(n.kids[0]) && is_restricted(n.kids[1]);
    case Tag::Star: {
      Node b = st.node(n.kids[0]);
      if (b.tag == Tag::Plus) {
        for (TermId k : b.kids)
          if (!star_summand_ok(k)) return false;
        return true;
      }
      return star_summand_ok(n.kids[0]);
    }
    default:
      return false;
  }
}

void check_restricted(const NF& x) {
  for (auto& [a, m] : x.sum) {
    CAPTURE(store().display(m));
    CHECK(store().is_test(a));
    CHECK(is_restricted(m));
  }
}

struct SoundnessRig {
  Session ses;
  std::mt19937_64 rng;
  Budget budget{4, 3};

  explicit SoundnessRig(const std::string& handle, uint64_t seed)
      : ses(make_session(handle)), rng(seed) {}

  Theory& th() { return *ses.theory; }
  Engine& eng() { return *ses.engine; }

  TermId r_act() {
    TermId m = th().rand_act(rng);
    if (rng() % 4 == 0) m = store().mk_seq(m, th().rand_act(rng));
    return m;
  }

  TermId r_test() {
    TermId a = th().rand_test(rng);
    if (rng() % 5 == 0) a = store().nnf(store().mk_not(a));
    if (rng() % 5 == 0) a = test_mul2(a, th().rand_test(rng));
    return a;
  }

  NF r_nf(int max_summands) {
    NF x;
    int k = 1 + int(rng() % max_summands);
    for (int i = 0; i < k; ++i) x.add(th().rand_test(rng), th().rand_act(rng));
    x.canon();
    return x;
  }

  void expect_equiv(TermId lhs, const NF& out) {
    check_restricted(out);
    OracleResult r = equiv_bounded(lhs, nf_term(out), th(), budget);
    CAPTURE(store().display(lhs));
    CAPTURE(nf_display(out));
    if (r.cex) CAPTURE(trace_str(r.cex->distinguishing));
    CHECK(r.equivalent);
  }
};

}  // namespace

TEST_CASE("normalize maps predicates and actions to unit summands") {
  auto ses = make_session("incnat");
  TermStore& st = store();
  TermId a = inat_gt("x", 2);
  TermId pi = inat_inc("x");
  CHECK(ses.engine->normalize(a) == nf_of({{a, st.one()}}));
  CHECK(ses.engine->normalize(pi) == nf_of({{st.one(), pi}}));
  CHECK(ses.engine->normalize(st.zero()) == NF{});
  CHECK(ses.engine->normalize(st.one()) == nf_of({{st.one(), st.one()}}));
  CHECK(ses.engine->normalize(st.plus2(a, pi)) ==
        nf_of({{a, st.one()}, {st.one(), pi}}));
}

TEST_CASE("normalizing a starred loop under a temporal goal") {
  auto ses = make_session("ltlf-incnat");
  TermStore& st = store();
  TermId inc = inat_inc("x");
  TermId ever = ltlf_ever(inat_gt("x", 1));
  TermId p = st.mk_seq(st.mk_star(inc), ever);

  NF x = ses.engine->normalize(p);
  check_restricted(x);
  REQUIRE(x.sum.size() == 3);
  CHECK(nf_tests(x) == make_set({st.one(), inat_gt("x", 0),
                                 st.plus2(inat_gt("x", 1), ever)}));

  // The summand actions agree with the hand-derived normal form
  // (⋄+x>1)·inc* + (x>0)·inc·inc* + 1·inc·inc·inc* up to trace semantics.
  NF expected = nf_of(
      {{st.plus2(inat_gt("x", 1), ever), st.mk_star(inc)},
       {inat_gt("x", 0), st.mk_seq(inc, st.mk_star(inc))},
       {st.one(), st.seq_of({inc, inc, st.mk_star(inc)})}});
  Budget b{7, 4};
  for (auto& [test, act] : x.sum) {
    bool matched = false;
    for (auto& [etest, eact] : expected.sum) {
      if (etest != test) continue;
      matched = equiv_bounded(st.mk_seq(test, act), st.mk_seq(etest, eact),
                              *ses.theory, b)
                    .equivalent;
    }
    CAPTURE(store().display(act));
    CHECK(matched);
  }
  CHECK(equiv_bounded(p, nf_term(x), *ses.theory, b).equivalent);
}

TEST_CASE("pb_test pushes one test through a normal form") {
  auto ses = make_session("incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId inc = inat_inc("x");

  CHECK(eng.pb_test(nf_of({{st.one(), inc}}), inat_gt("x", 1)) ==
        nf_of({{inat_gt("x", 0), inc}}));
  NF x = nf_of({{inat_gt("x", 2), inc}, {st.one(), inat_assign("x", 0)}});
  CHECK(eng.pb_test(x, st.one()) == x);
  CHECK(eng.pb_test(NF{}, inat_gt("x", 1)) == NF{});

  auto prod = make_session("prod-bitvec-incnat");
  CHECK(prod.engine->pb_test(nf_of({{bv_eq("b"), inc}}), bv_eq("b")) ==
        nf_of({{bv_eq("b"), inc}}));
}

TEST_CASE("pb_restricted reattaches pushed summands") {
  auto ses = make_session("incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId inc = inat_inc("x");

  CHECK(eng.pb_restricted(inc, nf_of({{inat_gt("x", 0), inc}})) ==
        nf_of({{st.one(), st.mk_seq(inc, inc)}}));
  CHECK(eng.pb_restricted(inc, NF{}) == NF{});
  CHECK(eng.pb_restricted(inc, nf_of({{st.one(), inat_inc("y")}})) ==
        nf_of({{st.one(), st.mk_seq(inc, inat_inc("y"))}}));
}

TEST_CASE("pb_join multiplies normal forms") {
  auto ses = make_session("incnat");
  Engine& eng = *ses.engine;
  TermStore& st = store();
  TermId inc = inat_inc("x");

  CHECK(eng.pb_join(nf_of({{st.one(), inc}}), nf_of({{inat_gt("x", 1), st.one()}})) ==
        nf_of({{inat_gt("x", 0), inc}}));
  NF x = nf_of({{inat_gt("x", 2), inc}});
  CHECK(eng.pb_join(x, nf_of({{st.one(), st.one()}})) == x);
  CHECK(eng.pb_join(NF{}, x) == NF{});
  CHECK(eng.pb_join(x, NF{}) == NF{});
}

TEST_CASE("pb_star handles the vacuous and guarded loops") {
  auto ses = make_session("incnat");
  Engine& eng = *ses.engine;
  Theory& th = *ses.theory;
  TermStore& st = store();
  TermId inc = inat_inc("x");

  CHECK(eng.pb_star(NF{}) == nf_of({{st.one(), st.one()}}));

  NF guarded = nf_of({{inat_gt("x", 0), inc}});
  NF rs = eng.pb_star(guarded);
  check_restricted(rs);
  CHECK(equiv_bounded(st.mk_star(st.mk_seq(inat_gt("x", 0), inc)), nf_term(rs),
                      th, Budget{7, 4})
            .equivalent);

  NF plain = nf_of({{st.one(), inc}});
  NF rp = eng.pb_star(plain);
  check_restricted(rp);
  CHECK(equiv_bounded(st.mk_star(inc), nf_term(rp), th, Budget{7, 4})
            .equivalent);
}

TEST_CASE("pushback relations are sound against the trace oracle") {
  struct Cfg {
    const char* handle;
    int rounds;
  };
  for (Cfg cfg : {Cfg{"bitvec", 500}, Cfg{"incnat", 500}, Cfg{"netkat", 500},
                  Cfg{"sp", 500}, Cfg{"prod-bitvec-incnat", 500},
                  Cfg{"set-incnat", 150}, Cfg{"map-incnat", 150},
                  Cfg{"ltlf-incnat", 150}}) {
    CAPTURE(cfg.handle);
    SoundnessRig rig(cfg.handle, 77);
    TermStore& st = store();

    struct Inst {
      int kind;
      TermId m = 0, a = 0;
      NF x, y;
    };
    std::vector<Inst> insts;
    std::vector<TermId> ctx;
    for (int i = 0; i < cfg.rounds; ++i) {
      Inst in;
      in.kind = int(rig.rng() % 5);
      switch (in.kind) {
        case 0:
          in.m = rig.r_act();
          in.a = rig.r_test();
          ctx.push_back(st.mk_seq(in.m, in.a));
          break;
        case 1:
          in.x = rig.r_nf(2);
          in.a = rig.r_test();
          ctx.push_back(st.mk_seq(nf_term(in.x), in.a));
          break;
        case 2:
          in.m = rig.r_act();
          in.x = rig.r_nf(2);
          ctx.push_back(st.mk_seq(in.m, nf_term(in.x)));
          break;
        case 3:
          in.x = rig.r_nf(2);
          in.y = rig.r_nf(2);
          ctx.push_back(st.mk_seq(nf_term(in.x), nf_term(in.y)));
          break;
        default:
          in.x = rig.r_nf(2);
          ctx.push_back(st.mk_star(nf_term(in.x)));
          break;
      }
      insts.push_back(std::move(in));
    }
    rig.th().bind(ctx);
    int done = 0;
    for (auto& in : insts) {
      try {
        switch (in.kind) {
          case 0:
            rig.expect_equiv(st.mk_seq(in.m, in.a), rig.eng().pb_dot(in.m, in.a));
            break;
          case 1:
            rig.expect_equiv(st.mk_seq(nf_term(in.x), in.a),
                             rig.eng().pb_test(in.x, in.a));
            break;
          case 2:
            rig.expect_equiv(st.mk_seq(in.m, nf_term(in.x)),
                             rig.eng().pb_restricted(in.m, in.x));
            break;
          case 3:
            rig.expect_equiv(st.mk_seq(nf_term(in.x), nf_term(in.y)),
                             rig.eng().pb_join(in.x, in.y));
            break;
          default:
            rig.expect_equiv(st.mk_star(nf_term(in.x)), rig.eng().pb_star(in.x));
            break;
        }
        ++done;
      } catch (const TheoryError&) {
        continue;
      }
    }
    CHECK(done * 5 >= cfg.rounds * 4);
  }
}

TEST_CASE("normalize agrees with the oracle on random programs") {
  for (const char* h : {"incnat", "bitvec", "ltlf-incnat"}) {
    CAPTURE(h);
    SoundnessRig rig(h, 909);
    TermStore& st = store();
    std::vector<TermId> terms;
    for (int i = 0; i < 60; ++i) {
      TermId p = st.mk_seq(rig.th().rand_act(rig.rng), rig.r_test());
      if (rig.rng() % 2) p = st.plus2(p, rig.th().rand_act(rig.rng));
      if (rig.rng() % 3 == 0) p = st.mk_star(p);
      terms.push_back(p);
    }
    rig.th().bind(terms);
    for (TermId p : terms) {
      try {
        NF x = rig.eng().normalize(p);
        rig.expect_equiv(p, x);
      } catch (const TheoryError&) {
        continue;
      }
    }
  }
}

TEST_CASE("normalize is deterministic across engines") {
  TermStore& st = store();
  TermId p = st.mk_seq(st.mk_star(st.mk_seq(inat_gt("x", 0), inat_inc("x"))),
                       ltlf_ever(inat_gt("x", 2)));
  auto s1 = make_session("ltlf-incnat");
  auto s2 = make_session("ltlf-incnat");
  NF a = s1.engine->normalize(p);
  NF b = s2.engine->normalize(p);
  NF c = s1.engine->normalize(p);
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("fuel exhaustion is reported, not looped") {
  EngineOptions opts;
  opts.fuel = 20;
  auto ses = make_session("incnat", opts);
  TermStore& st = store();
  TermId p = st.mk_star(st.mk_seq(st.mk_not(inat_gt("x", 9)), inat_inc("x")));
  CHECK_THROWS_AS((void)ses.engine->normalize(p), FuelExhausted);
}

TEST_CASE("measure checks run and stay silent on healthy theories") {
  EngineOptions opts;
  opts.check_measure = true;
  auto ses = make_session("ltlf-incnat", opts);
  TermStore& st = store();
  TermId p = st.mk_seq(st.mk_star(inat_inc("x")), ltlf_ever(inat_gt("x", 1)));
  NF x = ses.engine->normalize(p);
  CHECK(x.sum.size() == 3);
  CHECK(ses.engine->measure_checks() > 0);
}
