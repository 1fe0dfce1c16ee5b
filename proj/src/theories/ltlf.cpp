// LTLf(T): past-time finite-trace temporal logic over an arbitrary inner
// theory; Last and Since primitives, derived Ever/Always/WLast/BackTo/Start.
//
// SPDX-License-Identifier: MIT
#include <algorithm>
#include <mutex>
#include <set>

#include "kmt/automata.hpp"
#include "kmt/theories/theories.hpp"

namespace kmt {

TermId ltlf_last(TermId a) {
  Payload p;
  p.th = Th::Ltlf;
  p.tag = 0;
  p.test = true;
  p.ts = {a};
  return store().prim(std::move(p));
}

TermId ltlf_since(TermId a, TermId b) {
  Payload p;
  p.th = Th::Ltlf;
  p.tag = 1;
  p.test = true;
  p.ts = {a, b};
  return store().prim(std::move(p));
}

TermId ltlf_noop() {
  Payload p;
  p.th = Th::Ltlf;
  p.tag = 2;
  return store().prim(std::move(p));
}

TermId ltlf_ever(TermId a) { return ltlf_since(store().one(), a); }

TermId ltlf_always(TermId a) {
  return store().mk_not(ltlf_ever(store().mk_not(a)));
}

TermId ltlf_start() { return store().mk_not(ltlf_last(store().one())); }

TermId ltlf_wlast(TermId a) {
  return store().mk_not(ltlf_last(store().mk_not(a)));
}

TermId ltlf_backto(TermId a, TermId b) {
  return store().plus2(ltlf_since(a, b), ltlf_always(a));
}

namespace {

class LtlfTheory final : public Theory {
 public:
  explicit LtlfTheory(std::unique_ptr<Theory> inner)
      : inner_(std::move(inner)) {}

  std::string name() const override { return "ltlf(" + inner_->name() + ")"; }

  bool owns_prim(TermId t) override {
    return mine(t) || inner_->owns_prim(t);
  }

  TestSet sub_prim(TermId alpha) override {
    if (!mine(alpha)) return inner_->sub_prim(alpha);
    Payload p = store().payload(alpha);
    TestSet out = {alpha};
    for (TermId k : p.ts) out.push_back(k);
    return make_set(std::move(out));
  }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine& eng) override {
    bool mp = mine(pi), ma = mine(alpha);
    if (ma) {
      Payload t = store().payload(alpha);
      if (t.tag == 0) return {t.ts[0]};
      TermId ap = store().mk_plus(eng.push_test_prim(pi, t.ts[0]));
      TermId bp = store().mk_plus(eng.push_test_prim(pi, t.ts[1]));
      return make_set({bp, test_mul2(ap, alpha)});
    }
    if (mp) return {alpha};  // no-op leaves inner state unchanged
    return inner_->push_back_prim(pi, alpha, eng);
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    TestSet factors;
    for (auto& [atom, truth] : lits)
      factors.push_back(truth ? atom : store().nnf(store().mk_not(atom)));
    return satisfiable(test_mul(make_set(std::move(factors))));
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    Engine* eng = engine();
    std::unique_ptr<Engine> tmp;
    if (!eng) {
      tmp = std::make_unique<Engine>(*this);
      eng = tmp.get();
    }
    std::vector<TermId> atoms;
    for (auto& l : lits) atoms.push_back(l.first);
    for (auto& m : enum_start_models(atoms, *eng)) {
      bool ok = true;
      for (size_t i = 0; i < lits.size(); ++i)
        if (m.truths[i] != lits[i].second) ok = false;
      if (ok) return m.state;
    }
    return std::nullopt;
  }

  bool satisfiable(TermId test) override {
    {
      std::lock_guard<std::mutex> lk(sat_mu_);
      auto it = sat_memo_.find(test);
      if (it != sat_memo_.end()) return it->second;
      // Re-entrant query from our own labeling construction: answer true.
      // That only ever relaxes pruning, and the outer call still settles the
      // memoized verdict.
      if (!sat_busy_.insert(test).second) return true;
    }
    std::vector<TermId> alphabet = context_actions_;
    alphabet.push_back(ltlf_noop());
    bool sat;
    try {
      // Fresh engine: optimistic re-entrant answers must not stick in a
      // long-lived satisfiability memo.
      Engine scratch(*this);
      sat = labeling_sat(test, scratch, alphabet);
    } catch (...) {
      std::lock_guard<std::mutex> lk(sat_mu_);
      sat_busy_.erase(test);
      throw;
    }
    std::lock_guard<std::mutex> lk(sat_mu_);
    sat_busy_.erase(test);
    sat_memo_[test] = sat;
    return sat;
  }

  std::optional<Value> model(TermId test) override {
    Engine* eng = engine();
    std::unique_ptr<Engine> tmp;
    if (!eng) {
      tmp = std::make_unique<Engine>(*this);
      eng = tmp.get();
    }
    for (auto& m : enum_start_models(prim_tests_of(test), *eng)) {
      if (eval_test_at_start(test, m.state, *this)) return m.state;
    }
    return std::nullopt;
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest& ev) override {
    if (!mine(alpha)) return inner_->pred(alpha, t, ev);
    Payload p = store().payload(alpha);
    Trace prefix(t.begin(), t.end() - 1);
    if (p.tag == 0) return t.size() >= 2 && ev(p.ts[0], prefix);
    if (ev(p.ts[1], t)) return true;
    return t.size() >= 2 && ev(p.ts[0], t) && pred(alpha, prefix, ev);
  }

  Value act(TermId pi, const Value& st) override {
    if (mine(pi)) return st;
    return inner_->act(pi, st);
  }

  std::vector<Value> enum_states(const Budget& b) override {
    return inner_->enum_states(b);
  }

  Value default_state() override { return inner_->default_state(); }

  bool start_eval(TermId alpha, const Value& st, const StartEval& ev) override {
    if (!mine(alpha)) return inner_->start_eval(alpha, st, ev);
    Payload p = store().payload(alpha);
    if (p.tag == 0) return false;
    return ev(p.ts[1], st);
  }

  std::vector<StartModel> enum_start_models(const std::vector<TermId>& atoms,
                                            Engine& eng) override {
    std::vector<TermId> base;
    for (TermId a : atoms) {
      if (!mine(a)) {
        base.push_back(a);
        continue;
      }
      for (TermId nested : prim_tests_of(a))
        if (!mine(nested)) base.push_back(nested);
    }
    base = make_set(std::move(base));
    std::vector<StartModel> out;
    std::set<std::vector<bool>> seen;
    for (auto& bm : inner_->enum_start_models(base, eng)) {
      StartModel m;
      m.state = bm.state;
      for (TermId a : atoms)
        m.truths.push_back(eval_test_at_start(a, bm.state, *this));
      if (seen.insert(m.truths).second) out.push_back(std::move(m));
    }
    return out;
  }

  std::optional<TermId> parse_call(const std::string& head,
                                   const std::vector<std::string>& args,
                                   const ParseTerm& pt) override {
    auto need_tests = [&](size_t n) {
      if (args.size() != n)
        throw TheoryError(head + " expects " + std::to_string(n) +
                          " argument(s)");
    };
    if (head == "last") {
      need_tests(1);
      return ltlf_last(pt(args[0]));
    }
    if (head == "since") {
      need_tests(2);
      return ltlf_since(pt(args[0]), pt(args[1]));
    }
    if (head == "ever") {
      need_tests(1);
      return ltlf_ever(pt(args[0]));
    }
    if (head == "always") {
      need_tests(1);
      return ltlf_always(pt(args[0]));
    }
    if (head == "wlast") {
      need_tests(1);
      return ltlf_wlast(pt(args[0]));
    }
    if (head == "backto") {
      need_tests(2);
      return ltlf_backto(pt(args[0]), pt(args[1]));
    }
    return inner_->parse_call(head, args, pt);
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    if (toks.size() == 1 && toks[0] == "start") return ltlf_start();
    if (toks.size() == 1 && toks[0] == "nop") return ltlf_noop();
    return inner_->parse_raw(toks);
  }

  TermId rand_test(std::mt19937_64& rng) override {
    TermId a = inner_->rand_test(rng);
    switch (rng() % 5) {
      case 0:
        return ltlf_last(a);
      case 1:
        return ltlf_since(inner_->rand_test(rng), a);
      case 2:
        return ltlf_ever(a);
      case 3:
        return ltlf_always(a);
      default:
        return a;
    }
  }

  TermId rand_act(std::mt19937_64& rng) override {
    return inner_->rand_act(rng);
  }

  void bind(const std::vector<TermId>& query_terms) override {
    context_actions_.clear();
    for (TermId q : query_terms)
      for (TermId a : prim_acts_of(q)) context_actions_.push_back(a);
    context_actions_ = make_set(std::move(context_actions_));
    inner_->bind(query_terms);
    {
      std::lock_guard<std::mutex> lk(sat_mu_);
      sat_memo_.clear();
    }
    clear_sub_cache();
  }

  bool temporal_hint() const override { return true; }

 private:
  bool mine(TermId t) const { return store().payload(t).th == Th::Ltlf; }

  std::unique_ptr<Theory> inner_;
  std::vector<TermId> context_actions_;
  std::mutex sat_mu_;
  std::unordered_map<TermId, bool> sat_memo_;
  std::set<TermId> sat_busy_;
};

}  // namespace

std::unique_ptr<Theory> make_ltlf_theory(std::unique_ptr<Theory> inner) {
  return std::make_unique<LtlfTheory>(std::move(inner));
}

}  // namespace kmt
