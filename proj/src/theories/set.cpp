// Set(E): unbounded sets of constants with insert/remove/in, over an
// expression theory providing e=c tests (shipped with IncNat expressions).
//
// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cctype>
#include <map>

#include "kmt/theories/theories.hpp"

namespace kmt {

TermId set_in(const std::string& x, int64_t c) {
  Payload p;
  p.th = Th::Set;
  p.tag = 0;
  p.test = true;
  p.s = x;
  p.a = c;
  return store().prim(std::move(p));
}

TermId set_insert(const std::string& x, const NatExpr& e) {
  Payload p;
  p.th = Th::Set;
  p.tag = 1;
  p.s = x;
  p.es = {e};
  return store().prim(std::move(p));
}

TermId set_remove(const std::string& x, const NatExpr& e) {
  Payload p;
  p.th = Th::Set;
  p.tag = 2;
  p.s = x;
  p.es = {e};
  return store().prim(std::move(p));
}

namespace {

int64_t eval_expr(const NatExpr& e, const Value& st) {
  if (!e.is_var) return e.n;
  return st.contains(e.var) ? st[e.var].get<int64_t>() : 0;
}

bool set_has(const Value& st, const std::string& x, int64_t c) {
  if (!st.contains(x)) return false;
  for (auto& v : st[x]) {
    if (v.get<int64_t>() == c) return true;
  }
  return false;
}

class SetTheory final : public Theory {
 public:
  explicit SetTheory(std::unique_ptr<Theory> inner)
      : inner_(std::move(inner)) {}

  std::string name() const override { return "set(" + inner_->name() + ")"; }

  bool owns_prim(TermId t) override {
    return mine(t) || inner_->owns_prim(t);
  }

  TestSet sub_prim(TermId alpha) override {
    if (!mine(alpha)) return inner_->sub_prim(alpha);
    Payload p = store().payload(alpha);
    TestSet out = {alpha};
    for (auto& e : exprs_) {
      TermId eq = inat_expr_eq(e, p.a);
      out.push_back(eq);
      out.push_back(store().nnf(store().mk_not(eq)));
    }
    return make_set(std::move(out));
  }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine& eng) override {
    bool mp = mine(pi), ma = mine(alpha);
    if (!mp && !ma) return inner_->push_back_prim(pi, alpha, eng);
    if (mp != ma) return {alpha};
    Payload a = store().payload(pi);
    Payload t = store().payload(alpha);
    if (a.s != t.s) return {alpha};
    TermId eq = inat_expr_eq(a.es[0], t.a);
    if (a.tag == 1) return make_set({eq, alpha});
    return {test_mul2(store().nnf(store().mk_not(eq)), alpha)};
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    auto [sl, il] = split_lits(lits);
    std::map<std::pair<std::string, int64_t>, bool> forced;
    for (auto& [atom, truth] : sl) {
      Payload p = store().payload(atom);
      auto [it, ins] = forced.emplace(std::make_pair(p.s, p.a), truth);
      if (!ins && it->second != truth) return false;
    }
    return inner_->conj_sat(il);
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    if (!conj_sat(lits)) return std::nullopt;
    auto [sl, il] = split_lits(lits);
    auto im = inner_->conj_model(il);
    if (!im) return std::nullopt;
    Value st = default_state();
    for (auto& [k, v] : im->items()) st[k] = v;
    for (auto& [atom, truth] : sl) {
      Payload p = store().payload(atom);
      if (truth) st[p.s].push_back(p.a);
    }
    return st;
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest& ev) override {
    if (!mine(alpha)) return inner_->pred(alpha, t, ev);
    Payload p = store().payload(alpha);
    return set_has(t.back().state, p.s, p.a);
  }

  Value act(TermId pi, const Value& st) override {
    if (!mine(pi)) return inner_->act(pi, st);
    Payload p = store().payload(pi);
    int64_t c = eval_expr(p.es[0], st);
    Value out = st;
    std::vector<int64_t> vals;
    if (out.contains(p.s))
      for (auto& v : out[p.s]) vals.push_back(v.get<int64_t>());
    if (p.tag == 1) {
      if (std::find(vals.begin(), vals.end(), c) == vals.end())
        vals.push_back(c);
    } else {
      vals.erase(std::remove(vals.begin(), vals.end(), c), vals.end());
    }
    std::sort(vals.begin(), vals.end());
    out[p.s] = vals;
    return out;
  }

  std::vector<Value> enum_states(const Budget& b) override {
    std::vector<std::pair<std::string, int64_t>> slots;
    for (auto& x : setvars_)
      for (int64_t c : consts_) slots.emplace_back(x, c);
    std::vector<Value> out;
    uint64_t combos =
        slots.size() >= 12 ? 4096 : (uint64_t(1) << slots.size());
    for (auto& is : inner_->enum_states(b)) {
      for (uint64_t bits = 0; bits < combos; ++bits) {
        Value st = default_state();
        for (auto& [k, v] : is.items()) st[k] = v;
        for (size_t i = 0; i < slots.size(); ++i)
          if ((bits >> i) & 1) st[slots[i].first].push_back(slots[i].second);
        out.push_back(std::move(st));
        if (out.size() >= 4096) return out;
      }
    }
    return out;
  }

  Value default_state() override {
    Value st = inner_->default_state();
    for (auto& x : setvars_) st[x] = Value::array();
    return st;
  }

  bool start_eval(TermId alpha, const Value& st, const StartEval& ev) override {
    if (!mine(alpha)) return inner_->start_eval(alpha, st, ev);
    Payload p = store().payload(alpha);
    return set_has(st, p.s, p.a);
  }

  std::optional<TermId> parse_call(const std::string& head,
                                   const std::vector<std::string>& args,
                                   const ParseTerm& pt) override {
    if (head == "in" && args.size() == 2)
      return set_in(args[0], std::stoll(args[1]));
    if ((head == "insert" || head == "remove") && args.size() == 2) {
      NatExpr e = parse_expr(args[1]);
      return head == "insert" ? set_insert(args[0], e)
                              : set_remove(args[0], e);
    }
    return inner_->parse_call(head, args, pt);
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    return inner_->parse_raw(toks);
  }

  TermId rand_test(std::mt19937_64& rng) override {
    if (rng() & 1) return inner_->rand_test(rng);
    return set_in(pick_var(rng), int64_t(rng() % 5));
  }

  TermId rand_act(std::mt19937_64& rng) override {
    if (rng() & 1) return inner_->rand_act(rng);
    NatExpr e;
    if (rng() % 3 == 0) {
      e.is_var = true;
      e.var = (rng() & 1) ? "x" : "y";
    } else {
      e.n = int64_t(rng() % 5);
    }
    std::string v = pick_var(rng);
    return (rng() & 1) ? set_insert(v, e) : set_remove(v, e);
  }

  void bind(const std::vector<TermId>& query_terms) override {
    setvars_.clear();
    exprs_.clear();
    consts_.clear();
    for (TermId q : query_terms) {
      for (TermId p : prim_tests_of(q)) collect(p);
      for (TermId p : prim_acts_of(q)) collect(p);
    }
    std::sort(setvars_.begin(), setvars_.end());
    setvars_.erase(std::unique(setvars_.begin(), setvars_.end()),
                   setvars_.end());
    std::sort(consts_.begin(), consts_.end());
    consts_.erase(std::unique(consts_.begin(), consts_.end()), consts_.end());
    inner_->bind(query_terms);
    clear_sub_cache();
  }

  bool temporal_hint() const override { return inner_->temporal_hint(); }

 private:
  bool mine(TermId t) const { return store().payload(t).th == Th::Set; }

  void collect(TermId prim) {
    Payload p = store().payload(prim);
    if (p.th != Th::Set) return;
    setvars_.push_back(p.s);
    if (p.tag == 0) {
      consts_.push_back(p.a);
    } else if (std::find(exprs_.begin(), exprs_.end(), p.es[0]) ==
               exprs_.end()) {
      exprs_.push_back(p.es[0]);
    }
  }

  std::pair<std::vector<Lit>, std::vector<Lit>> split_lits(
      const std::vector<Lit>& lits) {
    std::vector<Lit> sl, il;
    for (auto& l : lits) (mine(l.first) ? sl : il).push_back(l);
    return {sl, il};
  }

  static NatExpr parse_expr(const std::string& s) {
    NatExpr e;
    if (!s.empty() && (std::isdigit(s[0]) || s[0] == '-')) {
      e.n = std::stoll(s);
    } else {
      e.is_var = true;
      e.var = s;
    }
    return e;
  }

  std::string pick_var(std::mt19937_64& rng) {
    static const std::vector<std::string> pool = {"s", "t"};
    const auto& vs = setvars_.empty() ? pool : setvars_;
    return vs[rng() % vs.size()];
  }

  std::unique_ptr<Theory> inner_;
  std::vector<std::string> setvars_;
  std::vector<NatExpr> exprs_;
  std::vector<int64_t> consts_;
};

}  // namespace

std::unique_ptr<Theory> make_set_theory(std::unique_ptr<Theory> inner) {
  return std::make_unique<SetTheory>(std::move(inner));
}

}  // namespace kmt
