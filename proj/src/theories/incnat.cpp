// IncNat: monotone natural counters with x>n tests, inc and assignment.
//
// SPDX-License-Identifier: MIT
#include <algorithm>

#include "kmt/theories/theories.hpp"

namespace kmt {

TermId inat_gt(const std::string& x, int64_t n) {
  Payload p;
  p.th = Th::IncNat;
  p.tag = 0;
  p.test = true;
  p.s = x;
  p.a = n;
  return store().prim(std::move(p));
}

TermId inat_inc(const std::string& x) {
  Payload p;
  p.th = Th::IncNat;
  p.tag = 1;
  p.s = x;
  return store().prim(std::move(p));
}

TermId inat_assign(const std::string& x, int64_t n) {
  Payload p;
  p.th = Th::IncNat;
  p.tag = 2;
  p.s = x;
  p.a = n;
  return store().prim(std::move(p));
}

TermId inat_expr_eq(const NatExpr& e, int64_t c) {
  if (!e.is_var) return e.n == c ? store().one() : store().zero();
  if (c == 0) return store().mk_not(inat_gt(e.var, 0));
  return test_mul2(inat_gt(e.var, c - 1), store().mk_not(inat_gt(e.var, c)));
}

namespace {

int64_t state_val(const Value& st, const std::string& x) {
  return st.contains(x) ? st[x].get<int64_t>() : 0;
}

class IncNatTheory final : public Theory {
 public:
  std::string name() const override { return "incnat"; }

  bool owns_prim(TermId t) override {
    return store().payload(t).th == Th::IncNat;
  }

  TestSet sub_prim(TermId alpha) override {
    Payload p = store().payload(alpha);
    TestSet out;
    for (int64_t m = 0; m <= p.a; ++m) out.push_back(inat_gt(p.s, m));
    return make_set(std::move(out));
  }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine&) override {
    Payload a = store().payload(pi);
    Payload t = store().payload(alpha);
    if (a.s != t.s) return {alpha};
    if (a.tag == 1) {
      if (t.a == 0) return {store().one()};
      return {inat_gt(t.s, t.a - 1)};
    }
    return {a.a > t.a ? store().one() : store().zero()};
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    return bounds_of(lits).has_value();
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    auto bounds = bounds_of(lits);
    if (!bounds) return std::nullopt;
    Value st = default_state();
    for (auto& [var, lowup] : *bounds) st[var] = lowup.first;
    return st;
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest&) override {
    Payload p = store().payload(alpha);
    return state_val(t.back().state, p.s) > p.a;
  }

  Value act(TermId pi, const Value& st) override {
    Payload p = store().payload(pi);
    Value out = st;
    out[p.s] = p.tag == 1 ? state_val(st, p.s) + 1 : p.a;
    return out;
  }

  std::vector<Value> enum_states(const Budget& b) override {
    int64_t top = std::max(b.states, 1);
    std::vector<Value> out = {default_state()};
    for (auto& v : vars_) {
      std::vector<Value> next;
      for (auto& st : out) {
        for (int64_t n = 0; n < top; ++n) {
          Value s2 = st;
          s2[v] = n;
          next.push_back(std::move(s2));
          if (next.size() >= 4096) return next;
        }
      }
      out = std::move(next);
    }
    return out;
  }

  Value default_state() override {
    Value st = Value::object();
    for (auto& v : vars_) st[v] = 0;
    return st;
  }

  bool start_eval(TermId alpha, const Value& st, const StartEval&) override {
    Payload p = store().payload(alpha);
    return state_val(st, p.s) > p.a;
  }

  std::vector<StartModel> enum_start_models(const std::vector<TermId>& atoms,
                                            Engine&) override {
    std::vector<std::string> vars;
    std::unordered_map<std::string, std::vector<int64_t>> cands;
    for (TermId a : atoms) {
      Payload p = store().payload(a);
      if (cands.find(p.s) == cands.end()) vars.push_back(p.s);
      cands[p.s].push_back(p.a + 1);
    }
    for (auto& v : vars) {
      auto& c = cands[v];
      c.push_back(0);
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    std::vector<StartModel> out;
    Value st = default_state();
    build(atoms, vars, cands, 0, st, out);
    return out;
  }

  std::optional<TermId> parse_call(const std::string& head,
                                   const std::vector<std::string>& args,
                                   const ParseTerm&) override {
    if (head == "inc" && args.size() == 1) return inat_inc(args[0]);
    return std::nullopt;
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    if (toks.size() == 3 && toks[1] == ">")
      return inat_gt(toks[0], std::stoll(toks[2]));
    if (toks.size() == 3 && toks[1] == ":=")
      return inat_assign(toks[0], std::stoll(toks[2]));
    return std::nullopt;
  }

  TermId rand_test(std::mt19937_64& rng) override {
    return inat_gt(pick_var(rng), int64_t(rng() % 9));
  }

  TermId rand_act(std::mt19937_64& rng) override {
    std::string v = pick_var(rng);
    return (rng() & 1) ? inat_inc(v) : inat_assign(v, int64_t(rng() % 9));
  }

  void bind(const std::vector<TermId>& query_terms) override {
    std::vector<std::string> vars;
    for (TermId q : query_terms) {
      for (TermId p : prim_tests_of(q)) collect(p, vars);
      for (TermId p : prim_acts_of(q)) collect(p, vars);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    vars_ = std::move(vars);
  }

 private:
  using Bounds = std::unordered_map<std::string, std::pair<int64_t, int64_t>>;

  void collect(TermId prim, std::vector<std::string>& vars) {
    Payload p = store().payload(prim);
    if (p.th == Th::IncNat) vars.push_back(p.s);
  }

  // Per-variable feasible interval [low, up] from x>n lower bounds and
  // ¬(x>m) upper bounds; nullopt when some interval is empty.
  std::optional<Bounds> bounds_of(const std::vector<Lit>& lits) {
    Bounds b;
    for (auto& [atom, truth] : lits) {
      Payload p = store().payload(atom);
      auto& [low, up] = b.try_emplace(p.s, 0, INT64_MAX).first->second;
      if (truth)
        low = std::max(low, p.a + 1);
      else
        up = std::min(up, p.a);
      if (low > up) return std::nullopt;
    }
    return b;
  }

  void build(const std::vector<TermId>& atoms,
             const std::vector<std::string>& vars,
             const std::unordered_map<std::string, std::vector<int64_t>>& cands,
             size_t i, Value& st, std::vector<StartModel>& out) {
    if (i == vars.size()) {
      StartModel m;
      m.state = st;
      for (TermId a : atoms) {
        Payload p = store().payload(a);
        m.truths.push_back(state_val(st, p.s) > p.a);
      }
      out.push_back(std::move(m));
      return;
    }
    for (int64_t v : cands.at(vars[i])) {
      st[vars[i]] = v;
      build(atoms, vars, cands, i + 1, st, out);
    }
  }

  std::string pick_var(std::mt19937_64& rng) {
    static const std::vector<std::string> pool = {"x", "y"};
    const auto& vs = vars_.empty() ? pool : vars_;
    return vs[rng() % vs.size()];
  }

  std::vector<std::string> vars_;
};

}  // namespace

std::unique_ptr<Theory> make_incnat_theory() {
  return std::make_unique<IncNatTheory>();
}

}  // namespace kmt
