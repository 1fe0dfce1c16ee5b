// BitVec: boolean variables with b=true tests and set/unset actions.
//
// SPDX-License-Identifier: MIT
#include <algorithm>

#include "kmt/theories/theories.hpp"

namespace kmt {

TermId bv_eq(const std::string& b) {
  Payload p;
  p.th = Th::BitVec;
  p.tag = 0;
  p.test = true;
  p.s = b;
  return store().prim(std::move(p));
}

TermId bv_set(const std::string& b) {
  Payload p;
  p.th = Th::BitVec;
  p.tag = 1;
  p.s = b;
  return store().prim(std::move(p));
}

TermId bv_unset(const std::string& b) {
  Payload p;
  p.th = Th::BitVec;
  p.tag = 2;
  p.s = b;
  return store().prim(std::move(p));
}

namespace {

class BitVecTheory final : public Theory {
 public:
  std::string name() const override { return "bitvec"; }

  bool owns_prim(TermId t) override {
    return store().payload(t).th == Th::BitVec;
  }

  TestSet sub_prim(TermId alpha) override { return {alpha}; }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine&) override {
    Payload a = store().payload(pi);
    Payload t = store().payload(alpha);
    if (a.s != t.s) return {alpha};
    return {a.tag == 1 ? store().one() : store().zero()};
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    std::unordered_map<std::string, bool> forced;
    for (auto& [atom, truth] : lits) {
      std::string var = store().payload(atom).s;
      auto [it, inserted] = forced.emplace(var, truth);
      if (!inserted && it->second != truth) return false;
    }
    return true;
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    Value st = default_state();
    for (auto& [atom, truth] : lits) st[store().payload(atom).s] = truth;
    return st;
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest&) override {
    const Value& st = t.back().state;
    std::string var = store().payload(alpha).s;
    return st.contains(var) && st[var].get<bool>();
  }

  Value act(TermId pi, const Value& st) override {
    Payload p = store().payload(pi);
    Value out = st;
    out[p.s] = (p.tag == 1);
    return out;
  }

  std::vector<Value> enum_states(const Budget& b) override {
    size_t k = vars_.size();
    uint64_t total = k >= 20 ? (uint64_t(1) << 20) : (uint64_t(1) << k);
    uint64_t cap = std::max<uint64_t>(
        1, std::min<uint64_t>(total, uint64_t(std::max(b.states, 1))));
    std::vector<Value> out;
    for (uint64_t bits = 0; bits < cap; ++bits) {
      Value st = Value::object();
      for (size_t i = 0; i < k; ++i) st[vars_[i]] = ((bits >> i) & 1) != 0;
      out.push_back(std::move(st));
    }
    return out;
  }

  Value default_state() override {
    Value st = Value::object();
    for (auto& v : vars_) st[v] = false;
    return st;
  }

  bool start_eval(TermId alpha, const Value& st, const StartEval&) override {
    std::string var = store().payload(alpha).s;
    return st.contains(var) && st[var].get<bool>();
  }

  std::optional<TermId> parse_call(const std::string& head,
                                   const std::vector<std::string>& args,
                                   const ParseTerm&) override {
    if ((head == "set" || head == "unset") && args.size() == 1)
      return head == "set" ? bv_set(args[0]) : bv_unset(args[0]);
    return std::nullopt;
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    if (toks.size() == 3 && toks[1] == "=" &&
        (toks[2] == "true" || toks[2] == "false")) {
      TermId eq = bv_eq(toks[0]);
      return toks[2] == "true" ? eq : store().mk_not(eq);
    }
    return std::nullopt;
  }

  TermId rand_test(std::mt19937_64& rng) override {
    return bv_eq(pick_var(rng));
  }

  TermId rand_act(std::mt19937_64& rng) override {
    std::string v = pick_var(rng);
    return (rng() & 1) ? bv_set(v) : bv_unset(v);
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
  void collect(TermId prim, std::vector<std::string>& vars) {
    Payload p = store().payload(prim);
    if (p.th == Th::BitVec) vars.push_back(p.s);
  }

  std::string pick_var(std::mt19937_64& rng) {
    static const std::vector<std::string> pool = {"b0", "b1", "b2"};
    const auto& vs = vars_.empty() ? pool : vars_;
    return vs[rng() % vs.size()];
  }

  std::vector<std::string> vars_;
};

}  // namespace

std::unique_ptr<Theory> make_bitvec_theory() {
  return std::make_unique<BitVecTheory>();
}

}  // namespace kmt
