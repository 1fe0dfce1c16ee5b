// SP: shortest-path lengths in ℕ∪{∞} with x<n tests and x:=min+(x⃗) updates.
//
// SPDX-License-Identifier: MIT
#include <algorithm>

#include "kmt/theories/theories.hpp"

namespace kmt {

TermId sp_lt(const std::string& x, int64_t n) {
  Payload p;
  p.th = Th::Sp;
  p.tag = 0;
  p.test = true;
  p.s = x;
  p.a = n;
  return store().prim(std::move(p));
}

TermId sp_minp(const std::string& x, const std::vector<std::string>& args) {
  Payload p;
  p.th = Th::Sp;
  p.tag = 1;
  p.s = x;
  p.ss = args;
  return store().prim(std::move(p));
}

namespace {

int64_t sp_val(const Value& st, const std::string& x) {
  if (!st.contains(x)) return kSpInf;
  if (st[x].is_string()) return kSpInf;
  return st[x].get<int64_t>();
}

void sp_store(Value& st, const std::string& x, int64_t v) {
  if (v == kSpInf)
    st[x] = "inf";
  else
    st[x] = v;
}

class SpTheory final : public Theory {
 public:
  std::string name() const override { return "sp"; }

  bool owns_prim(TermId t) override { return store().payload(t).th == Th::Sp; }

  TestSet sub_prim(TermId alpha) override {
    Payload p = store().payload(alpha);
    std::vector<std::string> vars = vars_;
    if (vars.empty()) vars.push_back(p.s);
    TestSet out;
    int64_t top = p.a == kSpInf ? maxc_ : p.a;
    for (auto& v : vars) {
      for (int64_t m = 0; m <= top; ++m) out.push_back(sp_lt(v, m));
      if (p.a == kSpInf) out.push_back(sp_lt(v, kSpInf));
    }
    out.push_back(alpha);
    return make_set(std::move(out));
  }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine&) override {
    Payload a = store().payload(pi);
    Payload t = store().payload(alpha);
    if (a.s != t.s) return {alpha};
    if (t.a == 0) return {store().zero()};
    TestSet out;
    int64_t bound = t.a == kSpInf ? kSpInf : t.a - 1;
    for (auto& arg : a.ss) out.push_back(sp_lt(arg, bound));
    return make_set(std::move(out));
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    return bounds_of(lits).has_value();
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    auto bounds = bounds_of(lits);
    if (!bounds) return std::nullopt;
    Value st = default_state();
    for (auto& [var, lowup] : *bounds) sp_store(st, var, lowup.first);
    return st;
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest&) override {
    Payload p = store().payload(alpha);
    return sp_val(t.back().state, p.s) < p.a;
  }

  Value act(TermId pi, const Value& st) override {
    Payload p = store().payload(pi);
    int64_t m = kSpInf;
    for (auto& arg : p.ss) m = std::min(m, sp_val(st, arg));
    Value out = st;
    sp_store(out, p.s, m == kSpInf ? kSpInf : m + 1);
    return out;
  }

  std::vector<Value> enum_states(const Budget& b) override {
    std::vector<int64_t> opts;
    for (int64_t n = 0; n <= std::min<int64_t>(maxc_, b.states - 2); ++n)
      opts.push_back(n);
    opts.push_back(kSpInf);
    std::vector<Value> out = {default_state()};
    for (auto& v : vars_) {
      std::vector<Value> next;
      for (auto& st : out) {
        for (int64_t n : opts) {
          Value s2 = st;
          sp_store(s2, v, n);
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
    for (auto& v : vars_) st[v] = "inf";
    return st;
  }

  bool start_eval(TermId alpha, const Value& st, const StartEval&) override {
    Payload p = store().payload(alpha);
    return sp_val(st, p.s) < p.a;
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    auto num = [](const std::string& s) {
      return s == "inf" ? kSpInf : std::stoll(s);
    };
    if (toks.size() == 3 && toks[1] == "<") return sp_lt(toks[0], num(toks[2]));
    if (toks.size() >= 5 && toks[1] == ":=" && toks[2] == "minp" &&
        toks[3] == "(" && toks.back() == ")") {
      std::vector<std::string> args;
      for (size_t i = 4; i + 1 < toks.size(); i += 2) {
        args.push_back(toks[i]);
        if (i + 2 < toks.size() && toks[i + 1] != ",") return std::nullopt;
      }
      if (args.empty()) return std::nullopt;
      return sp_minp(toks[0], args);
    }
    return std::nullopt;
  }

  TermId rand_test(std::mt19937_64& rng) override {
    int64_t n = (rng() % 4 == 0) ? kSpInf : int64_t(rng() % 5);
    return sp_lt(pick_var(rng), n);
  }

  TermId rand_act(std::mt19937_64& rng) override {
    const auto& vs = pool();
    std::vector<std::string> args;
    size_t k = 1 + rng() % 2;
    for (size_t i = 0; i < k; ++i) {
      std::string a = vs[rng() % vs.size()];
      if (std::find(args.begin(), args.end(), a) == args.end())
        args.push_back(a);
    }
    return sp_minp(pick_var(rng), args);
  }

  void bind(const std::vector<TermId>& query_terms) override {
    vars_.clear();
    maxc_ = 0;
    for (TermId q : query_terms) {
      for (TermId p : prim_tests_of(q)) collect(p);
      for (TermId p : prim_acts_of(q)) collect(p);
    }
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    clear_sub_cache();
  }

 private:
  using Bounds = std::unordered_map<std::string, std::pair<int64_t, int64_t>>;

  // Feasible interval per variable over {0,...} ∪ {∞}: positive x<n caps the
  // value at n−1 (kSpInf−1 encodes "any finite"), negative ¬(x<n) raises the
  // floor to n.
  std::optional<Bounds> bounds_of(const std::vector<Lit>& lits) {
    Bounds b;
    for (auto& [atom, truth] : lits) {
      Payload p = store().payload(atom);
      auto& [low, up] = b.try_emplace(p.s, 0, kSpInf).first->second;
      if (truth)
        up = std::min(up, p.a == kSpInf ? kSpInf - 1 : p.a - 1);
      else
        low = std::max(low, p.a);
      if (low > up) return std::nullopt;
    }
    return b;
  }

  void collect(TermId prim) {
    Payload p = store().payload(prim);
    if (p.th != Th::Sp) return;
    vars_.push_back(p.s);
    for (auto& a : p.ss) vars_.push_back(a);
    if (p.tag == 0 && p.a != kSpInf) maxc_ = std::max(maxc_, p.a);
  }

  const std::vector<std::string>& pool() const {
    static const std::vector<std::string> fallback = {"A", "B", "C"};
    return vars_.empty() ? fallback : vars_;
  }

  std::string pick_var(std::mt19937_64& rng) {
    const auto& vs = pool();
    return vs[rng() % vs.size()];
  }

  std::vector<std::string> vars_;
  int64_t maxc_ = 0;
};

}  // namespace

std::unique_ptr<Theory> make_sp_theory() {
  return std::make_unique<SpTheory>();
}

}  // namespace kmt
