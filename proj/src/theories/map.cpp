// Map(E): unbounded maps with constant-key writes and expression-key reads,
// over an expression theory providing e=c tests (shipped with IncNat).
//
// SPDX-License-Identifier: MIT
#include <algorithm>
#include <cctype>
#include <map>

#include "kmt/theories/theories.hpp"

namespace kmt {

TermId map_read(const std::string& x, const NatExpr& key, int64_t val) {
  Payload p;
  p.th = Th::Map;
  p.tag = 0;
  p.test = true;
  p.s = x;
  p.es = {key};
  p.a = val;
  return store().prim(std::move(p));
}

TermId map_write(const std::string& x, int64_t key, const NatExpr& val) {
  Payload p;
  p.th = Th::Map;
  p.tag = 1;
  p.s = x;
  p.a = key;
  p.es = {val};
  return store().prim(std::move(p));
}

namespace {

int64_t eval_expr(const NatExpr& e, const Value& st) {
  if (!e.is_var) return e.n;
  return st.contains(e.var) ? st[e.var].get<int64_t>() : 0;
}

std::optional<int64_t> map_lookup(const Value& st, const std::string& x,
                                  int64_t key) {
  if (!st.contains(x)) return std::nullopt;
  std::string k = std::to_string(key);
  if (!st[x].contains(k)) return std::nullopt;
  return st[x][k].get<int64_t>();
}

class MapTheory final : public Theory {
 public:
  explicit MapTheory(std::unique_ptr<Theory> inner)
      : inner_(std::move(inner)) {}

  std::string name() const override { return "map(" + inner_->name() + ")"; }

  bool owns_prim(TermId t) override {
    return mine(t) || inner_->owns_prim(t);
  }

  TestSet sub_prim(TermId alpha) override {
    if (!mine(alpha)) return inner_->sub_prim(alpha);
    Payload p = store().payload(alpha);
    TestSet out = {alpha};
    std::vector<int64_t> cs = keys_;
    cs.insert(cs.end(), vals_.begin(), vals_.end());
    cs.push_back(p.a);
    for (auto& e : all_exprs(p.es[0])) {
      for (int64_t c : cs) {
        TermId eq = inat_expr_eq(e, c);
        out.push_back(eq);
        out.push_back(store().nnf(store().mk_not(eq)));
      }
    }
    // Assignments rewrite variable keys to constants, so those reads sit
    // below this one in the ordering.
    if (p.es[0].is_var) {
      for (int64_t c : assigns_) {
        NatExpr key;
        key.n = c;
        out.push_back(map_read(p.s, key, p.a));
      }
    }
    return make_set(std::move(out));
  }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine& eng) override {
    bool mp = mine(pi), ma = mine(alpha);
    if (!mp && !ma) return inner_->push_back_prim(pi, alpha, eng);
    if (mp && !ma) return {alpha};
    Payload t = store().payload(alpha);
    if (!mp) {
      // Inner action against a read: constant keys are untouched; variable
      // keys survive only assignment, which rewrites them to constants.
      if (!t.es[0].is_var) return {alpha};
      Payload a = store().payload(pi);
      if (a.th != Th::IncNat || a.s != t.es[0].var) return {alpha};
      if (a.tag == 2) {
        NatExpr key;
        key.n = a.a;
        return {map_read(t.s, key, t.a)};
      }
      throw TheoryError(
          "map pushback not expressible: action " + store().display(pi) +
          " changes the key of " + store().display(alpha));
    }
    Payload a = store().payload(pi);
    if (a.s != t.s) return {alpha};
    NatExpr wkey;
    wkey.n = a.a;
    TermId key_eq = inat_expr_eq(t.es[0], a.a);
    TermId val_eq = inat_expr_eq(a.es[0], t.a);
    return make_set({test_mul2(key_eq, val_eq),
                     test_mul2(store().nnf(store().mk_not(key_eq)), alpha)});
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    return solve(lits).has_value();
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    return solve(lits);
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest& ev) override {
    if (!mine(alpha)) return inner_->pred(alpha, t, ev);
    Payload p = store().payload(alpha);
    auto v = map_lookup(t.back().state, p.s,
                        eval_expr(p.es[0], t.back().state));
    return v && *v == p.a;
  }

  Value act(TermId pi, const Value& st) override {
    if (!mine(pi)) return inner_->act(pi, st);
    Payload p = store().payload(pi);
    Value out = st;
    out[p.s][std::to_string(p.a)] = eval_expr(p.es[0], st);
    return out;
  }

  std::vector<Value> enum_states(const Budget& b) override {
    std::vector<std::pair<std::string, int64_t>> slots;
    for (auto& x : mapvars_)
      for (int64_t k : keys_) slots.emplace_back(x, k);
    std::vector<int64_t> opts = vals_;
    std::vector<Value> out;
    for (auto& is : inner_->enum_states(b)) {
      size_t before = out.size();
      fill_slots(slots, opts, 0, is, out);
      if (out.size() == before) out.push_back(is);
      if (out.size() >= 4096) break;
    }
    return out;
  }

  Value default_state() override {
    Value st = inner_->default_state();
    for (auto& x : mapvars_) st[x] = Value::object();
    return st;
  }

  bool start_eval(TermId alpha, const Value& st, const StartEval& ev) override {
    if (!mine(alpha)) return inner_->start_eval(alpha, st, ev);
    Payload p = store().payload(alpha);
    auto v = map_lookup(st, p.s, eval_expr(p.es[0], st));
    return v && *v == p.a;
  }

  std::optional<TermId> parse_call(const std::string& head,
                                   const std::vector<std::string>& args,
                                   const ParseTerm& pt) override {
    return inner_->parse_call(head, args, pt);
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    // x [ k ] := e  |  x [ e ] = c
    if (toks.size() == 6 && toks[1] == "[" && toks[3] == "]") {
      if (toks[4] == ":=")
        return map_write(toks[0], std::stoll(toks[2]), parse_expr(toks[5]));
      if (toks[4] == "=") {
        NatExpr key = parse_expr(toks[2]);
        return map_read(toks[0], key, std::stoll(toks[5]));
      }
    }
    return inner_->parse_raw(toks);
  }

  TermId rand_test(std::mt19937_64& rng) override {
    if (rng() & 1) return inner_->rand_test(rng);
    NatExpr key;
    if (rng() % 3 == 0) {
      // Keys drawn from a pool disjoint from the inner generator's, so
      // random suites never demand the inexpressible key-shift pushback.
      key.is_var = true;
      key.var = (rng() & 1) ? "kx" : "ky";
    } else {
      key.n = int64_t(rng() % 3);
    }
    return map_read(pick_var(rng), key, int64_t(rng() % 3));
  }

  TermId rand_act(std::mt19937_64& rng) override {
    if (rng() & 1) return inner_->rand_act(rng);
    NatExpr val;
    if (rng() % 3 == 0) {
      val.is_var = true;
      val.var = (rng() & 1) ? "kx" : "ky";
    } else {
      val.n = int64_t(rng() % 3);
    }
    return map_write(pick_var(rng), int64_t(rng() % 3), val);
  }

  void bind(const std::vector<TermId>& query_terms) override {
    mapvars_.clear();
    keys_.clear();
    vals_.clear();
    exprs_.clear();
    assigns_.clear();
    for (TermId q : query_terms) {
      for (TermId p : prim_tests_of(q)) collect(p);
      for (TermId p : prim_acts_of(q)) {
        collect(p);
        Payload a = store().payload(p);
        if (a.th == Th::IncNat && a.tag == 2) assigns_.push_back(a.a);
      }
    }
    auto dedup = [](auto& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(mapvars_);
    dedup(keys_);
    dedup(vals_);
    dedup(assigns_);
    inner_->bind(query_terms);
    clear_sub_cache();
  }

  bool temporal_hint() const override { return inner_->temporal_hint(); }

 private:
  bool mine(TermId t) const { return store().payload(t).th == Th::Map; }

  void collect(TermId prim) {
    Payload p = store().payload(prim);
    if (p.th != Th::Map) return;
    mapvars_.push_back(p.s);
    if (p.tag == 0) {
      vals_.push_back(p.a);
      if (!p.es[0].is_var) keys_.push_back(p.es[0].n);
    } else {
      keys_.push_back(p.a);
      if (!p.es[0].is_var) vals_.push_back(p.es[0].n);
    }
    if (p.es[0].is_var &&
        std::find(exprs_.begin(), exprs_.end(), p.es[0]) == exprs_.end())
      exprs_.push_back(p.es[0]);
  }

  std::vector<NatExpr> all_exprs(const NatExpr& extra) {
    std::vector<NatExpr> out = exprs_;
    if (std::find(out.begin(), out.end(), extra) == out.end())
      out.push_back(extra);
    return out;
  }

  // Bounded search: enumerate inner-variable valuations for the key
  // expressions, then check read literals for consistency.
  std::optional<Value> solve(const std::vector<Lit>& lits) {
    std::vector<Lit> ml, il;
    for (auto& l : lits) (mine(l.first) ? ml : il).push_back(l);
    std::vector<std::string> vars;
    int64_t maxc = 1;
    for (auto& [atom, truth] : ml) {
      Payload p = store().payload(atom);
      maxc = std::max({maxc, p.a + 1, p.es[0].is_var ? 0 : p.es[0].n + 1});
      if (p.es[0].is_var) vars.push_back(p.es[0].var);
    }
    for (auto& [atom, truth] : il) {
      for (TermId pr : prim_tests_of(atom)) {
        Payload p = store().payload(pr);
        if (p.th == Th::IncNat) {
          maxc = std::max(maxc, p.a + 2);
          vars.push_back(p.s);
        }
      }
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<int64_t> assign(vars.size(), 0);
    for (;;) {
      Value st = default_state();
      for (size_t i = 0; i < vars.size(); ++i) st[vars[i]] = assign[i];
      if (check(ml, il, st)) return st;
      size_t i = 0;
      for (; i < vars.size(); ++i) {
        if (++assign[i] <= maxc) break;
        assign[i] = 0;
      }
      if (i == vars.size()) return std::nullopt;
    }
  }

  bool check(const std::vector<Lit>& ml, const std::vector<Lit>& il,
             Value& st) {
    for (auto& [atom, truth] : il) {
      if (eval_test_at_start(atom, st, *inner_) != truth) return false;
    }
    std::map<std::pair<std::string, int64_t>, int64_t> pinned;
    for (auto& [atom, truth] : ml) {
      if (!truth) continue;
      Payload p = store().payload(atom);
      auto key = std::make_pair(p.s, eval_expr(p.es[0], st));
      auto [it, ins] = pinned.emplace(key, p.a);
      if (!ins && it->second != p.a) return false;
    }
    for (auto& [atom, truth] : ml) {
      if (truth) continue;
      Payload p = store().payload(atom);
      auto it = pinned.find(std::make_pair(p.s, eval_expr(p.es[0], st)));
      if (it != pinned.end() && it->second == p.a) return false;
    }
    for (auto& [key, val] : pinned)
      st[key.first][std::to_string(key.second)] = val;
    return true;
  }

  void fill_slots(const std::vector<std::pair<std::string, int64_t>>& slots,
                  const std::vector<int64_t>& opts, size_t i, const Value& st,
                  std::vector<Value>& out) {
    if (out.size() >= 4096) return;
    if (i == slots.size()) {
      out.push_back(st);
      return;
    }
    fill_slots(slots, opts, i + 1, st, out);
    for (int64_t v : opts) {
      Value s2 = st;
      s2[slots[i].first][std::to_string(slots[i].second)] = v;
      fill_slots(slots, opts, i + 1, s2, out);
    }
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
    static const std::vector<std::string> pool = {"m", "w"};
    const auto& vs = mapvars_.empty() ? pool : mapvars_;
    return vs[rng() % vs.size()];
  }

  std::unique_ptr<Theory> inner_;
  std::vector<std::string> mapvars_;
  std::vector<int64_t> keys_, vals_, assigns_;
  std::vector<NatExpr> exprs_;
};

}  // namespace

std::unique_ptr<Theory> make_map_theory(std::unique_ptr<Theory> inner) {
  return std::make_unique<MapTheory>(std::move(inner));
}

}  // namespace kmt
