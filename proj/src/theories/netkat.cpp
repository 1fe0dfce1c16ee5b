// Tracing NetKAT: packet-field tests f=v and assignments f<-v over finite
// field/value universes.
//
// SPDX-License-Identifier: MIT
#include <algorithm>

#include "kmt/theories/theories.hpp"

namespace kmt {

TermId nk_eq(const std::string& f, const std::string& v) {
  Payload p;
  p.th = Th::NetKat;
  p.tag = 0;
  p.test = true;
  p.s = f;
  p.s2 = v;
  return store().prim(std::move(p));
}

TermId nk_assign(const std::string& f, const std::string& v) {
  Payload p;
  p.th = Th::NetKat;
  p.tag = 1;
  p.s = f;
  p.s2 = v;
  return store().prim(std::move(p));
}

namespace {

class NetKatTheory final : public Theory {
 public:
  std::string name() const override { return "netkat"; }

  bool owns_prim(TermId t) override {
    return store().payload(t).th == Th::NetKat;
  }

  TestSet sub_prim(TermId alpha) override { return {alpha}; }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine&) override {
    Payload a = store().payload(pi);
    Payload t = store().payload(alpha);
    if (a.s != t.s) return {alpha};
    return {a.s2 == t.s2 ? store().one() : store().zero()};
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    return solve(lits).has_value();
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    return solve(lits);
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest&) override {
    Payload p = store().payload(alpha);
    const Value& st = t.back().state;
    return st.contains(p.s) && st[p.s].get<std::string>() == p.s2;
  }

  Value act(TermId pi, const Value& st) override {
    Payload p = store().payload(pi);
    Value out = st;
    out[p.s] = p.s2;
    return out;
  }

  std::vector<Value> enum_states(const Budget&) override {
    std::vector<Value> out = {default_state()};
    for (auto& f : fields_) {
      std::vector<Value> next;
      for (auto& st : out) {
        for (auto& v : universe_.at(f)) {
          Value s2 = st;
          s2[f] = v;
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
    for (auto& f : fields_) st[f] = universe_.at(f).front();
    return st;
  }

  bool start_eval(TermId alpha, const Value& st, const StartEval&) override {
    Payload p = store().payload(alpha);
    return st.contains(p.s) && st[p.s].get<std::string>() == p.s2;
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    if (toks.size() == 3 && toks[1] == "=") return nk_eq(toks[0], toks[2]);
    if (toks.size() == 3 && toks[1] == "<-") return nk_assign(toks[0], toks[2]);
    return std::nullopt;
  }

  TermId rand_test(std::mt19937_64& rng) override {
    auto [f, v] = pick(rng);
    return nk_eq(f, v);
  }

  TermId rand_act(std::mt19937_64& rng) override {
    auto [f, v] = pick(rng);
    return nk_assign(f, v);
  }

  void bind(const std::vector<TermId>& query_terms) override {
    fields_.clear();
    universe_.clear();
    for (TermId q : query_terms) {
      for (TermId p : prim_tests_of(q)) collect(p);
      for (TermId p : prim_acts_of(q)) collect(p);
    }
  }

 private:
  void collect(TermId prim) {
    Payload p = store().payload(prim);
    if (p.th != Th::NetKat) return;
    if (universe_.find(p.s) == universe_.end()) fields_.push_back(p.s);
    auto& vals = universe_[p.s];
    if (std::find(vals.begin(), vals.end(), p.s2) == vals.end())
      vals.push_back(p.s2);
  }

  // A field carries exactly one value; negations close over the finite
  // universe, so a field with every value excluded is a contradiction.
  std::optional<Value> solve(const std::vector<Lit>& lits) {
    std::unordered_map<std::string, std::string> pinned;
    std::unordered_map<std::string, std::vector<std::string>> excluded;
    for (auto& [atom, truth] : lits) {
      Payload p = store().payload(atom);
      if (truth) {
        auto [it, ins] = pinned.emplace(p.s, p.s2);
        if (!ins && it->second != p.s2) return std::nullopt;
      } else {
        excluded[p.s].push_back(p.s2);
      }
    }
    Value st = fields_.empty() ? Value::object() : default_state();
    for (auto& [f, v] : pinned) {
      auto ex = excluded.find(f);
      if (ex != excluded.end() &&
          std::find(ex->second.begin(), ex->second.end(), v) !=
              ex->second.end())
        return std::nullopt;
      st[f] = v;
    }
    for (auto& [f, ex] : excluded) {
      if (pinned.count(f)) continue;
      std::vector<std::string> vals;
      auto it = universe_.find(f);
      if (it != universe_.end()) vals = it->second;
      for (auto& v : ex)
        if (std::find(vals.begin(), vals.end(), v) == vals.end())
          vals.push_back(v);
      bool found = false;
      for (auto& v : vals) {
        if (std::find(ex.begin(), ex.end(), v) == ex.end()) {
          st[f] = v;
          found = true;
          break;
        }
      }
      if (!found) {
        if (it != universe_.end()) return std::nullopt;
        st[f] = "~" + ex.front();  // universe unknown: pick a fresh value
      }
    }
    return st;
  }

  std::pair<std::string, std::string> pick(std::mt19937_64& rng) {
    if (fields_.empty()) {
      static const std::vector<std::string> fpool = {"sw", "pt"};
      static const std::vector<std::string> vpool = {"v0", "v1"};
      return {fpool[rng() % fpool.size()], vpool[rng() % vpool.size()]};
    }
    const auto& f = fields_[rng() % fields_.size()];
    const auto& vals = universe_.at(f);
    return {f, vals[rng() % vals.size()]};
  }

  std::vector<std::string> fields_;
  std::unordered_map<std::string, std::vector<std::string>> universe_;
};

}  // namespace

std::unique_ptr<Theory> make_netkat_theory() {
  return std::make_unique<NetKatTheory>();
}

}  // namespace kmt
