// Prod: disjoint product of two theories; cross-side operations commute.
//
// SPDX-License-Identifier: MIT
#include <algorithm>

#include "kmt/theories/theories.hpp"

namespace kmt {
namespace {

class ProdTheory final : public Theory {
 public:
  ProdTheory(std::unique_ptr<Theory> l, std::unique_ptr<Theory> r)
      : l_(std::move(l)), r_(std::move(r)) {}

  std::string name() const override {
    return "prod(" + l_->name() + "," + r_->name() + ")";
  }

  bool owns_prim(TermId t) override {
    return l_->owns_prim(t) || r_->owns_prim(t);
  }

  TestSet sub_prim(TermId alpha) override { return side(alpha).sub_prim(alpha); }

  TestSet push_back_prim(TermId pi, TermId alpha, Engine& eng) override {
    bool pl = l_->owns_prim(pi);
    bool al = l_->owns_prim(alpha);
    if (pl != al) return {alpha};
    return (pl ? *l_ : *r_).push_back_prim(pi, alpha, eng);
  }

  bool conj_sat(const std::vector<Lit>& lits) override {
    auto [ll, rl] = split_lits(lits);
    return l_->conj_sat(ll) && r_->conj_sat(rl);
  }

  std::optional<Value> conj_model(const std::vector<Lit>& lits) override {
    auto [ll, rl] = split_lits(lits);
    auto lm = l_->conj_model(ll);
    auto rm = r_->conj_model(rl);
    if (!lm || !rm) return std::nullopt;
    return merged(*lm, *rm);
  }

  bool pred(TermId alpha, const Trace& t, const EvalTest& ev) override {
    return side(alpha).pred(alpha, t, ev);
  }

  Value act(TermId pi, const Value& st) override {
    return side(pi).act(pi, st);
  }

  std::vector<Value> enum_states(const Budget& b) override {
    std::vector<Value> out;
    for (auto& ls : l_->enum_states(b)) {
      for (auto& rs : r_->enum_states(b)) {
        out.push_back(merged(ls, rs));
        if (out.size() >= 4096) return out;
      }
    }
    return out;
  }

  Value default_state() override {
    return merged(l_->default_state(), r_->default_state());
  }

  bool start_eval(TermId alpha, const Value& st, const StartEval& ev) override {
    return side(alpha).start_eval(alpha, st, ev);
  }

  std::vector<StartModel> enum_start_models(const std::vector<TermId>& atoms,
                                            Engine& eng) override {
    std::vector<TermId> latoms, ratoms;
    for (TermId a : atoms) (l_->owns_prim(a) ? latoms : ratoms).push_back(a);
    auto lms = l_->enum_start_models(latoms, eng);
    auto rms = r_->enum_start_models(ratoms, eng);
    std::vector<StartModel> out;
    for (auto& lm : lms) {
      for (auto& rm : rms) {
        StartModel m;
        m.state = merged(lm.state, rm.state);
        size_t li = 0, ri = 0;
        for (TermId a : atoms)
          m.truths.push_back(l_->owns_prim(a) ? lm.truths[li++]
                                              : rm.truths[ri++]);
        out.push_back(std::move(m));
      }
    }
    return out;
  }

  std::optional<TermId> parse_call(const std::string& head,
                                   const std::vector<std::string>& args,
                                   const ParseTerm& pt) override {
    if (auto t = l_->parse_call(head, args, pt)) return t;
    return r_->parse_call(head, args, pt);
  }

  std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) override {
    if (auto t = l_->parse_raw(toks)) return t;
    return r_->parse_raw(toks);
  }

  TermId rand_test(std::mt19937_64& rng) override {
    return ((rng() & 1) ? *l_ : *r_).rand_test(rng);
  }

  TermId rand_act(std::mt19937_64& rng) override {
    return ((rng() & 1) ? *l_ : *r_).rand_act(rng);
  }

  void bind(const std::vector<TermId>& query_terms) override {
    l_->bind(query_terms);
    r_->bind(query_terms);
  }

  bool temporal_hint() const override {
    return l_->temporal_hint() || r_->temporal_hint();
  }

 private:
  Theory& side(TermId t) {
    if (l_->owns_prim(t)) return *l_;
    if (r_->owns_prim(t)) return *r_;
    throw TheoryError("primitive from outside the product: " +
                      store().display(t));
  }

  std::pair<std::vector<Lit>, std::vector<Lit>> split_lits(
      const std::vector<Lit>& lits) {
    std::vector<Lit> ll, rl;
    for (auto& l : lits) (l_->owns_prim(l.first) ? ll : rl).push_back(l);
    return {ll, rl};
  }

  static Value merged(const Value& a, const Value& b) {
    Value out = a;
    for (auto& [k, v] : b.items()) out[k] = v;
    return out;
  }

  std::unique_ptr<Theory> l_, r_;
};

}  // namespace

std::unique_ptr<Theory> make_prod_theory(std::unique_ptr<Theory> left,
                                         std::unique_ptr<Theory> right) {
  return std::make_unique<ProdTheory>(std::move(left), std::move(right));
}

}  // namespace kmt
