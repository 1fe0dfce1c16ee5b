// SPDX-License-Identifier: MIT
#include "kmt/theory.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "kmt/theories/theories.hpp"

namespace kmt {

const TestSet& Theory::sub(TermId test) {
  if (!store().is_test(test))
    throw std::invalid_argument("sub() applied to action");
  {
    std::lock_guard lk(cache_mu_);
    auto it = sub_cache_.find(test);
    if (it != sub_cache_.end()) return it->second;
  }
  TestSet s = sub_uncached(test);
  std::lock_guard lk(cache_mu_);
  return sub_cache_.emplace(test, std::move(s)).first->second;
}

// Worklist fixpoint rather than structural recursion: sub_prim graphs may
// be cyclic (mutually dependent primitives), which naive recursion never
// escapes. Negation members trigger a closing pass that adds the negation
// of every reachable test, then re-drains until stable.
TestSet Theory::sub_uncached(TermId test) {
  TermStore& st = store();
  std::set<TermId> acc;
  std::vector<TermId> work{test};
  auto push = [&](TermId t) {
    if (acc.find(t) == acc.end()) work.push_back(t);
  };
  bool saw_not = false;
  auto drain = [&] {
    while (!work.empty()) {
      TermId b = work.back();
      work.pop_back();
      if (!acc.insert(b).second) continue;
      Node n = st.node(b);
      switch (n.tag) {
        case Tag::Zero:
          break;
        case Tag::One:
          push(st.zero());
          break;
        case Tag::Prim:
          push(st.zero());
          push(st.one());
          for (TermId c : sub_prim(b)) push(c);
          break;
        case Tag::Not:
          saw_not = true;
          push(st.zero());
          push(st.one());
          push(n.kids[0]);
          break;
        case Tag::Plus:
        case Tag::Seq:
          push(st.zero());
          push(st.one());
          for (TermId k : n.kids) push(k);
          break;
        case Tag::Star:
          throw std::invalid_argument("sub() applied to action");
      }
    }
  };
  drain();
  while (saw_not) {
    std::vector<TermId> neg;
    neg.reserve(acc.size());
    for (TermId c : acc) neg.push_back(st.nnf(st.mk_not(c)));
    size_t before = acc.size();
    for (TermId c : neg) push(c);
    drain();
    if (acc.size() == before) break;
  }
  return TestSet(acc.begin(), acc.end());
}

void Theory::clear_sub_cache() {
  std::lock_guard lk(cache_mu_);
  sub_cache_.clear();
}

int eval_test3(TermId test, const std::function<int(TermId)>& prim_truth) {
  TermStore& st = store();
  Node n = st.node(test);
  switch (n.tag) {
    case Tag::Zero:
      return 0;
    case Tag::One:
      return 1;
    case Tag::Prim:
      return prim_truth(test);
    case Tag::Not: {
      int v = eval_test3(n.kids[0], prim_truth);
      return v < 0 ? v : 1 - v;
    }
    case Tag::Plus: {
      bool unknown = false;
      for (TermId k : n.kids) {
        int v = eval_test3(k, prim_truth);
        if (v == 1) return 1;
        if (v < 0) unknown = true;
      }
      return unknown ? -1 : 0;
    }
    case Tag::Seq: {
      bool unknown = false;
      for (TermId k : n.kids) {
        int v = eval_test3(k, prim_truth);
        if (v == 0) return 0;
        if (v < 0) unknown = true;
      }
      return unknown ? -1 : 1;
    }
    case Tag::Star:
      throw std::invalid_argument("eval applied to action");
  }
  return -1;
}

bool eval_test(TermId test, const std::function<bool(TermId)>& prim_truth) {
  return eval_test3(test, [&](TermId t) { return prim_truth(t) ? 1 : 0; }) == 1;
}

bool eval_test_at_start(TermId test, const Value& st, Theory& th) {
  StartEval ev = [&](TermId t, const Value& s) {
    return eval_test_at_start(t, s, th);
  };
  return eval_test(test,
                   [&](TermId prim) { return th.start_eval(prim, st, ev); });
}

static void collect_prims(TermId t, bool tests, std::vector<TermId>& out) {
  Node n = store().node(t);
  if (n.tag == Tag::Prim) {
    if (store().is_test(t) == tests) out.push_back(t);
    // LTLf payloads embed terms; recurse for nested atoms
    Payload p = store().payload(t);
    for (TermId k : p.ts) collect_prims(k, tests, out);
    return;
  }
  for (TermId k : n.kids) collect_prims(k, tests, out);
}

TestSet prim_tests_of(TermId t) {
  std::vector<TermId> out;
  collect_prims(t, true, out);
  return make_set(std::move(out));
}

std::vector<TermId> prim_acts_of(TermId t) {
  std::vector<TermId> out;
  collect_prims(t, false, out);
  return make_set(std::move(out));
}

namespace {

struct DpllCtx {
  Theory& th;
  std::vector<TermId> atoms;
  std::unordered_map<TermId, int> asn;  // -1 unknown, 0 false, 1 true
  std::vector<Lit> lits;

  bool search(TermId test, size_t i, std::optional<Value>* model_out) {
    int v = eval_test3(test, [&](TermId t) {
      auto it = asn.find(t);
      return it == asn.end() ? -1 : it->second;
    });
    if (v == 0) return false;
    if (!th.conj_sat(lits)) return false;
    if (v == 1 && i == atoms.size()) {
      if (model_out) {
        auto m = th.conj_model(lits);
        if (!m) return false;
        *model_out = std::move(m);
      }
      return true;
    }
    if (i == atoms.size()) return false;
    TermId a = atoms[i];
    for (bool b : {true, false}) {
      asn[a] = b ? 1 : 0;
      lits.emplace_back(a, b);
      if (search(test, i + 1, model_out)) return true;
      lits.pop_back();
      asn.erase(a);
    }
    return false;
  }
};

}  // namespace

bool dpll_sat(TermId test, Theory& th) {
  DpllCtx ctx{th, prim_tests_of(test), {}, {}};
  return ctx.search(test, 0, nullptr);
}

std::optional<Value> dpll_model(TermId test, Theory& th) {
  std::optional<Value> model;
  DpllCtx ctx{th, prim_tests_of(test), {}, {}};
  if (!ctx.search(test, 0, &model)) return std::nullopt;
  return model;
}

std::vector<StartModel> dpll_enum_models(const std::vector<TermId>& atoms,
                                         Theory& th) {
  std::vector<StartModel> out;
  std::vector<Lit> lits;
  std::vector<bool> truths(atoms.size());
  std::function<void(size_t)> rec = [&](size_t i) {
    if (!th.conj_sat(lits)) return;
    if (i == atoms.size()) {
      auto m = th.conj_model(lits);
      if (m) out.push_back(StartModel{truths, *m});
      return;
    }
    for (bool b : {false, true}) {
      truths[i] = b;
      lits.emplace_back(atoms[i], b);
      rec(i + 1);
      lits.pop_back();
    }
  };
  rec(0);
  return out;
}

bool Theory::satisfiable(TermId test) { return dpll_sat(test, *this); }

std::optional<Value> Theory::model(TermId test) {
  return dpll_model(test, *this);
}

std::vector<StartModel> Theory::enum_start_models(
    const std::vector<TermId>& atoms, Engine&) {
  return dpll_enum_models(atoms, *this);
}

namespace {
std::map<std::string, TheoryFactory>& registry() {
  static std::map<std::string, TheoryFactory> r;
  return r;
}
}  // namespace

void register_theory(const std::string& handle, TheoryFactory f) {
  auto [it, inserted] = registry().emplace(handle, std::move(f));
  if (!inserted) throw TheoryError("duplicate theory name: " + handle);
}

std::vector<std::string> registered_theories() {
  std::vector<std::string> out;
  for (auto& [k, v] : registry()) out.push_back(k);
  return out;
}

void ensure_builtin_theories() {
  static std::once_flag once;
  std::call_once(once, [] {
    register_theory("bitvec", [] { return make_bitvec_theory(); });
    register_theory("incnat", [] { return make_incnat_theory(); });
    register_theory("ltlf-incnat",
                    [] { return make_ltlf_theory(make_incnat_theory()); });
    register_theory("prod-bitvec-incnat", [] {
      return make_prod_theory(make_bitvec_theory(), make_incnat_theory());
    });
    register_theory("set-incnat",
                    [] { return make_set_theory(make_incnat_theory()); });
    register_theory("map-incnat",
                    [] { return make_map_theory(make_incnat_theory()); });
    register_theory("netkat", [] { return make_netkat_theory(); });
    register_theory("sp", [] { return make_sp_theory(); });
  });
}

std::unique_ptr<Theory> make_theory(const std::string& handle) {
  ensure_builtin_theories();
  auto it = registry().find(handle);
  if (it != registry().end()) return it->second();
  // functional notation: head(arg) or head(arg1,arg2)
  auto open = handle.find('(');
  if (open != std::string::npos && handle.back() == ')') {
    std::string head = handle.substr(0, open);
    std::string args = handle.substr(open + 1, handle.size() - open - 2);
    if (head == "ltlf") return make_ltlf_theory(make_theory(args));
    if (head == "set") return make_set_theory(make_theory(args));
    if (head == "map") return make_map_theory(make_theory(args));
    if (head == "prod") {
      int depth = 0;
      for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == '(') depth++;
        if (args[i] == ')') depth--;
        if (args[i] == ',' && depth == 0) {
          return make_prod_theory(make_theory(args.substr(0, i)),
                                  make_theory(args.substr(i + 1)));
        }
      }
    }
  }
  throw TheoryError("unknown theory: " + handle);
}

}  // namespace kmt
