// Partial-derivative term automata, labeling-based theory automata, their
// product, minterm determinization, bisimulation, and emptiness.
//
// SPDX-License-Identifier: MIT
#include "kmt/automata.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kmt {

TermId label_actions(TermId p, uint32_t& next_label) {
  TermStore& st = store();
  if (st.is_test(p)) return p;
  Node n = st.node(p);
  switch (n.tag) {
    case Tag::Prim: {
      Payload pl = st.payload(p);
      if (pl.label == 0) pl.label = next_label++;
      return st.prim(pl);
    }
    case Tag::Plus: {
      std::vector<TermId> kids;
      for (TermId k : n.kids) kids.push_back(label_actions(k, next_label));
      return st.mk_plus(std::move(kids));
    }
    case Tag::Seq: {
      TermId a = label_actions(n.kids[0], next_label);
      TermId b = label_actions(n.kids[1], next_label);
      return st.mk_seq(a, b);
    }
    case Tag::Star:
      return st.mk_star(label_actions(n.kids[0], next_label));
    default:
      return p;
  }
}

TermId erase_label(TermId prim) {
  TermStore& st = store();
  if (st.tag(prim) != Tag::Prim || st.is_test(prim)) return prim;
  Payload pl = st.payload(prim);
  if (pl.label == 0) return prim;
  pl.label = 0;
  return st.prim(pl);
}

TermId acceptance(TermId p) {
  TermStore& st = store();
  if (st.is_test(p)) return p;
  Node n = st.node(p);
  switch (n.tag) {
    case Tag::Prim:
      return st.zero();
    case Tag::Plus: {
      std::vector<TermId> parts;
      for (TermId k : n.kids) parts.push_back(acceptance(k));
      return st.mk_plus(std::move(parts));
    }
    case Tag::Seq:
      return test_mul2(acceptance(n.kids[0]), acceptance(n.kids[1]));
    case Tag::Star:
      return st.one();
    default:
      return st.zero();
  }
}

std::vector<LinearForm> derivative(TermId p) {
  TermStore& st = store();
  if (st.is_test(p)) return {};
  Node n = st.node(p);
  switch (n.tag) {
    case Tag::Prim:
      return {{st.one(), st.payload(p).label, st.one()}};
    case Tag::Plus: {
      std::vector<LinearForm> out;
      for (TermId k : n.kids)
        for (auto& lf : derivative(k)) out.push_back(lf);
      return out;
    }
    case Tag::Seq: {
      std::vector<LinearForm> out;
      for (auto& lf : derivative(n.kids[0]))
        out.push_back({lf.guard, lf.label, st.mk_seq(lf.next, n.kids[1])});
      TermId e = acceptance(n.kids[0]);
      if (e != st.zero())
        for (auto& lf : derivative(n.kids[1]))
          out.push_back({test_mul2(e, lf.guard), lf.label, lf.next});
      return out;
    }
    case Tag::Star: {
      std::vector<LinearForm> out;
      for (auto& lf : derivative(n.kids[0]))
        out.push_back({lf.guard, lf.label, st.mk_seq(lf.next, p)});
      return out;
    }
    default:
      return {};
  }
}

namespace {

void collect_labeled_actions(TermId p, std::map<uint32_t, TermId>& out) {
  TermStore& st = store();
  if (st.is_test(p)) return;
  Node n = st.node(p);
  if (n.tag == Tag::Prim) {
    out[st.payload(p).label] = p;
    return;
  }
  for (TermId k : n.kids) collect_labeled_actions(k, out);
}

}  // namespace

TermAutomaton build_term_automaton(TermId labeled) {
  TermStore& st = store();
  TermAutomaton a;
  a.term = labeled;
  collect_labeled_actions(labeled, a.action);
  a.continuation[0] = labeled;
  a.accept[0] = acceptance(labeled);
  std::deque<uint32_t> work{0};
  while (!work.empty()) {
    uint32_t s = work.front();
    work.pop_front();
    a.edges[s];
    for (auto& lf : derivative(a.continuation.at(s))) {
      if (lf.guard == st.zero()) continue;
      auto it = a.continuation.find(lf.label);
      if (it == a.continuation.end()) {
        a.continuation[lf.label] = lf.next;
        a.accept[lf.label] = acceptance(lf.next);
        work.push_back(lf.label);
      } else if (it->second != lf.next) {
        throw std::logic_error("term automaton: label has two continuations");
      }
      a.edges[s].push_back({lf.guard, lf.label});
    }
  }
  return a;
}

LabelingSpace::LabelingSpace(const std::vector<TermId>& seed_tests,
                             const std::vector<TermId>& actions, Engine& eng,
                             size_t atom_cap)
    : eng_(eng) {
  Theory& th = eng.theory();
  TermStore& st = store();
  {
    std::vector<TermId> acts;
    for (TermId a : actions) acts.push_back(erase_label(a));
    actions_ = make_set(std::move(acts));
  }
  std::set<TermId> seen;
  std::deque<TermId> work;
  auto add_prims = [&](TermId t) {
    for (TermId p : prim_tests_of(t))
      if (seen.insert(p).second) work.push_back(p);
  };
  for (TermId s : seed_tests) {
    add_prims(s);
    for (TermId c : th.sub(st.nnf(s))) add_prims(c);
  }
  while (!work.empty()) {
    TermId atom = work.front();
    work.pop_front();
    for (TermId pi : actions_) {
      for (TermId b : eng.push_test_prim(pi, atom)) {
        add_prims(b);
        for (TermId c : th.sub(b)) add_prims(c);
      }
    }
    if (seen.size() > atom_cap)
      throw std::runtime_error(
          "labeling space: atom universe exceeded the cap");
  }
  atoms_.assign(seen.begin(), seen.end());
  std::sort(atoms_.begin(), atoms_.end(), [](TermId a, TermId b) {
    return order_key(b) < order_key(a);
  });
  for (size_t i = 0; i < atoms_.size(); ++i) atom_index_[atoms_[i]] = i;
}

Theory& LabelingSpace::theory() const { return eng_.theory(); }

bool LabelingSpace::eval(TermId test, const Bits& L) const {
  return eval_test(test, [&](TermId prim) {
    auto it = atom_index_.find(prim);
    if (it == atom_index_.end())
      throw std::logic_error("labeling space: test mentions an unknown atom");
    return L[it->second];
  });
}

size_t LabelingSpace::key_of(const Bits& L) {
  auto [it, inserted] = step_key_ids_.emplace(L, step_keys_.size());
  if (inserted) step_keys_.push_back(L);
  return it->second;
}

LabelingSpace::Bits LabelingSpace::step(const Bits& L, TermId action) {
  action = erase_label(action);
  std::pair<size_t, TermId> key{key_of(L), action};
  auto it = step_memo_.find(key);
  if (it != step_memo_.end()) return it->second;
  Bits out(atoms_.size(), false);
  for (size_t i = 0; i < atoms_.size(); ++i) {
    bool v = false;
    for (TermId b : eng_.push_test_prim(action, atoms_[i]))
      if (eval(b, L)) {
        v = true;
        break;
      }
    out[i] = v;
  }
  step_memo_.emplace(std::move(key), out);
  return out;
}

const std::vector<StartModel>& LabelingSpace::start_models() {
  if (!starts_) starts_ = eng_.theory().enum_start_models(atoms_, eng_);
  return *starts_;
}

LabelingSpace::Bits LabelingSpace::start_from_state(const Value& st) const {
  Bits out(atoms_.size(), false);
  for (size_t i = 0; i < atoms_.size(); ++i)
    out[i] = eval_test_at_start(atoms_[i], st, eng_.theory());
  return out;
}

TermId LabelingSpace::minterm_of(const Bits& L,
                                 const std::vector<TermId>& over) const {
  TermStore& st = store();
  TestSet factors;
  for (TermId a : over) {
    auto it = atom_index_.find(a);
    if (it == atom_index_.end()) continue;
    factors.push_back(L[it->second] ? a : st.nnf(st.mk_not(a)));
  }
  return test_mul(factors);
}

TheoryAutomaton build_theory_automaton(TermId test,
                                       const std::vector<TermId>& actions,
                                       Engine& eng) {
  TheoryAutomaton a;
  a.tracked = test;
  a.space = std::make_shared<LabelingSpace>(std::vector<TermId>{test}, actions,
                                            eng);
  return a;
}

namespace {

std::vector<TermId> automaton_tests(const TermAutomaton& ta) {
  TermStore& st = store();
  std::vector<TermId> out;
  for (auto& [s, e] : ta.accept)
    if (e != st.zero() && e != st.one()) out.push_back(e);
  for (auto& [s, es] : ta.edges)
    for (auto& e : es)
      if (e.guard != st.zero() && e.guard != st.one()) out.push_back(e.guard);
  return make_set(std::move(out));
}

std::vector<TermId> automaton_actions(const TermAutomaton& ta) {
  std::vector<TermId> out;
  for (auto& [l, pi] : ta.action) out.push_back(erase_label(pi));
  return make_set(std::move(out));
}

}  // namespace

std::map<TermId, TheoryAutomaton> build_theory_automata(const TermAutomaton& ta,
                                                        Engine& eng) {
  auto space = std::make_shared<LabelingSpace>(automaton_tests(ta),
                                               automaton_actions(ta), eng);
  std::map<TermId, TheoryAutomaton> out;
  for (TermId t : automaton_tests(ta)) out[t] = TheoryAutomaton{t, space};
  return out;
}

bool labeling_sat(TermId test, Engine& eng,
                  const std::vector<TermId>& actions) {
  TermStore& st = store();
  test = st.nnf(test);
  if (test == st.zero()) return false;
  if (test == st.one()) return true;
  LabelingSpace space({test}, actions, eng);
  std::set<LabelingSpace::Bits> seen;
  std::deque<LabelingSpace::Bits> work;
  for (auto& m : space.start_models()) {
    LabelingSpace::Bits b = space.start_bits(m);
    if (seen.insert(b).second) work.push_back(std::move(b));
  }
  size_t cap = size_t{1} << 16;
  while (!work.empty()) {
    LabelingSpace::Bits L = work.front();
    work.pop_front();
    if (space.eval(test, L)) return true;
    for (TermId pi : space.actions()) {
      LabelingSpace::Bits next = space.step(L, pi);
      if (seen.insert(next).second) {
        if (seen.size() > cap)
          throw std::runtime_error("labeling space: reachable set exploded");
        work.push_back(std::move(next));
      }
    }
  }
  return false;
}

ProductAutomaton product(const TermAutomaton& ta,
                         const std::map<TermId, TheoryAutomaton>& theory_auts,
                         Engine& eng, size_t state_cap) {
  ProductAutomaton pa;
  if (!theory_auts.empty()) {
    pa.space = theory_auts.begin()->second.space;
    for (auto& [t, aut] : theory_auts)
      if (aut.space != pa.space)
        throw std::invalid_argument(
            "product: theory automata must share one labeling space");
  } else {
    pa.space = std::make_shared<LabelingSpace>(automaton_tests(ta),
                                               automaton_actions(ta), eng);
  }
  LabelingSpace& sp = *pa.space;

  std::map<LabelingSpace::Bits, size_t> lab_idx;
  auto labeling_id = [&](const LabelingSpace::Bits& L) {
    auto [it, inserted] = lab_idx.emplace(L, pa.labelings.size());
    if (inserted) pa.labelings.push_back(L);
    return it->second;
  };

  std::map<std::pair<std::vector<uint32_t>, size_t>, uint32_t> index;
  std::deque<uint32_t> work;
  auto accepts = [&](const std::vector<uint32_t>& S,
                     const LabelingSpace::Bits& L) {
    for (uint32_t s : S)
      if (sp.eval(ta.accept.at(s), L)) return true;
    return false;
  };
  auto add_state = [&](std::vector<uint32_t> S, const LabelingSpace::Bits& L,
                       bool initial) {
    size_t li = labeling_id(L);
    auto key = std::make_pair(S, li);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (pa.states.size() >= state_cap)
      throw std::runtime_error("product: state cap exceeded");
    uint32_t id = uint32_t(pa.states.size());
    pa.states.push_back({std::move(S), li, accepts(key.first, L), initial});
    index.emplace(std::move(key), id);
    work.push_back(id);
    return id;
  };

  for (auto& m : sp.start_models())
    add_state({0}, sp.start_bits(m), true);

  while (!work.empty()) {
    uint32_t id = work.front();
    work.pop_front();
    std::vector<uint32_t> S = pa.states[id].term_states;
    LabelingSpace::Bits L = pa.labelings[pa.states[id].labeling];
    for (TermId pi : sp.actions()) {
      std::vector<uint32_t> next;
      for (uint32_t s : S) {
        auto it = ta.edges.find(s);
        if (it == ta.edges.end()) continue;
        for (auto& e : it->second) {
          if (erase_label(ta.action.at(e.target)) != pi) continue;
          if (sp.eval(e.guard, L)) next.push_back(e.target);
        }
      }
      next = make_set(std::move(next));
      if (next.empty()) continue;
      LabelingSpace::Bits L2 = sp.step(L, pi);
      uint32_t to = add_state(std::move(next), L2, false);
      pa.edges.push_back({id, pi, to});
    }
  }
  return pa;
}

std::vector<TermId> minterms(const std::vector<TermId>& guards, Engine& eng) {
  TermStore& st = store();
  TestSet gs;
  for (TermId g : guards) {
    TermId n = st.nnf(g);
    if (n != st.zero() && n != st.one()) gs.push_back(n);
  }
  gs = make_set(std::move(gs));
  if (gs.empty()) return {st.one()};
  if (gs.size() > 20)
    throw std::runtime_error("minterms: too many distinct guards");
  std::vector<TermId> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << gs.size()); ++mask) {
    std::vector<TermId> lits(gs.size());
    for (size_t i = 0; i < gs.size(); ++i)
      lits[i] = (mask >> i) & 1 ? gs[i] : st.nnf(st.mk_not(gs[i]));
    TermId conj = test_mul(TestSet(lits.begin(), lits.end()));
    if (conj == st.zero() || !eng.satisfiable(conj)) continue;
    // drop literals implied by the rest, smallest result wins
    for (size_t i = 0; i < lits.size(); ++i) {
      if (lits[i] == 0) continue;
      TestSet rest;
      for (size_t j = 0; j < lits.size(); ++j)
        if (j != i && lits[j] != 0) rest.push_back(lits[j]);
      TermId r = test_mul(rest);
      if (!eng.satisfiable(test_mul2(r, st.nnf(st.mk_not(lits[i])))))
        lits[i] = 0;
    }
    TestSet kept;
    for (TermId l : lits)
      if (l != 0) kept.push_back(l);
    out.push_back(test_mul(kept));
  }
  return make_set(std::move(out));
}

SymAutomaton determinize(const SymAutomaton& a, Engine& eng) {
  TermStore& st = store();
  SymAutomaton d;
  std::map<std::vector<uint32_t>, uint32_t> index;
  std::deque<std::vector<uint32_t>> work;
  auto add_state = [&](std::vector<uint32_t> S) {
    auto it = index.find(S);
    if (it != index.end()) return it->second;
    uint32_t id = uint32_t(d.edges.size());
    d.edges.emplace_back();
    std::vector<TermId> parts;
    for (uint32_t s : S) parts.push_back(a.accept[s]);
    d.accept.push_back(st.mk_plus(std::move(parts)));
    index.emplace(S, id);
    work.push_back(std::move(S));
    return id;
  };
  d.initial = add_state({a.initial});
  while (!work.empty()) {
    std::vector<uint32_t> S = work.front();
    work.pop_front();
    uint32_t from = index.at(S);
    std::vector<TermId> acts;
    for (uint32_t s : S)
      for (auto& e : a.edges[s]) acts.push_back(e.action);
    acts = make_set(std::move(acts));
    for (TermId pi : acts) {
      std::vector<TermId> guards;
      for (uint32_t s : S)
        for (auto& e : a.edges[s])
          if (e.action == pi) guards.push_back(e.guard);
      for (TermId m : minterms(guards, eng)) {
        std::vector<uint32_t> next;
        for (uint32_t s : S)
          for (auto& e : a.edges[s])
            if (e.action == pi && eng.satisfiable(test_mul2(m, e.guard)))
              next.push_back(e.target);
        next = make_set(std::move(next));
        if (next.empty()) continue;
        uint32_t to = add_state(std::move(next));
        d.edges[from].push_back({m, pi, to});
      }
    }
  }
  return d;
}

SymAutomaton term_sym_automaton(TermId p) {
  uint32_t next = 1;
  TermAutomaton ta = build_term_automaton(label_actions(p, next));
  std::map<uint32_t, uint32_t> dense;
  for (auto& [s, c] : ta.continuation) {
    uint32_t id = uint32_t(dense.size());
    dense[s] = id;
  }
  SymAutomaton a;
  a.initial = dense.at(0);
  a.edges.resize(dense.size());
  a.accept.resize(dense.size());
  for (auto& [s, e] : ta.accept) a.accept[dense.at(s)] = e;
  for (auto& [s, es] : ta.edges)
    for (auto& e : es)
      a.edges[dense.at(s)].push_back(
          {e.guard, erase_label(ta.action.at(e.target)), dense.at(e.target)});
  return a;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_dot(const SymAutomaton& a) {
  TermStore& st = store();
  std::ostringstream os;
  os << "digraph kmt {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (size_t s = 0; s < a.edges.size(); ++s) {
    os << "  s" << s << " [label=\"" << s << "/"
       << dot_escape(st.display(a.accept[s])) << "\"";
    if (s == a.initial) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (size_t s = 0; s < a.edges.size(); ++s)
    for (auto& e : a.edges[s])
      os << "  s" << s << " -> s" << e.target << " [label=\""
         << dot_escape(st.display(e.guard)) << ";"
         << dot_escape(st.display(e.action)) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string witness_str(const Witness& w, bool show_side) {
  TermStore& st = store();
  std::ostringstream os;
  os << "start " << w.initial.dump();
  for (auto& [g, pi] : w.steps)
    os << " ; [" << st.display(g) << "] " << st.display(pi);
  if (show_side) os << " ; in " << (w.in_left ? "left" : "right") << " only";
  return os.str();
}

namespace {

// Lazily materialized deterministic product for one side of a bisimulation.
struct LazyProduct {
  const TermAutomaton& ta;
  LabelingSpace& sp;
  size_t state_cap;

  struct St {
    std::vector<uint32_t> terms;
    LabelingSpace::Bits L;
    bool accept;
  };
  std::vector<St> states;
  std::map<std::pair<std::vector<uint32_t>, LabelingSpace::Bits>, uint32_t>
      index;
  std::map<std::pair<uint32_t, TermId>, int64_t> succ_memo;

  LazyProduct(const TermAutomaton& t, LabelingSpace& s, size_t cap)
      : ta(t), sp(s), state_cap(cap) {}

  uint32_t state(std::vector<uint32_t> S, const LabelingSpace::Bits& L) {
    auto key = std::make_pair(S, L);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (states.size() >= state_cap)
      throw std::runtime_error("bisimulation: state cap exceeded");
    bool acc = false;
    for (uint32_t s : S)
      if (sp.eval(ta.accept.at(s), L)) {
        acc = true;
        break;
      }
    uint32_t id = uint32_t(states.size());
    states.push_back({std::move(S), L, acc});
    index.emplace(std::move(key), id);
    return id;
  }

  // -1 encodes the rejecting sink.
  int64_t succ(int64_t id, TermId pi) {
    if (id < 0) return -1;
    auto key = std::make_pair(uint32_t(id), pi);
    auto it = succ_memo.find(key);
    if (it != succ_memo.end()) return it->second;
    const St& s = states[size_t(id)];
    std::vector<uint32_t> next;
    for (uint32_t t : s.terms) {
      auto eit = ta.edges.find(t);
      if (eit == ta.edges.end()) continue;
      for (auto& e : eit->second) {
        if (erase_label(ta.action.at(e.target)) != pi) continue;
        if (sp.eval(e.guard, s.L)) next.push_back(e.target);
      }
    }
    next = make_set(std::move(next));
    int64_t r;
    if (next.empty()) {
      r = -1;
    } else {
      LabelingSpace::Bits L2 = sp.step(s.L, pi);
      r = state(std::move(next), L2);
    }
    succ_memo.emplace(std::move(key), r);
    return r;
  }

  bool accepts(int64_t id) const { return id >= 0 && states[size_t(id)].accept; }
};

struct UnionFind {
  std::vector<size_t> parent;
  size_t add() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

EquivResult equivalent(TermId p, TermId q, Engine& eng, size_t state_cap) {
  TermStore& st = store();
  uint32_t next = 1;
  TermId lp = label_actions(p, next);
  TermId lq = label_actions(q, next);
  TermAutomaton A = build_term_automaton(lp);
  TermAutomaton B = build_term_automaton(lq);

  std::vector<TermId> seeds = set_union(automaton_tests(A), automaton_tests(B));
  std::vector<TermId> acts =
      set_union(automaton_actions(A), automaton_actions(B));
  LabelingSpace sp(seeds, acts, eng);

  LazyProduct PA(A, sp, state_cap), PB(B, sp, state_cap);

  // Union-find node per (side, state); sinks share one node per side.
  UnionFind uf;
  std::map<std::pair<int, int64_t>, size_t> node_ids;
  auto node = [&](int side, int64_t id) {
    auto key = std::make_pair(side, id);
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;
    size_t n = uf.add();
    node_ids.emplace(key, n);
    return n;
  };

  struct Item {
    int64_t a, b;
    size_t start;  // index of the originating start model
    int64_t parent;
    TermId action;
  };
  std::vector<Item> items;
  std::deque<size_t> work;

  auto fail = [&](size_t item_idx) {
    std::vector<TermId> word;
    size_t at = item_idx;
    while (items[at].parent >= 0) {
      word.push_back(items[at].action);
      at = size_t(items[at].parent);
    }
    std::reverse(word.begin(), word.end());
    const StartModel& sm = sp.start_models()[items[at].start];
    Witness w;
    w.initial = sm.state;
    w.in_left = PA.accepts(items[item_idx].a);
    LabelingSpace::Bits L = sp.start_bits(sm);
    for (TermId pi : word) {
      w.steps.emplace_back(sp.minterm_of(L, sp.atoms()), pi);
      L = sp.step(L, pi);
    }
    EquivResult r;
    r.equivalent = false;
    r.cex = std::move(w);
    return r;
  };

  auto& starts = sp.start_models();
  for (size_t i = 0; i < starts.size(); ++i) {
    LabelingSpace::Bits L = sp.start_bits(starts[i]);
    int64_t a = PA.state({0}, L);
    int64_t b = PB.state({0}, L);
    items.push_back({a, b, i, -1, 0});
    work.push_back(items.size() - 1);
  }

  while (!work.empty()) {
    size_t idx = work.front();
    work.pop_front();
    int64_t a = items[idx].a, b = items[idx].b;
    if (PA.accepts(a) != PB.accepts(b)) return fail(idx);
    if (!uf.unite(node(0, a), node(1, b))) continue;
    if (a < 0 && b < 0) continue;
    for (TermId pi : sp.actions()) {
      int64_t a2 = PA.succ(a, pi);
      int64_t b2 = PB.succ(b, pi);
      if (a2 < 0 && b2 < 0) continue;
      items.push_back({a2, b2, items[idx].start, int64_t(idx), pi});
      work.push_back(items.size() - 1);
    }
  }

  EquivResult r;
  r.equivalent = true;
  std::map<size_t, std::vector<std::string>> classes;
  for (auto& [key, n] : node_ids) {
    std::ostringstream os;
    os << (key.first == 0 ? "p" : "q");
    if (key.second < 0)
      os << "sink";
    else
      os << key.second;
    classes[uf.find(n)].push_back(os.str());
  }
  for (auto& [root, members] : classes) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < members.size(); ++i)
      os << (i ? " " : "") << members[i];
    os << "}";
    r.relation.push_back(os.str());
  }
  (void)st;
  return r;
}

EmptyResult check_empty(TermId p, Engine& eng, size_t state_cap) {
  uint32_t next = 1;
  TermId lp = label_actions(p, next);
  TermAutomaton A = build_term_automaton(lp);
  LabelingSpace sp(automaton_tests(A), automaton_actions(A), eng);
  LazyProduct PA(A, sp, state_cap);

  Value init = eng.theory().default_state();
  LabelingSpace::Bits L0 = sp.start_from_state(init);

  struct Item {
    int64_t state;
    int64_t parent;
    TermId action;
  };
  std::vector<Item> items;
  std::deque<size_t> work;
  std::set<int64_t> seen;

  int64_t s0 = PA.state({0}, L0);
  items.push_back({s0, -1, 0});
  work.push_back(0);
  seen.insert(s0);

  while (!work.empty()) {
    size_t idx = work.front();
    work.pop_front();
    int64_t s = items[idx].state;
    if (PA.accepts(s)) {
      std::vector<TermId> word;
      size_t at = idx;
      while (items[at].parent >= 0) {
        word.push_back(items[at].action);
        at = size_t(items[at].parent);
      }
      std::reverse(word.begin(), word.end());
      Witness w;
      w.initial = init;
      LabelingSpace::Bits L = L0;
      for (TermId pi : word) {
        w.steps.emplace_back(sp.minterm_of(L, sp.atoms()), pi);
        L = sp.step(L, pi);
      }
      EmptyResult r;
      r.empty = false;
      r.witness = std::move(w);
      return r;
    }
    for (TermId pi : sp.actions()) {
      int64_t s2 = PA.succ(s, pi);
      if (s2 < 0) continue;
      if (!seen.insert(s2).second) continue;
      items.push_back({s2, int64_t(idx), pi});
      work.push_back(items.size() - 1);
    }
  }
  return {true, std::nullopt};
}

}  // namespace kmt
