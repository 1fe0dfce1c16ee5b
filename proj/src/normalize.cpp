// Pushback engine: rewrites m·a into Σ aᵢ·mᵢ with every test no larger than
// a, then lifts that to full-term normalization.
//
// SPDX-License-Identifier: MIT
#include "kmt/normalize.hpp"

#include <algorithm>
#include <stdexcept>

#include "kmt/theories/theories.hpp"

namespace kmt {

namespace {

// Removes the key from the busy set even when the recursion unwinds via an
// exception, so the engine stays usable after fuel exhaustion.
template <typename Set, typename Key>
struct BusyGuard {
  Set& set;
  Key key;
  BusyGuard(Set& s, const Key& k) : set(s), key(k) { set.insert(k); }
  ~BusyGuard() { set.erase(key); }
};

NF scale(TermId a, const NF& z) {
  NF out;
  for (auto& [c, n] : z.sum) out.add(test_mul2(a, c), n);
  out.canon();
  return out;
}

NF nf_union(const NF& x, const NF& y) {
  NF out = x;
  for (auto& [a, m] : y.sum) out.add(a, m);
  out.canon();
  return out;
}

}  // namespace

size_t Engine::NFHash::operator()(
    const std::vector<std::pair<TermId, TermId>>& v) const {
  size_t h = v.size();
  for (auto& [a, m] : v) {
    h = h * 1000003u + a;
    h = h * 1000003u + m;
  }
  return h;
}

Engine::Engine(Theory& th, EngineOptions opts) : th_(th), opts_(opts) {
  if (th_.engine() == nullptr) {
    th_.attach(this);
    owner_ = true;
  }
}

Engine::~Engine() {
  if (owner_) th_.attach(nullptr);
}

void Engine::burn() {
  if (++fuel_used_ > opts_.fuel) throw FuelExhausted();
}

bool Engine::satisfiable(TermId test) {
  TermStore& st = store();
  if (test == st.zero()) return false;
  if (test == st.one()) return true;
  auto it = sat_memo_.find(test);
  if (it != sat_memo_.end()) return it->second;
  bool r = th_.satisfiable(test);
  sat_memo_.emplace(test, r);
  return r;
}

NF Engine::prune(NF x) {
  TermStore& st = store();
  NF out;
  for (auto& [a, m] : x.sum) {
    if (m == st.zero()) continue;
    if (!satisfiable(a)) continue;
    out.add(a, m);
  }
  out.canon();
  return out;
}

// Collapses a·m + b·m to b·m when a entails b. Star bodies otherwise carry
// guarded copies of actions they already contain under a weaker guard, and
// Denest then multiplies those copies at every test level.
NF Engine::subsume(NF x) {
  TermStore& st = store();
  std::unordered_map<TermId, std::vector<size_t>> by_act;
  for (size_t i = 0; i < x.sum.size(); ++i)
    by_act[x.sum[i].second].push_back(i);

  auto entails = [&](TermId a, TermId b) {
    if (b == st.one() || a == b) return true;
    return !satisfiable(test_mul2(a, st.nnf(st.mk_not(b))));
  };

  std::vector<bool> drop(x.sum.size(), false);
  for (auto& [act, idx] : by_act) {
    if (idx.size() < 2) continue;
    for (size_t ii = 0; ii < idx.size(); ++ii) {
      if (drop[idx[ii]]) continue;
      for (size_t jj = 0; jj < idx.size(); ++jj) {
        if (ii == jj || drop[idx[jj]]) continue;
        TermId ci = x.sum[idx[ii]].first;
        TermId cj = x.sum[idx[jj]].first;
        if (!entails(ci, cj)) continue;
        // Mutually entailing tests are equivalent; keep the first.
        if (entails(cj, ci) && jj > ii) continue;
        drop[idx[ii]] = true;
        break;
      }
    }
  }

  NF out;
  for (size_t i = 0; i < x.sum.size(); ++i)
    if (!drop[i]) out.add(x.sum[i].first, x.sum[i].second);
  out.canon();
  return out;
}

void Engine::check_dot_measure(TermId a, const NF& out) {
  if (!opts_.check_measure) return;
  ++measure_checks_;
  if (!leq(nf_tests(out), TestSet{a}, th_))
    throw std::logic_error("pushback measure violated: pb_dot grew past " +
                           store().display(a));
}

// â: a joined with every satisfiable proper subterm it subsumes, so star
// residuals keep the full set of tests known to imply re-entry.
TermId Engine::enrich(TermId a) {
  auto it = enrich_memo_.find(a);
  if (it != enrich_memo_.end()) return it->second;
  TermStore& st = store();
  TermId na = st.nnf(st.mk_not(a));
  std::vector<TermId> parts{a};
  for (TermId c : th_.sub(a)) {
    if (c == a || c == st.zero() || c == st.one()) continue;
    if (!satisfiable(c)) continue;
    if (satisfiable(test_mul2(c, na))) continue;
    parts.push_back(c);
  }
  TermId r = st.mk_plus(std::move(parts));
  enrich_memo_.emplace(a, r);
  return r;
}

NF Engine::pb_dot(TermId m, TermId a) {
  burn();
  TermStore& st = store();
  a = st.nnf(a);
  std::pair<TermId, TermId> key{m, a};
  auto it = dot_memo_.find(key);
  if (it != dot_memo_.end()) return it->second;
  if (dot_busy_.count(key)) throw FuelExhausted();
  BusyGuard guard(dot_busy_, key);
  NF r = prune(pb_dot_uncached(m, a));
  check_dot_measure(a, r);
  dot_memo_.emplace(key, r);
  return r;
}

NF Engine::pb_dot_uncached(TermId m, TermId a) {
  burn();
  TermStore& st = store();
  NF out;

  if (a == st.zero()) return out;
  if (a == st.one()) {
    out.add(st.one(), m);
    return out;
  }
  if (m == st.zero()) return out;
  if (m == st.one()) {
    out.add(a, st.one());
    return out;
  }

  Node mn = st.node(m);
  if (mn.tag == Tag::Seq)
    return pb_restricted(mn.kids[0], pb_dot(mn.kids[1], a));
  if (mn.tag == Tag::Plus) {
    for (TermId k : mn.kids) out = nf_union(out, pb_dot(k, a));
    return out;
  }

  Node an = st.node(a);
  if (an.tag == Tag::Plus) {
    for (TermId k : an.kids) out = nf_union(out, pb_dot(m, k));
    return out;
  }
  if (an.tag == Tag::Seq)
    return pb_test(pb_dot(m, an.kids[0]), an.kids[1]);

  if (mn.tag == Tag::Star) {
    TermId body = mn.kids[0];
    NF x = prune(pb_dot(body, a));
    if (x.empty()) {
      out.add(a, st.one());
      return out;
    }
    if (lt(nf_tests(x), TestSet{a}, th_)) {
      out.add(a, st.one());
      return nf_union(out, pb_restricted(m, x));
    }
    auto [t, u] = split(x, a);
    if (!t.empty()) {
      TermId ah = enrich(a);
      NF y = pb_star(t);
      NF z = pb_join(pb_restricted(m, u), y);
      for (auto& [e, f] : y.sum) out.add(test_mul2(ah, e), f);
      return nf_union(out, z);
    }
    // a never reappears as a factor; unfold once and keep pushing
    out.add(a, st.one());
    return nf_union(out, pb_restricted(m, x));
  }

  // m is primitive
  if (an.tag == Tag::Prim) {
    for (TermId b : th_.push_back_prim(m, a, *this)) out.add(b, m);
    return out;
  }
  // a = ¬α: push α through, then negate the sum
  TestSet bs = th_.push_back_prim(m, st.node(a).kids[0], *this);
  TermId b = st.nnf(st.mk_not(st.mk_plus(TestSet(bs))));
  out.add(b, m);
  return out;
}

NF Engine::pb_test(const NF& x, TermId a) {
  TermStore& st = store();
  if (a == st.one()) return x;
  NF out;
  for (auto& [b, m] : x.sum) {
    NF r = pb_dot(m, a);
    for (auto& [c, n] : r.sum) out.add(test_mul2(b, c), n);
  }
  return prune(std::move(out));
}

NF Engine::pb_restricted(TermId m, const NF& x) {
  TermStore& st = store();
  NF out;
  for (auto& [a, n] : x.sum) {
    NF r = pb_dot(m, a);
    for (auto& [c, mm] : r.sum) out.add(c, st.mk_seq(mm, n));
  }
  return prune(std::move(out));
}

NF Engine::pb_join(const NF& x, const NF& y) {
  TermStore& st = store();
  NF out;
  for (auto& [a, m] : x.sum) {
    for (auto& [b, n] : y.sum) {
      NF r = pb_dot(m, b);
      for (auto& [c, mm] : r.sum) out.add(test_mul2(a, c), st.mk_seq(mm, n));
    }
  }
  return prune(std::move(out));
}

NF Engine::pb_star(const NF& x0) {
  burn();
  NF x = subsume(prune(x0));
  auto it = star_memo_.find(x.sum);
  if (it != star_memo_.end()) return it->second;
  NF r = prune(pb_star_uncached(x));
  if (opts_.check_measure) {
    ++measure_checks_;
    if (!leq(nf_tests(r), nf_tests(x), th_))
      throw std::logic_error("pushback measure violated: pb_star grew");
  }
  star_memo_.emplace(x.sum, r);
  return r;
}

NF Engine::pb_star_uncached(const NF& x) {
  burn();
  TermStore& st = store();
  NF out;
  if (x.empty()) {
    out.add(st.one(), st.one());
    return out;
  }
  bool all_one = true;
  for (auto& [a, m] : x.sum) all_one = all_one && a == st.one();
  if (all_one) {
    std::vector<TermId> acts;
    for (auto& [a, m] : x.sum) acts.push_back(m);
    out.add(st.one(), st.mk_star(st.mk_plus(std::move(acts))));
    return out;
  }

  TermId a = least_mt(nf_tests(x), th_);
  auto [x1, x2] = split(x, a);

  if (x2.empty()) {
    NF w = pb_test(x1, a);
    NF y;
    if (lt(nf_tests(w), TestSet{a}, th_)) {
      y = pb_star(w);
    } else {
      auto [t, u] = split(w, a);
      y = pb_star(nf_union(t, u));
    }
    NF z = pb_join(y, x1);
    out.add(st.one(), st.one());
    return nf_union(out, scale(a, z));
  }

  NF y2 = pb_star(x2);
  NF x1y = pb_join(x1, y2);
  NF z = pb_star(scale(a, x1y));
  return pb_join(y2, z);
}

TestSet Engine::push_test_prim(TermId pi, TermId a) {
  NF r = pb_dot(pi, a);
  TestSet out;
  for (auto& [b, m] : r.sum) {
    if (m != pi)
      throw TheoryError("pushback through a primitive produced a compound "
                        "action");
    out.push_back(b);
  }
  return make_set(std::move(out));
}

NF Engine::normalize(TermId p) {
  TermStore& st = store();
  NF out;
  if (st.is_test(p)) {
    out.add(st.nnf(p), st.one());
    return prune(std::move(out));
  }
  Node n = st.node(p);
  switch (n.tag) {
    case Tag::Prim:
      out.add(st.one(), p);
      return out;
    case Tag::Plus:
      for (TermId k : n.kids) out = nf_union(out, normalize(k));
      return out;
    case Tag::Seq:
      return pb_join(normalize(n.kids[0]), normalize(n.kids[1]));
    case Tag::Star:
      return pb_star(normalize(n.kids[0]));
    default:
      throw std::logic_error("normalize: malformed term");
  }
}

std::string nf_display(const NF& x) {
  if (x.empty()) return "false";
  auto wrap = [](TermId t) {
    std::string s = store().display(t);
    return store().tag(t) == Tag::Plus ? "(" + s + ")" : s;
  };
  std::string out;
  for (size_t i = 0; i < x.sum.size(); ++i) {
    if (i) out += " + ";
    out += wrap(x.sum[i].first) + ";" + wrap(x.sum[i].second);
  }
  return out;
}

Session make_session(const std::string& handle, EngineOptions opts) {
  ensure_builtin_theories();
  Session s;
  s.theory = make_theory(handle);
  s.engine = std::make_unique<Engine>(*s.theory, opts);
  return s;
}

}  // namespace kmt
