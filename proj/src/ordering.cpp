// SPDX-License-Identifier: MIT
#include "kmt/ordering.hpp"

#include <algorithm>

#include "kmt/theory.hpp"

namespace kmt {

void NF::add(TermId test, TermId act) { sum.emplace_back(test, act); }

void NF::canon() {
  std::sort(sum.begin(), sum.end());
  sum.erase(std::unique(sum.begin(), sum.end()), sum.end());
}

TestSet make_set(std::vector<TermId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool set_contains(const TestSet& s, TermId t) {
  return std::binary_search(s.begin(), s.end(), t);
}

TestSet set_union(const TestSet& a, const TestSet& b) {
  TestSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

static void seqs_rec(TermId a, std::vector<TermId>& out) {
  Node n = store().node(a);
  if (n.tag == Tag::Seq) {
    seqs_rec(n.kids[0], out);
    seqs_rec(n.kids[1], out);
  } else {
    out.push_back(a);
  }
}

TestSet seqs(TermId a) {
  std::vector<TermId> out;
  seqs_rec(a, out);
  return make_set(std::move(out));
}

TestSet seqs_set(const TestSet& a) {
  std::vector<TermId> out;
  for (TermId t : a) seqs_rec(t, out);
  return make_set(std::move(out));
}

TestSet sub_set(const TestSet& a, Theory& th) {
  TestSet out;
  for (TermId t : a) out = set_union(out, th.sub(t));
  return out;
}

// b is maximal unless some c strictly dominates it: b ∈ sub(c), c ∉ sub(b).
TestSet mt(const TestSet& a, Theory& th) {
  TestSet s = seqs_set(a);
  TestSet out;
  for (TermId b : s) {
    bool dominated = false;
    for (TermId c : s) {
      if (c == b) continue;
      if (set_contains(th.sub(c), b) && !set_contains(th.sub(b), c)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(b);
  }
  return make_set(std::move(out));
}

TestSet nf_tests(const NF& x) {
  std::vector<TermId> out{store().one()};
  for (auto& [a, m] : x.sum) out.push_back(a);
  return make_set(std::move(out));
}

TestSet mt_nf(const NF& x, Theory& th) {
  if (x.empty()) return {store().zero()};
  return mt(nf_tests(x), th);
}

// A sum or product of covered tests introduces no new maximal subterm, so
// boolean recombinations (negated pushbacks, enriched guards) stay below
// their source.
static bool covered(TermId t, const TestSet& target) {
  if (set_contains(target, t)) return true;
  Node n = store().node(t);
  if (n.tag != Tag::Plus && n.tag != Tag::Seq) return false;
  for (TermId k : n.kids)
    if (!covered(k, target)) return false;
  return true;
}

bool leq(const TestSet& x, const TestSet& y, Theory& th) {
  TestSet sx = sub_set(mt(x, th), th);
  TestSet sy = sub_set(mt(y, th), th);
  for (TermId t : sx)
    if (!covered(t, sy)) return false;
  return true;
}

bool lt(const TestSet& x, const TestSet& y, Theory& th) {
  return leq(x, y, th) && !leq(y, x, th);
}

bool leq_test(TermId x, TermId y, Theory& th) {
  return leq(TestSet{x}, TestSet{y}, th);
}

std::array<uint64_t, 3> order_key(TermId t) {
  Node n = store().node(t);
  return {n.level, n.size, t};
}

TermId least_mt(const TestSet& a, Theory& th) {
  TestSet m = mt(a, th);
  if (m.empty()) return store().zero();
  TermId best = m[0];
  for (TermId t : m)
    if (order_key(t) < order_key(best)) best = t;
  return best;
}

TermId test_mul(const TestSet& factors) {
  std::vector<TermId> flat;
  for (TermId f : factors) {
    if (f == store().zero()) return store().zero();
    if (f == store().one()) continue;
    for (TermId g : seqs(f)) {
      if (g == store().zero()) return store().zero();
      if (g == store().one()) continue;
      flat.push_back(g);
    }
  }
  flat = make_set(std::move(flat));
  std::sort(flat.begin(), flat.end(),
            [](TermId a, TermId b) { return order_key(a) < order_key(b); });
  return store().seq_of(flat);
}

TermId test_mul2(TermId a, TermId b) { return test_mul(TestSet{a, b}); }

std::pair<NF, NF> split(const NF& x, TermId a) {
  NF y, z;
  for (auto& [c, m] : x.sum) {
    TestSet fs = seqs(c);
    if (set_contains(fs, a)) {
      TestSet rest;
      for (TermId f : fs)
        if (f != a) rest.push_back(f);
      y.add(test_mul(rest), m);
    } else {
      z.add(c, m);
    }
  }
  y.canon();
  z.canon();
  return {std::move(y), std::move(z)};
}

TermId nf_term(const NF& x) {
  std::vector<TermId> parts;
  for (auto& [a, m] : x.sum) parts.push_back(store().mk_seq(a, m));
  return store().mk_plus(std::move(parts));
}

}  // namespace kmt
