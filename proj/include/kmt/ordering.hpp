// Maximal-subterm ordering: seqs, sub, tests, mt, the ⪯/≺ relations, and
// normal-form splitting.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <utility>

#include "kmt/term.hpp"

namespace kmt {

class Theory;

using TestSet = std::vector<TermId>;  // sorted, unique

// Normal form: a set of (test, restricted action) summands.
struct NF {
  std::vector<std::pair<TermId, TermId>> sum;

  void add(TermId test, TermId act);
  void canon();
  bool empty() const { return sum.empty(); }
  bool operator==(const NF& o) const { return sum == o.sum; }
};

TestSet make_set(std::vector<TermId> v);
bool set_contains(const TestSet& s, TermId t);
TestSet set_union(const TestSet& a, const TestSet& b);

TestSet seqs(TermId a);
TestSet seqs_set(const TestSet& a);

// sub lives on Theory (memoized); these lift it to sets.
TestSet sub_set(const TestSet& a, Theory& th);

TestSet mt(const TestSet& a, Theory& th);
TestSet mt_nf(const NF& x, Theory& th);
TestSet nf_tests(const NF& x);  // {1} ∪ {a_i}

// x ⪯ y over test sets: sub(mt(x)) ⊆ sub(mt(y)), where a Plus counts as
// covered when all its summands are covered.
bool leq(const TestSet& x, const TestSet& y, Theory& th);
bool lt(const TestSet& x, const TestSet& y, Theory& th);
bool leq_test(TermId x, TermId y, Theory& th);

// Well order on tests: (universe level, size, intern id).
std::array<uint64_t, 3> order_key(TermId t);
TermId least_mt(const TestSet& a, Theory& th);

// Canonical product of test factors: flattened, deduplicated, sorted.
TermId test_mul(const TestSet& factors);
TermId test_mul2(TermId a, TermId b);

// x = a·y + z around maximal test a; removes a from each summand that has it.
std::pair<NF, NF> split(const NF& x, TermId a);

TermId nf_term(const NF& x);

}  // namespace kmt
