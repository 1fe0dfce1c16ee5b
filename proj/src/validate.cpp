// SPDX-License-Identifier: MIT
#include "kmt/validate.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <utility>

#include "kmt/oracle.hpp"
#include "kmt/ordering.hpp"
#include "kmt/term.hpp"

namespace kmt {

namespace {

TermId sample_test(Theory& th, std::mt19937_64& rng) {
  TermId a = th.rand_test(rng);
  switch (rng() % 5) {
    case 0:
      return store().nnf(store().mk_not(a));
    case 1:
      return test_mul2(a, th.rand_test(rng));
    case 2:
      return store().plus2(a, th.rand_test(rng));
    default:
      return a;
  }
}

void check_sub_closure(Theory& th, TermId a, ValidateReport& rep) {
  TermId n = store().nnf(a);
  const TestSet& s = th.sub(n);
  auto has = [&](TermId t) {
    return std::binary_search(s.begin(), s.end(), t);
  };
  if (!has(store().zero()) || !has(n)) {
    rep.ok = false;
    rep.issues.push_back({"sub", "sub(" + store().display(n) +
                                     ") is missing 0 or the test itself"});
    return;
  }
  for (TermId c : s) {
    if (!store().is_test(c)) {
      rep.ok = false;
      rep.issues.push_back({"sub", "sub(" + store().display(n) +
                                       ") contains the non-test " +
                                       store().display(c)});
      return;
    }
    for (TermId d : th.sub(c)) {
      if (!has(d)) {
        rep.ok = false;
        rep.issues.push_back({"sub", "sub(" + store().display(n) +
                                         ") is not transitively closed: " +
                                         store().display(d) + " escapes via " +
                                         store().display(c)});
        return;
      }
    }
  }
}

void check_pushback(Theory& th, Engine& eng, TermId pi, TermId a,
                    const Budget& budget, ValidateReport& rep) {
  TestSet as;
  try {
    as = eng.push_test_prim(pi, a);
  } catch (const FuelExhausted& e) {
    rep.ok = false;
    rep.issues.push_back({"budget", std::string(e.what())});
    return;
  } catch (const TheoryError& e) {
    rep.ok = false;
    rep.issues.push_back({"pushback", "push_back(" + store().display(pi) +
                                          ", " + store().display(a) +
                                          ") failed: " + e.what()});
    return;
  }

  for (TermId b : as) {
    if (!leq_test(b, a, th)) {
      rep.ok = false;
      rep.issues.push_back(
          {"measure", store().display(b) + " is not below " +
                          store().display(a) + " in the subterm ordering"});
    }
  }

  TermId lhs = store().mk_seq(pi, a);
  std::vector<TermId> sum;
  sum.reserve(as.size());
  for (TermId b : as) sum.push_back(store().mk_seq(b, pi));
  TermId rhs = store().mk_plus(std::move(sum));
  OracleResult r = equiv_bounded(lhs, rhs, th, budget);
  if (!r.equivalent) {
    std::ostringstream os;
    os << store().display(lhs) << " is not trace-equivalent to "
       << store().display(rhs);
    if (r.cex) {
      os << "; from " << trace_str(r.cex->initial) << " the trace "
         << trace_str(r.cex->distinguishing) << " is accepted by the "
         << (r.cex->in_left ? "left" : "right") << " side only";
    }
    rep.ok = false;
    rep.issues.push_back({"pushback", os.str()});
  }
}

}  // namespace

std::string ValidateReport::summary() const {
  if (ok) return "pass (" + std::to_string(checks) + " checks)";
  std::ostringstream os;
  os << "FAIL (" << issues.size() << " issue"
     << (issues.size() == 1 ? "" : "s") << " in " << checks << " checks)";
  for (const auto& is : issues) os << "\n  [" << is.kind << "] " << is.detail;
  return os.str();
}

ValidateReport validate_theory(Theory& th, Engine& eng,
                               const ValidateOptions& opts) {
  ValidateReport rep;
  std::mt19937_64 rng(opts.seed);
  std::vector<std::pair<TermId, TermId>> pairs;
  std::vector<TermId> ctx;
  pairs.reserve(opts.samples);
  for (int i = 0; i < opts.samples; ++i) {
    TermId pi = th.rand_act(rng);
    TermId a = sample_test(th, rng);
    pairs.emplace_back(pi, a);
    ctx.push_back(store().mk_seq(pi, a));
  }
  th.bind(ctx);
  for (auto [pi, a] : pairs) {
    check_sub_closure(th, a, rep);
    check_pushback(th, eng, pi, a, opts.budget, rep);
    rep.checks += 2;
    if (rep.issues.size() >= 8) break;
  }
  return rep;
}

}  // namespace kmt
