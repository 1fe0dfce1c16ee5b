// Reference trace semantics used for differential testing; never on the
// decision path.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <set>
#include <string>

#include "kmt/theory.hpp"

namespace kmt {

// Traces ordered for set storage.
struct TraceLess {
  bool operator()(const Trace& a, const Trace& b) const;
};
using TraceSet = std::set<Trace, TraceLess>;

bool trace_well_formed(const Trace& t, Theory& th);

// Every clause of the denotational semantics; star truncated at the length
// bound (symmetrically, so bounded comparison stays sound).
TraceSet denote(TermId p, const Trace& t, Theory& th, const Budget& b);

bool oracle_pred(TermId test, const Trace& t, Theory& th);

struct OracleCounterexample {
  Trace initial;
  // a trace in exactly one side's denotation
  Trace distinguishing;
  bool in_left = false;
};

struct OracleResult {
  bool equivalent = true;
  std::optional<OracleCounterexample> cex;
};

// Compares denotations from all enumerated single-entry initial traces, and
// (for theories with temporal predicates) all well-formed initial traces up
// to the length bound built from the query terms' actions.
OracleResult equiv_bounded(TermId p, TermId q, Theory& th, const Budget& b);

std::string trace_str(const Trace& t);

}  // namespace kmt
