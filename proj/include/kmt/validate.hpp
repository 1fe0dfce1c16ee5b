// Executable check of the pushback contract for a client theory: sampled
// primitive pairs are compared against the trace oracle and the subterm
// ordering.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kmt/normalize.hpp"
#include "kmt/theory.hpp"

namespace kmt {

struct ValidateOptions {
  Budget budget;
  int samples = 60;
  uint64_t seed = 1;
};

struct ValidateIssue {
  // "pushback" (oracle disagreement), "measure" (result not below the
  // input test), "sub" (subterm closure broken), or "budget"
  std::string kind;
  std::string detail;
};

struct ValidateReport {
  bool ok = true;
  int checks = 0;
  std::vector<ValidateIssue> issues;
  std::string summary() const;
};

ValidateReport validate_theory(Theory& th, Engine& eng,
                               const ValidateOptions& opts = {});

}  // namespace kmt
