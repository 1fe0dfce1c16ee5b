// Client-theory contract: primitive payload semantics, subterms, pushback,
// satisfiability, parsing hooks, and the oracle state model.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "kmt/ordering.hpp"
#include "kmt/term.hpp"

namespace kmt {

using Value = nlohmann::json;

struct LogEntry {
  Value state;
  TermId action = 0;  // 0 encodes the initial ⊥ label
  bool operator==(const LogEntry& o) const {
    return state == o.state && action == o.action;
  }
};
using Trace = std::vector<LogEntry>;

struct Budget {
  int states = 8;
  int trace_len = 4;
};

class Engine;

using Lit = std::pair<TermId, bool>;
using EvalTest = std::function<bool(TermId, const Trace&)>;
using StartEval = std::function<bool(TermId, const Value&)>;

struct StartModel {
  std::vector<bool> truths;  // aligned with the atom vector passed in
  Value state;               // witness state realizing the assignment
};

class TheoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Theory {
 public:
  virtual ~Theory() = default;
  virtual std::string name() const = 0;

  // --- algebraic obligations -------------------------------------------
  virtual TestSet sub_prim(TermId alpha) = 0;
  virtual TestSet push_back_prim(TermId pi, TermId alpha, Engine& eng) = 0;
  virtual bool conj_sat(const std::vector<Lit>& lits) = 0;
  virtual std::optional<Value> conj_model(const std::vector<Lit>& lits) = 0;
  virtual bool satisfiable(TermId test);
  virtual std::optional<Value> model(TermId test);

  // --- oracle state model ----------------------------------------------
  virtual bool pred(TermId alpha, const Trace& t, const EvalTest& ev) = 0;
  virtual Value act(TermId pi, const Value& st) = 0;
  virtual std::vector<Value> enum_states(const Budget& b) = 0;
  virtual Value default_state() = 0;
  virtual bool start_eval(TermId alpha, const Value& st,
                          const StartEval& ev) = 0;

  // --- parser hooks ------------------------------------------------------
  // Call-style atom `head(arg1, ..., argk)`. Args arrive as raw source
  // slices; hooks that want sub-terms reparse them via `parse_term`.
  using ParseTerm = std::function<TermId(const std::string&)>;
  virtual std::optional<TermId> parse_call(const std::string& head,
                                           const std::vector<std::string>& args,
                                           const ParseTerm& parse_term) {
    return std::nullopt;
  }
  // Raw atom: a run of non-structural tokens, e.g. `x > 2` or `x [ 3 ] := y`.
  virtual std::optional<TermId> parse_raw(
      const std::vector<std::string>& toks) {
    return std::nullopt;
  }

  // --- random instances for property suites ------------------------------
  virtual TermId rand_test(std::mt19937_64& rng) = 0;
  virtual TermId rand_act(std::mt19937_64& rng) = 0;

  // --- session context -----------------------------------------------------
  virtual void bind(const std::vector<TermId>& query_terms) {}

  // Theories whose predicates inspect history (the oracle then also explores
  // longer initial traces).
  virtual bool temporal_hint() const { return false; }

  // Assignments over `atoms` realizable at the start of a trace, each with a
  // concrete witness state. Default: DPLL enumeration via conj_sat/conj_model.
  virtual std::vector<StartModel> enum_start_models(
      const std::vector<TermId>& atoms, Engine& eng);

  // Structural subterm closure, memoized; primitives via sub_prim.
  const TestSet& sub(TermId test);

  // Whether this theory (or a nested component) built the given primitive.
  virtual bool owns_prim(TermId prim) = 0;

  void attach(Engine* eng) { engine_ = eng; }
  Engine* engine() const { return engine_; }

 protected:
  void clear_sub_cache();

 private:
  TestSet sub_uncached(TermId test);
  std::mutex cache_mu_;
  std::unordered_map<TermId, TestSet> sub_cache_;
  Engine* engine_ = nullptr;
};

// Evaluate a test structurally against a truth function on primitives.
// Returns 0/1, or -1 when a primitive evaluates to -1 (unknown).
int eval_test3(TermId test, const std::function<int(TermId)>& prim_truth);
bool eval_test(TermId test, const std::function<bool(TermId)>& prim_truth);

// Start-of-trace structural evaluation (state known, no history).
bool eval_test_at_start(TermId test, const Value& st, Theory& th);

// All primitive tests occurring in a term, sorted by id.
TestSet prim_tests_of(TermId t);
// All primitive actions occurring in a term (payload identity includes any
// automata labels).
std::vector<TermId> prim_acts_of(TermId t);

// Shared DPLL over primitive atoms with theory conjunction checks.
bool dpll_sat(TermId test, Theory& th);
std::optional<Value> dpll_model(TermId test, Theory& th);
std::vector<StartModel> dpll_enum_models(const std::vector<TermId>& atoms,
                                         Theory& th);

// Theory registry. Handles are canonical names ("incnat", "ltlf-incnat", ...)
// or functional notation ("ltlf(incnat)", "prod(bitvec,incnat)").
using TheoryFactory = std::function<std::unique_ptr<Theory>()>;
void register_theory(const std::string& handle, TheoryFactory f);
std::unique_ptr<Theory> make_theory(const std::string& handle);
std::vector<std::string> registered_theories();

}  // namespace kmt
