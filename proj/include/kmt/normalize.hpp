// Pushback-based normalization: lifts client-theory pushback to full terms,
// producing Σ aᵢ·mᵢ normal forms.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <unordered_map>
#include <unordered_set>

#include "kmt/ordering.hpp"
#include "kmt/theory.hpp"

namespace kmt {

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted()
      : std::runtime_error(
            "pushback fuel exhausted; the client theory likely violates its "
            "contract; run validate-theory") {}
};

struct EngineOptions {
  uint64_t fuel = 1'000'000;
#ifdef NDEBUG
  bool check_measure = false;
#else
  bool check_measure = true;
#endif
};

class Engine {
 public:
  explicit Engine(Theory& th, EngineOptions opts = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Theory& theory() { return th_; }

  NF normalize(TermId p);
  NF pb_dot(TermId m, TermId a);
  NF pb_test(const NF& x, TermId a);
  NF pb_restricted(TermId m, const NF& x);
  NF pb_join(const NF& x, const NF& y);
  NF pb_star(const NF& x);

  // Test-level pushback through a primitive action: the tests b with
  // Σ b·π ≡ π·a. Engine-side callback for composite theories.
  TestSet push_test_prim(TermId pi, TermId a);

  bool satisfiable(TermId test);

  uint64_t fuel_used() const { return fuel_used_; }
  uint64_t measure_checks() const { return measure_checks_; }

 private:
  void burn();
  NF prune(NF x);
  NF subsume(NF x);
  NF pb_dot_uncached(TermId m, TermId a);
  NF pb_star_uncached(const NF& x);
  TermId enrich(TermId a);
  void check_dot_measure(TermId a, const NF& out);

  struct PairHash {
    size_t operator()(const std::pair<TermId, TermId>& p) const {
      return std::hash<uint64_t>()((uint64_t(p.first) << 32) | p.second);
    }
  };
  struct NFHash {
    size_t operator()(const std::vector<std::pair<TermId, TermId>>& v) const;
  };

  Theory& th_;
  EngineOptions opts_;
  bool owner_ = false;
  uint64_t fuel_used_ = 0;
  uint64_t measure_checks_ = 0;
  std::unordered_map<std::pair<TermId, TermId>, NF, PairHash> dot_memo_;
  std::unordered_set<std::pair<TermId, TermId>, PairHash> dot_busy_;
  std::unordered_map<std::vector<std::pair<TermId, TermId>>, NF, NFHash>
      star_memo_;
  std::unordered_map<TermId, bool> sat_memo_;
  std::unordered_map<TermId, TermId> enrich_memo_;
};

// Renders a normal form as `a1;m1 + a2;m2 + ...` (empty sum prints as
// false), re-parseable under the same theory.
std::string nf_display(const NF& x);

// A per-query session: one theory instance plus an engine bound to it.
struct Session {
  std::unique_ptr<Theory> theory;
  std::unique_ptr<Engine> engine;
};
Session make_session(const std::string& handle, EngineOptions opts = {});

}  // namespace kmt
