// Symbolic automata: partial-derivative term automata, subterm-labeling
// theory automata, products, minterm determinization, bisimulation
// equivalence, and emptiness.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <memory>

#include "kmt/normalize.hpp"

namespace kmt {

// One partial-derivative branch ⟨guard, label, continuation⟩.
struct LinearForm {
  TermId guard;
  uint32_t label;
  TermId next;
};

// Annotates each action occurrence with a unique label, left to right,
// starting at next_label; idempotent on already-labeled terms.
TermId label_actions(TermId p, uint32_t& next_label);
TermId erase_label(TermId prim);

std::vector<LinearForm> derivative(TermId p);
TermId acceptance(TermId p);

// States are action labels plus the initial state 0; each label has a unique
// continuation term.
struct TermAutomaton {
  TermId term = 0;  // labeled input
  struct Edge {
    TermId guard;
    uint32_t target;
  };
  std::map<uint32_t, std::vector<Edge>> edges;
  std::map<uint32_t, TermId> accept;        // E of the state's continuation
  std::map<uint32_t, TermId> action;        // labeled primitive at each label
  std::map<uint32_t, TermId> continuation;  // state term (state 0: the input)
};
TermAutomaton build_term_automaton(TermId labeled);

// The shared primitive-test universe both terms' theory automata label:
// sub-closure of every seed test, closed under pushback by the alphabet.
class LabelingSpace {
 public:
  using Bits = std::vector<bool>;

  LabelingSpace(const std::vector<TermId>& seed_tests,
                const std::vector<TermId>& actions, Engine& eng,
                size_t atom_cap = 2048);

  const std::vector<TermId>& atoms() const { return atoms_; }
  const std::vector<TermId>& actions() const { return actions_; }
  Theory& theory() const;

  bool eval(TermId test, const Bits& L) const;
  Bits step(const Bits& L, TermId action);

  // Satisfiable start assignments with witness states.
  const std::vector<StartModel>& start_models();
  Bits start_bits(const StartModel& m) const {
    return Bits(m.truths.begin(), m.truths.end());
  }
  Bits start_from_state(const Value& st) const;

  // Conjunction of atom literals describing L, restricted to `over`.
  TermId minterm_of(const Bits& L, const std::vector<TermId>& over) const;

 private:
  Engine& eng_;
  std::vector<TermId> atoms_;
  std::map<TermId, size_t> atom_index_;
  std::vector<TermId> actions_;
  std::optional<std::vector<StartModel>> starts_;
  std::map<std::pair<size_t, TermId>, Bits> step_memo_;
  std::vector<Bits> step_keys_;
  std::map<Bits, size_t> step_key_ids_;
  size_t key_of(const Bits& L);
};

// Theory automaton for one tracked test over a shared labeling space.
struct TheoryAutomaton {
  TermId tracked = 0;
  std::shared_ptr<LabelingSpace> space;
  bool accept(const LabelingSpace::Bits& L) const {
    return space->eval(tracked, L);
  }
};
TheoryAutomaton build_theory_automaton(TermId test,
                                       const std::vector<TermId>& actions,
                                       Engine& eng);

// One theory automaton per distinct guard/acceptance test of the term
// automaton, all sharing a single labeling space.
std::map<TermId, TheoryAutomaton> build_theory_automata(const TermAutomaton& ta,
                                                        Engine& eng);

// Nonemptiness of the labeling automaton for `test`: some labeling reachable
// from a satisfiable start assignment satisfies it.
bool labeling_sat(TermId test, Engine& eng, const std::vector<TermId>& actions);

// Materialized product of a term automaton with the theory automata of its
// guards and acceptance tests (all sharing one labeling space).
struct ProductAutomaton {
  struct State {
    std::vector<uint32_t> term_states;  // sorted subset, powerset-determinized
    size_t labeling;
    bool accept;
    bool initial;
  };
  struct Edge {
    uint32_t from;
    TermId action;
    uint32_t to;
  };
  std::vector<State> states;
  std::vector<LabelingSpace::Bits> labelings;
  std::vector<Edge> edges;
  std::shared_ptr<LabelingSpace> space;
};
ProductAutomaton product(const TermAutomaton& ta,
                         const std::map<TermId, TheoryAutomaton>& theory_auts,
                         Engine& eng, size_t state_cap = 200000);

// Generic symbolic automaton shape for the determinization operation.
struct SymAutomaton {
  struct Edge {
    TermId guard;
    TermId action;  // unlabeled primitive
    uint32_t target;
  };
  uint32_t initial = 0;
  std::vector<std::vector<Edge>> edges;
  std::vector<TermId> accept;
};

// Pairwise-unsatisfiable refinement of a guard set.
std::vector<TermId> minterms(const std::vector<TermId>& guards, Engine& eng);
SymAutomaton determinize(const SymAutomaton& a, Engine& eng);

SymAutomaton term_sym_automaton(TermId p);  // labels internally
std::string to_dot(const SymAutomaton& a);

struct Witness {
  Value initial;
  std::vector<std::pair<TermId, TermId>> steps;  // (minterm guard, action)
  bool in_left = true;
};
std::string witness_str(const Witness& w, bool show_side = true);

struct EquivResult {
  bool equivalent = true;
  std::vector<std::string> relation;  // bisimulation classes on success
  std::optional<Witness> cex;
};
EquivResult equivalent(TermId p, TermId q, Engine& eng,
                       size_t state_cap = 200000);

struct EmptyResult {
  bool empty = true;
  std::optional<Witness> witness;
};
// Emptiness from the canonical initial state (the theory default).
EmptyResult check_empty(TermId p, Engine& eng, size_t state_cap = 200000);

}  // namespace kmt
