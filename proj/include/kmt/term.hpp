// Interned KAT term kernel: hash-consed nodes, smart constructors,
// negation normal form, display.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace kmt {

using TermId = uint32_t;

enum class Tag : uint8_t { Zero, One, Prim, Not, Plus, Seq, Star };

enum class Th : uint8_t { None, BitVec, IncNat, Set, Map, Ltlf, NetKat, Sp };

// A natural-number expression: either a constant or an inner-theory variable.
struct NatExpr {
  bool is_var = false;
  int64_t n = 0;
  std::string var;

  bool operator==(const NatExpr& o) const {
    return is_var == o.is_var && n == o.n && var == o.var;
  }
};

// One record type covers every built-in theory's primitives; `tag` is
// theory-local. Unused fields stay at their defaults and hash as such.
struct Payload {
  Th th = Th::None;
  uint8_t tag = 0;
  bool test = false;
  int64_t a = 0;
  uint32_t label = 0;  // action-occurrence label for automata, 0 = none
  std::string s, s2;
  std::vector<NatExpr> es;
  std::vector<std::string> ss;
  std::vector<TermId> ts;

  bool operator==(const Payload& o) const {
    return th == o.th && tag == o.tag && test == o.test && a == o.a &&
           label == o.label && s == o.s && s2 == o.s2 && es == o.es &&
           ss == o.ss && ts == o.ts;
  }
};

struct PayloadHash {
  size_t operator()(const Payload& p) const;
};

struct Node {
  Tag tag = Tag::Zero;
  bool test = false;  // grammar-level predicate?
  uint32_t level = 0; // max theory universe level inside
  uint64_t size = 1;  // ordering weight
  int32_t payload = -1;
  std::vector<TermId> kids;
};

// Hash-consed term store. Accessors return snapshots so callers never hold
// store locks across their own recursion; interning is serialized.
class TermStore {
 public:
  TermStore();

  TermId zero() const { return 0; }
  TermId one() const { return 1; }

  TermId prim(Payload p);
  TermId mk_not(TermId a);
  TermId mk_plus(std::vector<TermId> kids);
  TermId mk_seq(TermId l, TermId r);
  TermId mk_star(TermId p);
  TermId seq_of(const std::vector<TermId>& factors);
  TermId plus2(TermId l, TermId r) { return mk_plus({l, r}); }

  Node node(TermId t) const;
  Payload payload(TermId t) const;
  Tag tag(TermId t) const;
  bool is_test(TermId t) const;
  bool is_prim(TermId t) const { return tag(t) == Tag::Prim; }
  uint32_t level(TermId t) const;
  uint64_t size(TermId t) const;

  TermId nnf(TermId t);

  std::string display(TermId t) const;

  size_t term_count() const;

 private:
  struct NodeKey {
    Tag tag;
    int32_t payload;
    std::vector<TermId> kids;
    bool operator==(const NodeKey& o) const {
      return tag == o.tag && payload == o.payload && kids == o.kids;
    }
  };
  struct NodeKeyHash {
    size_t operator()(const NodeKey& k) const;
  };

  TermId intern(Tag tag, int32_t payload, std::vector<TermId> kids);
  void display_rec(TermId t, int parent_prec, std::string& out) const;
  std::string display_payload(const Payload& p) const;

  mutable std::shared_mutex mu_;
  std::deque<Node> nodes_;
  std::deque<Payload> payloads_;
  std::unordered_map<Payload, int32_t, PayloadHash> payload_ids_;
  std::unordered_map<NodeKey, TermId, NodeKeyHash> node_ids_;
};

// Process-wide store shared by all sessions.
TermStore& store();

std::string nat_expr_str(const NatExpr& e);

}  // namespace kmt
