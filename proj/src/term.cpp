// SPDX-License-Identifier: MIT
#include "kmt/term.hpp"

#include <algorithm>
#include <functional>

namespace kmt {

static void hash_mix(size_t& h, size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

size_t PayloadHash::operator()(const Payload& p) const {
  size_t h = std::hash<int>()(int(p.th) * 131 + p.tag * 2 + (p.test ? 1 : 0));
  hash_mix(h, std::hash<int64_t>()(p.a));
  hash_mix(h, std::hash<uint32_t>()(p.label));
  hash_mix(h, std::hash<std::string>()(p.s));
  hash_mix(h, std::hash<std::string>()(p.s2));
  for (const auto& e : p.es) {
    hash_mix(h, e.is_var ? std::hash<std::string>()(e.var)
                         : std::hash<int64_t>()(e.n));
  }
  for (const auto& s : p.ss) hash_mix(h, std::hash<std::string>()(s));
  for (TermId t : p.ts) hash_mix(h, t);
  return h;
}

size_t TermStore::NodeKeyHash::operator()(const NodeKey& k) const {
  size_t h = std::hash<int>()(int(k.tag) * 7919 + k.payload);
  for (TermId t : k.kids) hash_mix(h, t);
  return h;
}

TermStore::TermStore() {
  nodes_.push_back(Node{Tag::Zero, true, 0, 1, -1, {}});
  nodes_.push_back(Node{Tag::One, true, 0, 1, -1, {}});
  node_ids_[NodeKey{Tag::Zero, -1, {}}] = 0;
  node_ids_[NodeKey{Tag::One, -1, {}}] = 1;
}

Node TermStore::node(TermId t) const {
  std::shared_lock lk(mu_);
  return nodes_.at(t);
}

Payload TermStore::payload(TermId t) const {
  std::shared_lock lk(mu_);
  const Node& n = nodes_.at(t);
  if (n.payload < 0) throw std::logic_error("term has no payload");
  return payloads_.at(size_t(n.payload));
}

Tag TermStore::tag(TermId t) const {
  std::shared_lock lk(mu_);
  return nodes_.at(t).tag;
}

bool TermStore::is_test(TermId t) const {
  std::shared_lock lk(mu_);
  return nodes_.at(t).test;
}

uint32_t TermStore::level(TermId t) const {
  std::shared_lock lk(mu_);
  return nodes_.at(t).level;
}

uint64_t TermStore::size(TermId t) const {
  std::shared_lock lk(mu_);
  return nodes_.at(t).size;
}

size_t TermStore::term_count() const {
  std::shared_lock lk(mu_);
  return nodes_.size();
}

static uint64_t payload_size(const Payload& p, const std::deque<Node>& nodes) {
  uint64_t sz = 1;
  switch (p.th) {
    case Th::IncNat:
      if (p.tag == 0 || p.tag == 2) sz += uint64_t(p.a);
      break;
    case Th::Sp:
      sz += uint64_t(std::min<int64_t>(p.a, int64_t(1) << 40));
      break;
    case Th::Set:
    case Th::Map:
      sz += uint64_t(p.a >= 0 ? p.a : 0);
      break;
    case Th::Ltlf:
      for (TermId t : p.ts) sz += nodes.at(t).size;
      break;
    default:
      break;
  }
  return sz;
}

TermId TermStore::intern(Tag tag, int32_t payload, std::vector<TermId> kids) {
  NodeKey key{tag, payload, kids};
  {
    std::shared_lock lk(mu_);
    auto it = node_ids_.find(key);
    if (it != node_ids_.end()) return it->second;
  }
  std::unique_lock lk(mu_);
  auto it = node_ids_.find(key);
  if (it != node_ids_.end()) return it->second;

  Node n;
  n.tag = tag;
  n.payload = payload;
  n.kids = kids;
  switch (tag) {
    case Tag::Zero:
    case Tag::One:
      n.test = true;
      break;
    case Tag::Prim: {
      const Payload& p = payloads_.at(size_t(payload));
      n.test = p.test;
      if (p.th == Th::Ltlf && p.tag != 2) {
        uint32_t lv = 0;
        for (TermId t : p.ts) lv = std::max(lv, nodes_.at(t).level);
        n.level = lv + 1;
      }
      n.size = payload_size(p, nodes_);
      break;
    }
    case Tag::Not:
      n.test = true;
      n.level = nodes_.at(kids[0]).level;
      n.size = 1 + nodes_.at(kids[0]).size;
      break;
    case Tag::Plus:
    case Tag::Seq: {
      bool test = true;
      for (TermId k : kids) {
        const Node& c = nodes_.at(k);
        test = test && c.test;
        n.level = std::max(n.level, c.level);
        n.size += c.size;
      }
      n.test = test;
      break;
    }
    case Tag::Star:
      n.test = false;
      n.level = nodes_.at(kids[0]).level;
      n.size = 1 + nodes_.at(kids[0]).size;
      break;
  }
  TermId id = TermId(nodes_.size());
  nodes_.push_back(std::move(n));
  node_ids_[key] = id;
  return id;
}

TermId TermStore::prim(Payload p) {
  int32_t pid;
  {
    std::unique_lock lk(mu_);
    auto it = payload_ids_.find(p);
    if (it != payload_ids_.end()) {
      pid = it->second;
    } else {
      pid = int32_t(payloads_.size());
      payloads_.push_back(p);
      payload_ids_[p] = pid;
    }
  }
  return intern(Tag::Prim, pid, {});
}

TermId TermStore::mk_not(TermId a) {
  Node n = node(a);
  if (!n.test) throw std::invalid_argument("negation applied to action");
  if (n.tag == Tag::Not) return n.kids[0];
  return intern(Tag::Not, -1, {a});
}

TermId TermStore::mk_plus(std::vector<TermId> kids) {
  std::vector<TermId> flat;
  std::function<void(TermId)> add = [&](TermId t) {
    Node n = node(t);
    if (n.tag == Tag::Plus) {
      for (TermId k : n.kids) add(k);
    } else if (n.tag != Tag::Zero) {
      flat.push_back(t);
    }
  };
  for (TermId t : kids) add(t);
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return zero();
  if (flat.size() == 1) return flat[0];
  return intern(Tag::Plus, -1, std::move(flat));
}

TermId TermStore::mk_seq(TermId l, TermId r) {
  if (l == zero() || r == zero()) return zero();
  if (l == one()) return r;
  if (r == one()) return l;
  if (tag(l) == Tag::Seq) {
    Node n = node(l);
    return mk_seq(n.kids[0], mk_seq(n.kids[1], r));
  }
  return intern(Tag::Seq, -1, {l, r});
}

TermId TermStore::mk_star(TermId p) {
  if (p == zero() || p == one()) return one();
  return intern(Tag::Star, -1, {p});
}

TermId TermStore::seq_of(const std::vector<TermId>& factors) {
  TermId acc = one();
  for (auto it = factors.rbegin(); it != factors.rend(); ++it)
    acc = mk_seq(*it, acc);
  return acc;
}

TermId TermStore::nnf(TermId t) {
  Node n = node(t);
  switch (n.tag) {
    case Tag::Zero:
    case Tag::One:
    case Tag::Prim:
      return t;
    case Tag::Plus: {
      std::vector<TermId> kids;
      kids.reserve(n.kids.size());
      for (TermId k : n.kids) kids.push_back(nnf(k));
      return mk_plus(std::move(kids));
    }
    case Tag::Seq:
      return mk_seq(nnf(n.kids[0]), nnf(n.kids[1]));
    case Tag::Star:
      return mk_star(nnf(n.kids[0]));
    case Tag::Not: {
      Node m = node(n.kids[0]);
      switch (m.tag) {
        case Tag::Zero:
          return one();
        case Tag::One:
          return zero();
        case Tag::Prim:
          return t;
        case Tag::Not:
          return nnf(m.kids[0]);
        case Tag::Plus: {
          TermId acc = one();
          std::vector<TermId> parts;
          for (TermId k : m.kids) parts.push_back(nnf(mk_not(k)));
          for (auto it = parts.rbegin(); it != parts.rend(); ++it)
            acc = mk_seq(*it, acc);
          return acc;
        }
        case Tag::Seq:
          return mk_plus({nnf(mk_not(m.kids[0])), nnf(mk_not(m.kids[1]))});
        case Tag::Star:
          throw std::invalid_argument("negation applied to action");
      }
      break;
    }
  }
  return t;
}

std::string nat_expr_str(const NatExpr& e) {
  return e.is_var ? e.var : std::to_string(e.n);
}

std::string TermStore::display_payload(const Payload& p) const {
  switch (p.th) {
    case Th::BitVec:
      if (p.tag == 0) return p.s + "=true";
      return (p.tag == 1 ? "set(" : "unset(") + p.s + ")";
    case Th::IncNat:
      if (p.tag == 0) return p.s + ">" + std::to_string(p.a);
      if (p.tag == 1) return "inc(" + p.s + ")";
      return p.s + ":=" + std::to_string(p.a);
    case Th::Set:
      if (p.tag == 0) return "in(" + p.s + "," + std::to_string(p.a) + ")";
      return (p.tag == 1 ? "insert(" : "remove(") + p.s + "," +
             nat_expr_str(p.es[0]) + ")";
    case Th::Map:
      if (p.tag == 0)
        return p.s + "[" + nat_expr_str(p.es[0]) + "]=" + std::to_string(p.a);
      return p.s + "[" + std::to_string(p.a) + "]:=" + nat_expr_str(p.es[0]);
    case Th::Ltlf:
      if (p.tag == 0) return "last(" + display(p.ts[0]) + ")";
      if (p.tag == 1)
        return "since(" + display(p.ts[0]) + ", " + display(p.ts[1]) + ")";
      return "nop";
    case Th::NetKat:
      if (p.tag == 0) return p.s + "=" + p.s2;
      return p.s + "<-" + p.s2;
    case Th::Sp: {
      if (p.tag == 0) {
        std::string n =
            p.a == INT64_MAX ? std::string("inf") : std::to_string(p.a);
        return p.s + "<" + n;
      }
      std::string out = p.s + ":=minp(";
      for (size_t i = 0; i < p.ss.size(); ++i) {
        if (i) out += ",";
        out += p.ss[i];
      }
      return out + ")";
    }
    case Th::None:
      break;
  }
  return "?";
}

// precedence: + (1) < ; (2) < * (3) < ~ (4)
void TermStore::display_rec(TermId t, int parent_prec, std::string& out) const {
  Node n = node(t);
  auto wrap = [&](int prec, auto emit) {
    if (prec < parent_prec) {
      out += "(";
      emit();
      out += ")";
    } else {
      emit();
    }
  };
  switch (n.tag) {
    case Tag::Zero:
      out += "false";
      break;
    case Tag::One:
      out += "true";
      break;
    case Tag::Prim:
      out += display_payload(payload(t));
      break;
    case Tag::Not:
      wrap(4, [&] {
        out += "~";
        display_rec(n.kids[0], 5, out);
      });
      break;
    case Tag::Plus:
      wrap(1, [&] {
        for (size_t i = 0; i < n.kids.size(); ++i) {
          if (i) out += " + ";
          display_rec(n.kids[i], 2, out);
        }
      });
      break;
    case Tag::Seq:
      wrap(2, [&] {
        display_rec(n.kids[0], 3, out);
        out += "; ";
        display_rec(n.kids[1], 2, out);
      });
      break;
    case Tag::Star:
      wrap(3, [&] {
        display_rec(n.kids[0], 4, out);
        out += "*";
      });
      break;
  }
}

std::string TermStore::display(TermId t) const {
  std::string out;
  display_rec(t, 0, out);
  return out;
}

TermStore& store() {
  static TermStore s;
  return s;
}

}  // namespace kmt
