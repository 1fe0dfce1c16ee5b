// SPDX-License-Identifier: MIT
#include "kmt/oracle.hpp"

#include <algorithm>

namespace kmt {

bool TraceLess::operator()(const Trace& a, const Trace& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].action != b[i].action) return a[i].action < b[i].action;
    if (a[i].state != b[i].state) return a[i].state < b[i].state;
  }
  return false;
}

bool trace_well_formed(const Trace& t, Theory& th) {
  if (t.empty() || t[0].action != 0) return false;
  for (size_t i = 1; i < t.size(); ++i) {
    if (t[i].action == 0) return false;
    if (th.act(t[i].action, t[i - 1].state) != t[i].state) return false;
  }
  return true;
}

bool oracle_pred(TermId test, const Trace& t, Theory& th) {
  EvalTest ev = [&th](TermId a, const Trace& tt) {
    return oracle_pred(a, tt, th);
  };
  return eval_test(test, [&](TermId prim) { return th.pred(prim, t, ev); });
}

TraceSet denote(TermId p, const Trace& t, Theory& th, const Budget& b) {
  TermStore& st = store();
  Node n = st.node(p);
  if (st.is_test(p)) {
    if (oracle_pred(p, t, th)) return TraceSet{t};
    return {};
  }
  switch (n.tag) {
    case Tag::Prim: {
      if ((int)t.size() >= b.trace_len) return {};
      Trace ext = t;
      ext.push_back(LogEntry{th.act(p, t.back().state), p});
      return TraceSet{std::move(ext)};
    }
    case Tag::Plus: {
      TraceSet out;
      for (TermId k : n.kids) {
        TraceSet s = denote(k, t, th, b);
        out.insert(s.begin(), s.end());
      }
      return out;
    }
    case Tag::Seq: {
      TraceSet out;
      for (const Trace& mid : denote(n.kids[0], t, th, b)) {
        TraceSet s = denote(n.kids[1], mid, th, b);
        out.insert(s.begin(), s.end());
      }
      return out;
    }
    case Tag::Star: {
      TraceSet out{t};
      TraceSet frontier{t};
      while (!frontier.empty()) {
        TraceSet next;
        for (const Trace& f : frontier) {
          for (const Trace& g : denote(n.kids[0], f, th, b)) {
            if (!out.count(g)) next.insert(g);
          }
        }
        out.insert(next.begin(), next.end());
        frontier = std::move(next);
      }
      return out;
    }
    default:
      throw std::logic_error("denote: unexpected term");
  }
}

static std::vector<Trace> initial_traces(TermId p, TermId q, Theory& th,
                                         const Budget& b) {
  std::vector<Trace> out;
  std::vector<Value> states = th.enum_states(b);
  for (const Value& s : states) out.push_back(Trace{LogEntry{s, 0}});
  if (th.temporal_hint()) {
    std::vector<TermId> alphabet =
        make_set([&] {
          std::vector<TermId> a = prim_acts_of(p);
          for (TermId t : prim_acts_of(q)) a.push_back(t);
          return a;
        }());
    size_t single = out.size();
    std::vector<Trace> frontier(out.begin(), out.begin() + single);
    for (int len = 1; len + 1 < b.trace_len; ++len) {
      std::vector<Trace> next;
      for (const Trace& t : frontier) {
        for (TermId a : alphabet) {
          Trace ext = t;
          ext.push_back(LogEntry{th.act(a, t.back().state), a});
          next.push_back(ext);
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
  }
  return out;
}

OracleResult equiv_bounded(TermId p, TermId q, Theory& th, const Budget& b) {
  for (const Trace& t0 : initial_traces(p, q, th, b)) {
    TraceSet dp = denote(p, t0, th, b);
    TraceSet dq = denote(q, t0, th, b);
    if (dp == dq) continue;
    OracleCounterexample cex;
    cex.initial = t0;
    for (const Trace& t : dp) {
      if (!dq.count(t)) {
        cex.distinguishing = t;
        cex.in_left = true;
        break;
      }
    }
    if (!cex.in_left) {
      for (const Trace& t : dq) {
        if (!dp.count(t)) {
          cex.distinguishing = t;
          break;
        }
      }
    }
    return OracleResult{false, std::move(cex)};
  }
  return OracleResult{true, std::nullopt};
}

std::string trace_str(const Trace& t) {
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += " -" + store().display(t[i].action) + "-> ";
    out += t[i].state.dump();
  }
  return out;
}

}  // namespace kmt
