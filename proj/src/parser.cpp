// SPDX-License-Identifier: MIT
#include "kmt/parser.hpp"

#include <cctype>
#include <vector>

#include "kmt/term.hpp"

namespace kmt {

namespace {

enum class TokKind { Ident, Num, Sym, KwTrue, KwFalse, End };

struct Tok {
  TokKind kind;
  std::string text;
  size_t pos;
};

std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) ||
              src[i] == '_'))
        ++i;
      std::string w = src.substr(start, i - start);
      TokKind k = w == "true"    ? TokKind::KwTrue
                  : w == "false" ? TokKind::KwFalse
                                 : TokKind::Ident;
      out.push_back({k, std::move(w), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[i])))
        ++i;
      out.push_back({TokKind::Num, src.substr(start, i - start), start});
      continue;
    }
    if (c == ':') {
      if (i + 1 < src.size() && src[i + 1] == '=') {
        out.push_back({TokKind::Sym, ":=", start});
        i += 2;
        continue;
      }
      throw ParseError("unexpected ':'", start);
    }
    if (c == '<' && i + 1 < src.size() && src[i + 1] == '-') {
      out.push_back({TokKind::Sym, "<-", start});
      i += 2;
      continue;
    }
    static const std::string singles = "+;.*~()[],><=";
    if (singles.find(c) != std::string::npos) {
      out.push_back({TokKind::Sym, std::string(1, c), start});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({TokKind::End, "", src.size()});
  return out;
}

class Parser {
 public:
  Parser(const std::string& src, Theory& th) : toks_(lex(src)), th_(th) {}

  TermId run() {
    TermId t = sum();
    if (!at_end())
      throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return t;
  }

 private:
  const Tok& peek() const { return toks_[i_]; }
  const Tok& next() { return toks_[i_++]; }
  bool at_end() const { return peek().kind == TokKind::End; }
  bool at_sym(const std::string& s) const {
    return peek().kind == TokKind::Sym && peek().text == s;
  }
  bool eat_sym(const std::string& s) {
    if (!at_sym(s)) return false;
    ++i_;
    return true;
  }

  TermId sum() {
    std::vector<TermId> kids{seq()};
    while (eat_sym("+")) kids.push_back(seq());
    return kids.size() == 1 ? kids[0] : store().mk_plus(std::move(kids));
  }

  TermId seq() {
    TermId t = postfix();
    while (at_sym(";") || at_sym(".")) {
      ++i_;
      t = store().mk_seq(t, postfix());
    }
    return t;
  }

  TermId postfix() {
    TermId t = unary();
    while (eat_sym("*")) t = store().mk_star(t);
    return t;
  }

  TermId unary() {
    if (at_sym("~")) {
      size_t pos = next().pos;
      TermId t = unary();
      if (!store().is_test(t))
        throw ParseError("negation applied to action", pos);
      return store().mk_not(t);
    }
    return primary();
  }

  TermId primary() {
    const Tok& t = peek();
    switch (t.kind) {
      case TokKind::KwTrue:
        ++i_;
        return store().one();
      case TokKind::KwFalse:
        ++i_;
        return store().zero();
      case TokKind::Ident:
      case TokKind::Num:
        return atom();
      case TokKind::Sym:
        if (eat_sym("(")) {
          TermId inner = sum();
          if (!eat_sym(")"))
            throw ParseError("expected ')'", peek().pos);
          return inner;
        }
        break;
      case TokKind::End:
        throw ParseError("unexpected end of input", t.pos);
    }
    throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  // A theory atom: a maximal run of non-structural tokens, with bracketed
  // groups consumed whole so heads like minp(A,B) survive intact.
  TermId atom() {
    size_t start_pos = peek().pos;
    std::vector<Tok> run{next()};
    while (!at_end()) {
      const Tok& nt = peek();
      if (nt.kind == TokKind::Sym) {
        const std::string& s = nt.text;
        if (s == "+" || s == ";" || s == "." || s == "*" || s == "~" ||
            s == ")" || s == "]" || s == ",")
          break;
        if (s == "(") {
          if (run.back().kind != TokKind::Ident) break;
          consume_group(run);
          continue;
        }
        if (s == "[") {
          consume_group(run);
          continue;
        }
      }
      run.push_back(next());
    }
    return dispatch(run, start_pos);
  }

  void consume_group(std::vector<Tok>& run) {
    int depth = 0;
    do {
      const Tok& t = peek();
      if (t.kind == TokKind::End)
        throw ParseError("unbalanced bracket", t.pos);
      if (t.text == "(" || t.text == "[") ++depth;
      if (t.text == ")" || t.text == "]") --depth;
      run.push_back(next());
    } while (depth > 0);
  }

  TermId dispatch(const std::vector<Tok>& run, size_t pos) {
    std::vector<std::string> texts;
    texts.reserve(run.size());
    for (const Tok& t : run) texts.push_back(t.text);

    Theory::ParseTerm cb = [this](const std::string& s) {
      return parse_term(s, th_);
    };

    try {
      if (call_shaped(run)) {
        std::vector<std::string> args = split_args(run);
        if (auto r = th_.parse_call(run[0].text, args, cb)) return *r;
      }
      if (auto r = th_.parse_raw(texts)) return *r;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(std::string("malformed atom: ") + e.what(), pos);
    }

    std::string shown;
    for (size_t i = 0; i < texts.size(); ++i) {
      if (i) shown += " ";
      shown += texts[i];
    }
    throw ParseError("unknown atom '" + shown + "'", pos);
  }

  static bool call_shaped(const std::vector<Tok>& run) {
    if (run.size() < 3 || run[0].kind != TokKind::Ident ||
        run[1].text != "(" || run.back().text != ")")
      return false;
    int depth = 0;
    for (size_t i = 1; i < run.size(); ++i) {
      if (run[i].text == "(" || run[i].text == "[") ++depth;
      if (run[i].text == ")" || run[i].text == "]") --depth;
      if (depth == 0 && i + 1 != run.size()) return false;
    }
    return depth == 0;
  }

  static std::vector<std::string> split_args(const std::vector<Tok>& run) {
    std::vector<std::string> args;
    std::string cur;
    int depth = 0;
    for (size_t i = 2; i + 1 < run.size(); ++i) {
      const std::string& s = run[i].text;
      if (s == "(" || s == "[") ++depth;
      if (s == ")" || s == "]") --depth;
      if (depth == 0 && s == ",") {
        args.push_back(cur);
        cur.clear();
        continue;
      }
      if (!cur.empty()) cur += " ";
      cur += s;
    }
    if (!cur.empty() || !args.empty()) args.push_back(cur);
    return args;
  }

  std::vector<Tok> toks_;
  size_t i_ = 0;
  Theory& th_;
};

}  // namespace

TermId parse_term(const std::string& src, Theory& th) {
  return Parser(src, th).run();
}

}  // namespace kmt
