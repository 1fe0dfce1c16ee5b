// kmt: normalize, decide, and visualize KMT terms under a chosen theory.
//
// SPDX-License-Identifier: MIT
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kmt/automata.hpp"
#include "kmt/normalize.hpp"
#include "kmt/oracle.hpp"
#include "kmt/parser.hpp"
#include "kmt/theory.hpp"
#include "kmt/validate.hpp"

namespace {

struct Query {
  std::string theory = "incnat";
  uint64_t fuel = 1'000'000;
  int states = 8;
  int trace_len = 4;
  uint64_t seed = 1;
  std::string batch_file;

  std::string cmd;
  std::vector<std::string> terms;
  std::string out_file;
};

int run_query(const Query& q, std::ostream& out, std::ostream& err);

int run_batch(const Query& q, std::ostream& out, std::ostream& err);

CLI::App* add_command(CLI::App& app, Query& q, const std::string& name,
                      const std::string& desc, int arity) {
  CLI::App* sub = app.add_subcommand(name, desc);
  sub->fallthrough();
  if (arity > 0)
    sub->add_option("terms", q.terms, "term(s)")->expected(arity)->required();
  sub->callback([&q, name] { q.cmd = name; });
  return sub;
}

int dispatch(const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err, bool allow_batch) {
  CLI::App app{"KMT: decision procedures for Kleene algebra modulo theories"};
  Query q;
  app.add_option("--theory", q.theory,
                 "theory handle, e.g. incnat, bitvec, ltlf(incnat)");
  app.add_option("--fuel", q.fuel, "pushback rule budget");
  app.add_option("--states", q.states, "oracle state bound");
  app.add_option("--trace-len", q.trace_len, "oracle trace length bound");
  app.add_option("--seed", q.seed, "random seed for sampled checks");
  if (allow_batch)
    app.add_option("--batch", q.batch_file, "run one query per line");

  add_command(app, q, "normalize", "print the pushback normal form", 1);
  add_command(app, q, "equiv", "decide equivalence of two terms", 2);
  add_command(app, q, "empty", "decide emptiness of a term", 1);
  add_command(app, q, "oracle-equiv",
              "compare two terms with the bounded trace oracle", 2);
  add_command(app, q, "validate-theory",
              "check the theory's pushback contract", 0);
  CLI::App* dot =
      add_command(app, q, "dot", "emit a DOT symbolic automaton", 1);
  dot->add_option("-o,--out", q.out_file, "output file");

  try {
    std::vector<std::string> rev(argv.rbegin(), argv.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (!q.batch_file.empty()) return run_batch(q, out, err);
  if (q.cmd.empty()) {
    err << "error: no subcommand given\n" << app.help();
    return 2;
  }
  return run_query(q, out, err);
}

int run_batch(const Query& q, std::ostream& out, std::ostream& err) {
  std::ifstream in(q.batch_file);
  if (!in) {
    err << "error: cannot open batch file " << q.batch_file << "\n";
    return 2;
  }
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.find_first_not_of(" \t") != std::string::npos)
      lines.push_back(line);
  }

  std::vector<std::future<std::pair<int, std::string>>> jobs;
  jobs.reserve(lines.size());
  for (const std::string& line : lines) {
    jobs.push_back(std::async(std::launch::async, [line] {
      std::ostringstream o;
      std::vector<std::string> argv;
      try {
        argv = CLI::detail::split_up(line);
      } catch (const std::exception& e) {
        return std::make_pair(2, std::string("error: ") + e.what() + "\n");
      }
      int code = dispatch(argv, o, o, false);
      return std::make_pair(code, o.str());
    }));
  }

  int worst = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    auto [code, text] = jobs[i].get();
    out << "[" << i + 1 << "] " << lines[i] << "\n";
    std::istringstream body(text);
    for (std::string l; std::getline(body, l);) out << "    " << l << "\n";
    out << "    exit " << code << "\n";
    worst = std::max(worst, code);
  }
  (void)err;
  return worst;
}

int run_query(const Query& q, std::ostream& out, std::ostream& err) {
  kmt::Session ses;
  std::vector<kmt::TermId> terms;
  try {
    kmt::EngineOptions opts;
    opts.fuel = q.fuel;
    ses = kmt::make_session(q.theory, opts);
    for (const std::string& s : q.terms)
      terms.push_back(kmt::parse_term(s, *ses.theory));
    ses.theory->bind(terms);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  kmt::Budget budget{q.states, q.trace_len};
  try {
    if (q.cmd == "normalize") {
      out << kmt::nf_display(ses.engine->normalize(terms[0])) << "\n";
      return 0;
    }
    if (q.cmd == "equiv") {
      kmt::EquivResult r = kmt::equivalent(terms[0], terms[1], *ses.engine);
      if (r.equivalent) {
        out << "equivalent\n";
        for (const std::string& line : r.relation) out << "  " << line << "\n";
        return 0;
      }
      out << "not equivalent\n";
      if (r.cex) out << "  " << kmt::witness_str(*r.cex) << "\n";
      return 1;
    }
    if (q.cmd == "empty") {
      kmt::EmptyResult r = kmt::check_empty(terms[0], *ses.engine);
      if (r.empty) {
        out << "empty\n";
        return 0;
      }
      out << "nonempty\n";
      if (r.witness) out << "  " << kmt::witness_str(*r.witness, false) << "\n";
      return 1;
    }
    if (q.cmd == "oracle-equiv") {
      kmt::OracleResult r =
          kmt::equiv_bounded(terms[0], terms[1], *ses.theory, budget);
      if (r.equivalent) {
        out << "equivalent up to states=" << budget.states
            << " trace-len=" << budget.trace_len << "\n";
        return 0;
      }
      out << "not equivalent\n";
      if (r.cex) {
        out << "  from " << kmt::trace_str(r.cex->initial) << ", trace "
            << kmt::trace_str(r.cex->distinguishing) << " is accepted by the "
            << (r.cex->in_left ? "left" : "right") << " side only\n";
      }
      return 1;
    }
    if (q.cmd == "validate-theory") {
      kmt::ValidateOptions vo;
      vo.budget = budget;
      vo.seed = q.seed;
      kmt::ValidateReport rep =
          kmt::validate_theory(*ses.theory, *ses.engine, vo);
      out << q.theory << ": " << rep.summary() << "\n";
      return rep.ok ? 0 : 1;
    }
    if (q.cmd == "dot") {
      std::string dot = kmt::to_dot(kmt::term_sym_automaton(terms[0]));
      if (q.out_file.empty()) {
        out << dot;
      } else {
        std::ofstream f(q.out_file);
        if (!f) {
          err << "error: cannot write " << q.out_file << "\n";
          return 2;
        }
        f << dot;
      }
      return 0;
    }
  } catch (const kmt::FuelExhausted& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  err << "error: unknown subcommand " << q.cmd << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr, true);
}
