// SPDX-License-Identifier: MIT
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kmt/automata.hpp"
#include "kmt/normalize.hpp"
#include "kmt/oracle.hpp"
#include "kmt/parser.hpp"
#include "kmt/theories/theories.hpp"
#include "kmt/validate.hpp"

namespace py = pybind11;

namespace {

class PySession {
 public:
  explicit PySession(const std::string& theory, uint64_t fuel) {
    kmt::EngineOptions opts;
    opts.fuel = fuel;
    ses_ = kmt::make_session(theory, opts);
  }

  std::string normalize(const std::string& src) {
    kmt::TermId p = parse_bind({src})[0];
    return kmt::nf_display(ses_.engine->normalize(p));
  }

  py::tuple equiv(const std::string& p, const std::string& q) {
    auto ts = parse_bind({p, q});
    kmt::EquivResult r = kmt::equivalent(ts[0], ts[1], *ses_.engine);
    std::string detail;
    if (r.equivalent) {
      for (const std::string& line : r.relation) {
        if (!detail.empty()) detail += "\n";
        detail += line;
      }
    } else if (r.cex) {
      detail = kmt::witness_str(*r.cex);
    }
    return py::make_tuple(r.equivalent, detail);
  }

  py::tuple empty(const std::string& p) {
    auto ts = parse_bind({p});
    kmt::EmptyResult r = kmt::check_empty(ts[0], *ses_.engine);
    return py::make_tuple(
        r.empty, r.witness ? kmt::witness_str(*r.witness, false) : "");
  }

  py::tuple oracle_equiv(const std::string& p, const std::string& q,
                         int states, int trace_len) {
    auto ts = parse_bind({p, q});
    kmt::Budget b{states, trace_len};
    kmt::OracleResult r = kmt::equiv_bounded(ts[0], ts[1], *ses_.theory, b);
    std::string detail;
    if (!r.equivalent && r.cex) {
      detail = "from " + kmt::trace_str(r.cex->initial) + ", trace " +
               kmt::trace_str(r.cex->distinguishing) + " is accepted by the " +
               (r.cex->in_left ? "left" : "right") + " side only";
    }
    return py::make_tuple(r.equivalent, detail);
  }

  py::tuple validate(int states, int trace_len, uint64_t seed) {
    kmt::ValidateOptions vo;
    vo.budget = kmt::Budget{states, trace_len};
    vo.seed = seed;
    kmt::ValidateReport rep =
        kmt::validate_theory(*ses_.theory, *ses_.engine, vo);
    return py::make_tuple(rep.ok, rep.summary());
  }

  std::string dot(const std::string& p) {
    auto ts = parse_bind({p});
    return kmt::to_dot(kmt::term_sym_automaton(ts[0]));
  }

  std::string display(const std::string& p) {
    auto ts = parse_bind({p});
    return kmt::store().display(ts[0]);
  }

 private:
  std::vector<kmt::TermId> parse_bind(const std::vector<std::string>& srcs) {
    std::vector<kmt::TermId> ts;
    ts.reserve(srcs.size());
    for (const auto& s : srcs) ts.push_back(kmt::parse_term(s, *ses_.theory));
    ses_.theory->bind(ts);
    return ts;
  }

  kmt::Session ses_;
};

}  // namespace

PYBIND11_MODULE(_kmt, m) {
  m.doc() = "Kleene algebra modulo theories: normalization and decision "
            "procedures over pluggable client theories";

  py::register_exception<kmt::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<kmt::TheoryError>(m, "TheoryError", PyExc_ValueError);
  py::register_exception<kmt::FuelExhausted>(m, "FuelExhausted",
                                             PyExc_RuntimeError);

  m.def("theories", [] {
    kmt::ensure_builtin_theories();
    return kmt::registered_theories();
  });

  py::class_<PySession>(m, "Session")
      .def(py::init<const std::string&, uint64_t>(), py::arg("theory"),
           py::arg("fuel") = 1'000'000)
      .def("normalize", &PySession::normalize, py::arg("term"))
      .def("equiv", &PySession::equiv, py::arg("left"), py::arg("right"))
      .def("empty", &PySession::empty, py::arg("term"))
      .def("oracle_equiv", &PySession::oracle_equiv, py::arg("left"),
           py::arg("right"), py::arg("states") = 8, py::arg("trace_len") = 4)
      .def("validate", &PySession::validate, py::arg("states") = 8,
           py::arg("trace_len") = 4, py::arg("seed") = 1)
      .def("dot", &PySession::dot, py::arg("term"))
      .def("display", &PySession::display, py::arg("term"));
}
