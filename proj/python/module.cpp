#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "avgq/certificate.hpp"
#include "avgq/criticality.hpp"
#include "avgq/errors.hpp"
#include "avgq/exact.hpp"
#include "avgq/experiments.hpp"
#include "avgq/families.hpp"
#include "avgq/parallel.hpp"
#include "avgq/randgen.hpp"
#include "avgq/strategies.hpp"
#include "cli.hpp"

namespace py = pybind11;
using namespace avgq;

namespace {

py::object fraction(const std::string& num, const std::string& den) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::int_(py::str(num)), py::int_(py::str(den)));
}

py::object to_fraction(const ExactRational& q) {
  return fraction(std::to_string(q.numerator()), std::to_string(q.denominator()));
}

py::object to_fraction(const Rational& q) {
  return fraction(boost::multiprecision::numerator(q).str(), boost::multiprecision::denominator(q).str());
}

void check_index(const TruthTable& f, std::uint64_t x) {
  if (x >= f.size()) throw py::index_error("input index out of range");
}

DecisionStrategy make_strategy(const TruthTable& f, const std::string& name, std::uint64_t seed) {
  if (name == "naive") return naive_strategy(f);
  if (name == "ecs") return ecs_strategy(f);
  if (name == "partition") return partition_strategy(f);
  if (name == "recursive") return recursive_strategy(f);
  if (name.rfind("restriction:", 0) == 0)
    return restriction_strategy(f, static_cast<double>(parse_rational(name.substr(12))), seed);
  throw ParseError("unknown strategy '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_avgq, m) {
  m.doc() = "Average-case query complexity of boolean functions";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<LimitError>(m, "LimitError", PyExc_OverflowError);
  py::register_exception<ZeroErrorViolation>(m, "ZeroErrorViolation", PyExc_AssertionError);
  py::register_exception<UnknownExperiment>(m, "UnknownExperiment", PyExc_KeyError);

  py::class_<TruthTable>(m, "TruthTable")
      .def(py::init<int, bool>(), py::arg("n"), py::arg("value") = false)
      .def_static(
          "from_bits",
          [](int n, const std::vector<int>& bits) {
            TruthTable f(n);
            if (bits.size() != f.size()) throw py::value_error("need exactly 2^n bits");
            for (std::uint64_t x = 0; x < f.size(); ++x) f.set(x, bits[x] != 0);
            return f;
          },
          py::arg("n"), py::arg("bits"))
      .def_static(
          "from_on_set",
          [](int n, const std::vector<std::uint64_t>& on) { return TruthTable::from_on_set(n, on); }, py::arg("n"),
          py::arg("black_points"))
      .def_static("parse", &parse_truth_table, py::arg("text"))
      .def_property_readonly("n", &TruthTable::num_vars)
      .def_property_readonly("weight", &TruthTable::weight)
      .def("on_set", &TruthTable::on_set)
      .def("__len__", &TruthTable::size)
      .def("__getitem__",
           [](const TruthTable& f, std::uint64_t x) {
             check_index(f, x);
             return f.get(x);
           })
      .def("__setitem__",
           [](TruthTable& f, std::uint64_t x, bool v) {
             check_index(f, x);
             f.set(x, v);
           })
      .def("restrict", py::overload_cast<const TruthTable&, int, bool>(&restrict), py::arg("var"), py::arg("value"))
      .def("format", py::overload_cast<const TruthTable&, bool>(&format_truth_table), py::arg("hex") = false)
      .def("__str__", py::overload_cast<const TruthTable&>(&format_truth_table))
      .def("__eq__", [](const TruthTable& a, const TruthTable& b) { return a == b; })
      .def("__repr__", [](const TruthTable& f) {
        return "TruthTable(n=" + std::to_string(f.num_vars()) + ", weight=" + std::to_string(f.weight()) + ")";
      });

  m.def("dave_exact", [](const TruthTable& f) { return to_fraction(dave_exact(f)); }, py::arg("f"),
        "Exact average-case query complexity as a Fraction.");
  m.def("brute_force_dave", [](const TruthTable& f) { return to_fraction(brute_force_dave(f)); }, py::arg("f"));
  m.def("worst_depth", [](const TruthTable& f) { return worst_depth(f); }, py::arg("f"));
  m.def("dtsize_min", [](const TruthTable& f) { return dtsize_min(f); }, py::arg("f"));
  m.def("min_certificate", &min_certificate, py::arg("f"));
  m.def("certificate_complexity", &certificate_complexity, py::arg("f"), py::arg("x"));

  m.def("named", [](const std::string& name, int n) { return make_named(parse_named(name), n); }, py::arg("name"),
        py::arg("n"), "and, or, xor, point:K, const:0, const:1");
  m.def("pso", &pso, py::arg("rounds"));
  m.def("compose", &compose, py::arg("outer"), py::arg("inner"));
  m.def("dnf_to_table", [](const std::string& text) { return dnf_to_table(dnf_parse(text)); }, py::arg("text"));
  m.def("canonical_dnf", [](const TruthTable& f) { return dnf_print(canonical_dnf(f)); }, py::arg("f"));

  m.def("sample_fixed_weight", py::overload_cast<int, std::uint64_t, std::uint64_t>(&sample_fixed_weight),
        py::arg("n"), py::arg("m"), py::arg("seed") = 0);
  m.def("is_t_delta_parity", &is_t_delta_parity, py::arg("f"), py::arg("t"), py::arg("delta"));
  m.def(
      "box_process",
      [](int n, std::uint64_t weight, const std::vector<std::pair<int, bool>>& path, std::uint64_t seed) {
        return box_process(n, weight, PathSpec(path), seed).t;
      },
      py::arg("n"), py::arg("m"), py::arg("path"), py::arg("seed") = 0,
      "Weights along the path; path holds (0-based variable, value) pairs.");

  m.def(
      "strategy_cost",
      [](const TruthTable& f, const std::string& name, std::uint64_t trials, std::uint64_t seed) -> py::object {
        const auto s = make_strategy(f, name, seed);
        if (trials == 0) return to_fraction(*measure_exact(s, f).exact);
        return py::float_(measure_monte_carlo(s, f, trials, seed).mean);
      },
      py::arg("f"), py::arg("strategy"), py::arg("trials") = 0, py::arg("seed") = 0,
      "Exact expected cost (Fraction) when trials is 0, else a Monte Carlo mean.");

  m.def(
      "restriction_tail",
      [](const TruthTable& f, const std::string& p) {
        py::list out;
        for (const auto& q : restriction_tail(f, parse_rational(p)).tail) out.append(to_fraction(q));
        return out;
      },
      py::arg("f"), py::arg("p"), "Pr[depth of f restricted by R_p >= t] for t = 0..n.");
  m.def(
      "lambda_estimate", [](const TruthTable& f) { return lambda_estimate(f, default_p_grid()).lambda; },
      py::arg("f"));
  m.def("lemma43_bound", &lemma43_bound, py::arg("n"), py::arg("lam"));

  m.def("set_threads", &set_default_threads, py::arg("threads"));
  m.def(
      "_run_experiment",
      [](const std::string& name, const std::map<std::string, std::string>& params, std::uint64_t seed) {
        return run_experiment(name, Params(params), seed).dump();
      },
      py::arg("name"), py::arg("params"), py::arg("seed"));
  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "avgq");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line front end; returns (exit code, stdout, stderr).");
}
