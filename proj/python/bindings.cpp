#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "atlas/report.hpp"

namespace py = pybind11;
using namespace atlas;

namespace {

std::string run(const std::string& command, const std::string& spec, std::optional<double> tol, std::optional<int> jobs) {
  ProblemSpec ps;
  try {
    ps = parse_problem(nlohmann::json::parse(spec));
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("spec: ") + e.what());
  }
  ps.source = "<python>";
  CommandOptions opt;
  opt.tol = tol;
  opt.jobs = jobs;
  CommandResult res;
  {
    py::gil_scoped_release release;
    res = run_command(command, ps, opt);
  }
  return dump_json(res.report);
}

py::dict formal(int r, const std::vector<CMatrix>& A, int M, std::optional<CMatrix> F0) {
  MeromorphicSystem sys;
  sys.r = r;
  sys.A = A;
  sys.validate();
  FormalData fd = formal_reduce_distinct(sys, F0, M);
  GaugeCheck g = gauge_identity_check(sys, fd);
  py::dict out;
  out["Q"] = fd.Q;
  out["J"] = CVector(fd.J);
  out["F"] = fd.F;
  out["identity_error"] = std::max(g.coefficient_error, g.pointwise_error);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stokes geometry and asymptotic solutions near an irregular singularity";
  m.attr("report_schema") = report_schema;

  static PyObject* base = py::exception<Error>(m, "AtlasError").release().ptr();
  static PyObject* kinds[4];
  const char* names[4] = {"InputError", "DomainError", "SolverError", "VerificationError"};
  for (int i = 0; i < 4; ++i) kinds[i] = PyErr_NewException((std::string("atlas._core.") + names[i]).c_str(), base, nullptr);
  for (int i = 0; i < 4; ++i) m.add_object(names[i], py::handle(kinds[i]));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      int i = 0;
      switch (e.kind()) {
        case ErrorKind::Input: i = 0; break;
        case ErrorKind::Domain: i = 1; break;
        case ErrorKind::Solver: i = 2; break;
        case ErrorKind::Verification: i = 3; break;
      }
      PyErr_SetString(kinds[i], e.what());
    }
  });

  m.def("run", &run, py::arg("command"), py::arg("spec"), py::arg("tol") = py::none(), py::arg("jobs") = py::none(),
        "Run a command on a JSON spec string and return the report as a JSON string.");
  m.def("formal_reduce", &formal, py::arg("r"), py::arg("A"), py::arg("M"), py::arg("F0") = py::none(),
        "Formal reduction of z^(r-1) sum A_k z^-k with distinct leading eigenvalues.");
  m.def(
      "stokes_directions",
      [](const std::vector<double>& exponents, const std::vector<std::vector<Complex>>& blocks, double lo, double hi,
         std::optional<double> eta) {
        std::vector<Block> bl;
        for (auto& b : blocks) bl.push_back(Block{1, b});
        ExponentPolynomialDiagonal L(exponents, bl);
        auto f = stokes_rays(L, eta.value_or(default_eta));
        std::vector<std::pair<double, double>> out;
        for (auto& d : all_ray_directions(f, lo, hi, true)) out.emplace_back(d.direction, f.rays[d.rho].sigma);
        return out;
      },
      py::arg("exponents"), py::arg("blocks"), py::arg("lo"), py::arg("hi"), py::arg("eta") = py::none(),
      "Stokes directions in [lo, hi] as (direction, sigma) pairs.");
}
