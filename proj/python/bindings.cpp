#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pgm/cli.hpp"
#include "pgm/errors.hpp"

namespace py = pybind11;
using namespace pgm;

namespace {

json to_json(const py::handle& obj) {
  auto dumps = py::module_::import("json").attr("dumps");
  return json::parse(dumps(obj).cast<std::string>());
}

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Config make_config(std::optional<i64> precision) {
  Config cfg;
  if (precision) cfg.precision = *precision;
  return cfg;
}

PhiGammaModule module_of(const py::handle& obj) { return module_from_json(to_json(obj)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cohomology of mod p (phi, Gamma)-modules via the Herr complex";

  static py::exception<Error> exc(m, "PgmError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(std::string(error_kind_name(e.kind())), std::string(e.what()),
                                      exit_code_for(e.kind()));
      PyErr_SetObject(exc.ptr(), args.ptr());
    }
  });

  m.def("commands", &command_names);

  m.def(
      "run",
      [](const std::string& command, const py::list& inputs, std::optional<i64> precision, u64 seed, u32 p, u32 q,
         std::size_t d_max, std::size_t count) {
        std::vector<json> in;
        for (const auto& x : inputs) in.push_back(to_json(x));
        RunConfig rc;
        rc.command = command;
        rc.seed = seed;
        rc.p = p;
        rc.q = q;
        rc.d_max = d_max;
        rc.count = count;
        json r;
        {
          py::gil_scoped_release release;
          r = run_command_json(command, in, make_config(precision), rc);
        }
        return to_py(r);
      },
      py::arg("command"), py::arg("inputs") = py::list(), py::arg("precision") = py::none(), py::arg("seed") = 1,
      py::arg("p") = 3, py::arg("q") = 0, py::arg("d_max") = 2, py::arg("count") = 10);

  m.def(
      "trivial",
      [](u32 p, int degree, std::size_t rank) {
        AlgPtr A = degree == 1 ? CoefficientAlgebra::prime_field(p) : CoefficientAlgebra::finite_field(p, degree);
        return to_py(module_to_json(trivial_module(A, rank)));
      },
      py::arg("p"), py::arg("degree") = 1, py::arg("rank") = 1);

  m.def(
      "character",
      [](u32 p, i64 n, const py::object& a, int degree) {
        AlgPtr A = degree == 1 ? CoefficientAlgebra::prime_field(p) : CoefficientAlgebra::finite_field(p, degree);
        CharacterLabel l{n, elem_from_json(A, to_json(a))};
        return to_py(module_to_json(from_character(A, l)));
      },
      py::arg("p"), py::arg("n"), py::arg("a") = 1, py::arg("degree") = 1);

  m.def(
      "cohomology",
      [](const py::object& module, std::optional<i64> precision, bool duality) {
        PhiGammaModule M = module_of(module);
        Herr H(M, make_config(precision));
        return to_py(report_to_json(H.report(duality)));
      },
      py::arg("module"), py::arg("precision") = py::none(), py::arg("duality") = true);

  m.def(
      "h1_basis",
      [](const py::object& module, std::optional<i64> precision) {
        Herr H(module_of(module), make_config(precision));
        json out = json::array();
        for (const auto& c : H.h1_basis()) out.push_back(cocycle_to_json(c));
        return to_py(out);
      },
      py::arg("module"), py::arg("precision") = py::none());

  m.def(
      "identify",
      [](const py::object& module, std::optional<i64> precision) {
        return to_py(label_to_json(identify_rank1(module_of(module), make_config(precision))));
      },
      py::arg("module"), py::arg("precision") = py::none());
}
