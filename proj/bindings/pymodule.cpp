// Python bindings for the main operations: measures, the grid functionals,
// operator norms, characteristics, corona decompositions and the full
// verification harness. Reports cross the boundary as JSON strings so the
// python side stays schema-free.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twoweight/harness.hpp"

namespace py = pybind11;
using namespace twoweight;

namespace {

DiscreteMeasure make_measure(const std::vector<double>& positions,
                             const std::vector<double>& masses) {
  return DiscreteMeasure(positions, masses);
}

Truncation make_trunc(double eps, double outer) {
  return Truncation{eps, outer > 0.0
                             ? outer
                             : std::numeric_limits<double>::infinity()};
}

std::string characteristics_json(const DiscreteMeasure& sigma,
                                 const DiscreteMeasure& omega, int depth,
                                 bool local_tails) {
  GridConfig cfg;
  cfg.max_depth = depth;
  cfg.validate();
  const Grid grid(choose_root(sigma, omega), depth);
  const Truncation trunc = truncation_ladder(sigma, omega)[0];
  const double e2 = energy_char(sigma, omega, grid).value;
  std::vector<double> ones(sigma.size(), 1.0);
  StoppingForest forest(&grid, grid.root());
  if (mass(sigma, grid.root_interval()) > 0.0)
    forest = cz_pe_stopping(ones, sigma, omega, grid, 4.0 * e2 + 1.0, cfg);
  const auto rep =
      characteristic_report(sigma, omega, grid, cfg, trunc, forest,
                            local_tails);
  json j;
  auto put = [&](const char* k, const ValueWitness& v) {
    j[k] = {{"value", v.value}, {"witness", v.witness}};
  };
  put("a2_offset", rep.a2_offset);
  put("a2_hole", rep.a2_hole);
  put("a2_twotailed", rep.a2_twotailed);
  put("testing_fwd", rep.testing_fwd);
  put("testing_bwd", rep.testing_bwd);
  put("testing_local", rep.testing_local);
  put("weak_bdd", rep.weak_bdd);
  put("energy_fwd", rep.energy_fwd);
  put("energy_bwd", rep.energy_bwd);
  put("pe", rep.pe);
  j["func_energy"] = {{"direct", rep.func_energy.direct},
                      {"khat_fwd", rep.func_energy.khat_fwd},
                      {"khat_bwd", rep.func_energy.khat_bwd},
                      {"value", rep.func_energy.value}};
  return j.dump(2);
}

}  // namespace

PYBIND11_MODULE(_twoweight, m) {
  m.doc() = "two-weight Hilbert transform toolkit";

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("left"), py::arg("length"))
      .def_readonly("left", &Interval::left)
      .def_readonly("length", &Interval::length)
      .def_property_readonly("right", &Interval::right)
      .def_property_readonly("center", &Interval::center);

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def(py::init(&make_measure), py::arg("positions"), py::arg("masses"))
      .def("__len__", &DiscreteMeasure::size)
      .def_property_readonly("positions", &DiscreteMeasure::positions)
      .def_property_readonly("masses", &DiscreteMeasure::masses)
      .def("total_mass", &DiscreteMeasure::total_mass);

  py::class_<Truncation>(m, "Truncation")
      .def(py::init(&make_trunc), py::arg("eps") = 1e-12,
           py::arg("outer") = -1.0)
      .def_readonly("eps", &Truncation::eps)
      .def_readonly("outer", &Truncation::outer);

  m.def("mass", &mass, py::arg("mu"), py::arg("interval"));
  m.def("poisson", &poisson, py::arg("interval"), py::arg("mu"));
  m.def("tail_weight", &tail_weight, py::arg("interval"), py::arg("x"));
  m.def("energy", &energy, py::arg("interval"), py::arg("omega"),
        "mass-normalized variance at interval scale, E(J, omega)^2");

  m.def(
      "hilbert_apply",
      [](const std::vector<double>& f, const DiscreteMeasure& sigma, double x,
         const Truncation& t) { return hilbert_apply(f, sigma, x, t); },
      py::arg("f"), py::arg("sigma"), py::arg("x"), py::arg("trunc"));
  m.def(
      "bilinear",
      [](const std::vector<double>& f, const std::vector<double>& g,
         const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
         const Truncation& t) {
        return hilbert_bilinear(f, g, sigma, omega, t);
      },
      py::arg("f"), py::arg("g"), py::arg("sigma"), py::arg("omega"),
      py::arg("trunc"));
  m.def(
      "operator_norm",
      [](const DiscreteMeasure& sigma, const DiscreteMeasure& omega,
         const Truncation& t) { return operator_norm(sigma, omega, t).value; },
      py::arg("sigma"), py::arg("omega"), py::arg("trunc"));
  m.def("truncation_gap", &truncation_gap, py::arg("sigma"), py::arg("omega"));

  m.def("characteristics_json", &characteristics_json, py::arg("sigma"),
        py::arg("omega"), py::arg("depth") = 10,
        py::arg("local_tails") = false);

  m.def(
      "generate_instance_json",
      [](std::uint64_t seed, const std::string& profile, int atoms,
         int depth) {
        GenOptions opt;
        opt.atoms = atoms;
        opt.max_depth = depth;
        return generate(seed, profile, opt).to_json().dump(2);
      },
      py::arg("seed"), py::arg("profile") = "uniform", py::arg("atoms") = 24,
      py::arg("depth") = 10);

  m.def(
      "run_instance_json",
      [](const std::string& instance_json, double gamma) {
        const Instance inst =
            Instance::from_json(json::parse(instance_json));
        std::optional<double> g;
        if (gamma > 0.0) g = gamma;
        return run_instance(inst, g).to_json().dump(2);
      },
      py::arg("instance_json"), py::arg("gamma") = -1.0);

  m.def(
      "run_suite_json",
      [](const std::string& name, const std::vector<std::uint64_t>& seeds,
         const std::string& baseline_dir) {
        const SuiteResult r = run_suite(name, seeds, baseline_dir);
        return py::make_tuple(r.pass, r.report.dump(2));
      },
      py::arg("name"), py::arg("seeds"),
      py::arg("baseline_dir") = std::string());
}
