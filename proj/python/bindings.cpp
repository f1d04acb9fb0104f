#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hhf/bounds.hpp"
#include "hhf/cli.hpp"
#include "hhf/matrix_io.hpp"

namespace py = pybind11;
using namespace hhf;

namespace {

py::dict wick_dict(const WickReport& w) {
  py::dict d;
  d["g"] = w.g;
  d["delta"] = w.delta;
  d["residual"] = w.residual;
  d["residual_balanced"] = w.residual_balanced;
  d["chemical_potential"] = w.chemical_potential;
  d["residual_with_chemical_potential"] = w.residual_with_chemical_potential;
  d["fitted_number_coefficient"] = w.fitted_number_coefficient;
  d["coefficient_repair"] = std::vector<double>(w.coefficient_repair.begin(), w.coefficient_repair.end());
  d["repaired_residual"] = std::vector<double>(w.repaired_residual.begin(), w.repaired_residual.end());
  d["best_repair"] = w.best_repair + 1;
  d["vacuum_energy"] = w.vacuum_energy;
  d["e_hf_offset"] = w.e_hf_offset;
  d["energy_density"] = w.energy_density;
  d["volume"] = w.volume;
  return d;
}

RunConfig make_config(int d, int L, double g, double epsilon, int fock_cap, std::uint64_t seed) {
  RunConfig cfg;
  cfg.d = d;
  cfg.L = L;
  cfg.g = g;
  cfg.epsilon = epsilon;
  cfg.fock_cap = fock_cap;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hartree-Fock verification for the half-filled Hubbard model on the torus";
  m.attr("__version__") = kVersion;

  m.def(
      "solve_gap", [](int d, int L, double g, double tol) { return solve_gap(build_torus(d, L), g, tol); },
      py::arg("d"), py::arg("L"), py::arg("g"), py::arg("tol") = 1e-12, "Unique root Delta in (0, 1/2) of the gap equation.");
  m.def(
      "gap_residual", [](int d, int L, double g, double delta) { return gap_residual(build_torus(d, L), g, delta); },
      py::arg("d"), py::arg("L"), py::arg("g"), py::arg("delta"));
  m.def(
      "dispersion", [](int d, int L) { return dispersion_table(build_torus(d, L)); }, py::arg("d"), py::arg("L"));
  m.def(
      "hf_projector",
      [](int d, int L, double g) {
        const auto lat = build_torus(d, L);
        return hf_projector(lat, g, solve_gap(lat, g)).projector;
      },
      py::arg("d"), py::arg("L"), py::arg("g"), "Dense P_HF in the basis 2x + s.");
  m.def(
      "hf_functional",
      [](int d, int L, double g, const CMat& gamma) { return hf_functional(build_torus(d, L), g, gamma); },
      py::arg("d"), py::arg("L"), py::arg("g"), py::arg("gamma"));
  m.def(
      "energy_density",
      [](int d, int L, double g) {
        const auto lat = build_torus(d, L);
        return hf_energy_density(lat, g, solve_gap(lat, g));
      },
      py::arg("d"), py::arg("L"), py::arg("g"));
  m.def(
      "lower_bound_constant",
      [](int d, int L, double g) {
        const auto a = lower_bound_constant_a(build_torus(d, L), g);
        py::dict out;
        out["a_half_coupling"] = a.a_half_coupling;
        out["a_full_coupling"] = a.a_full_coupling;
        out["floor"] = a.floor;
        return out;
      },
      py::arg("d"), py::arg("L"), py::arg("g"));
  m.def(
      "q7_norm_per_volume",
      [](int d, int L, double g) {
        const auto lat = build_torus(d, L);
        return q7_norm_per_volume(lat, g, solve_gap(lat, g));
      },
      py::arg("d"), py::arg("L"), py::arg("g"), "||Q7 Omega||^2 / |Lambda| from the momentum-space formula.");
  m.def(
      "extensivity_sweep",
      [](int d, const std::vector<int>& lengths, double g) {
        const auto s = extensivity_sweep(d, lengths, g);
        py::list rows;
        for (const auto& r : s.rows) {
          py::dict row;
          row["L"] = r.L;
          row["delta"] = r.delta;
          row["q7_per_vol"] = r.q7_per_vol;
          row["a_half"] = r.a_half;
          row["passed"] = r.passed;
          row["closed_per_vol"] = r.closed_per_vol;
          row["floor"] = r.floor;
          rows.append(row);
        }
        return rows;
      },
      py::arg("d"), py::arg("lengths"), py::arg("g"));
  m.def(
      "wick_identity_check",
      [](int d, int L, double g, int fock_cap) { return wick_dict(wick_identity_check(build_torus(d, L), g, fock_cap)); },
      py::arg("d"), py::arg("L"), py::arg("g"), py::arg("fock_cap") = kDefaultFockCap);
  m.def(
      "verify_json",
      [](const std::string& which, int d, int L, double g, double epsilon, int fock_cap, std::uint64_t seed) {
        const auto res = cmd_verify(make_config(d, L, g, epsilon, fock_cap, seed), which);
        return py::make_tuple(res.exit_code(), to_json(res.doc).dump());
      },
      py::arg("which"), py::arg("d") = 1, py::arg("L") = 4, py::arg("g") = 2.0, py::arg("epsilon") = 0.25,
      py::arg("fock_cap") = kDefaultFockCap, py::arg("seed") = 1);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full = {"hhf"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
  m.def(
      "save_projector",
      [](const std::string& path, int d, int L, double g, double delta, const CMat& p) {
        save_projector(path, {d, L, g, delta, p});
      },
      py::arg("path"), py::arg("d"), py::arg("L"), py::arg("g"), py::arg("delta"), py::arg("matrix"));
  m.def(
      "load_projector",
      [](const std::string& path) {
        const auto f = load_projector(path);
        py::dict out;
        out["d"] = f.d;
        out["L"] = f.L;
        out["g"] = f.g;
        out["delta"] = f.delta;
        out["matrix"] = f.matrix;
        return out;
      },
      py::arg("path"));

  py::register_exception<FockCapError>(m, "FockCapError", PyExc_RuntimeError);
}
