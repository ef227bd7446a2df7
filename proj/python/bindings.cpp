// Copyright 2026 The tfim-control Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python module tfim_control._core.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>

#include "tfim/dynamics.hpp"
#include "tfim/harness/config.hpp"
#include "tfim/harness/harness.hpp"
#include "tfim/optimizers/dcrab.hpp"
#include "tfim/optimizers/grape.hpp"
#include "tfim/pulses.hpp"
#include "tfim/spin_model.hpp"

namespace py = pybind11;
using namespace tfim;

namespace {

using Settings = std::map<std::string, std::string>;

ExperimentConfig make_config(const Settings& settings) {
  ExperimentConfig config;
  for (const auto& [key, value] : settings) apply_setting(config, key, value);
  config.validate();
  return config;
}

SpinChainSpec make_spec(std::vector<double> couplings, double beta, const std::string& breaker) {
  SpinChainSpec spec;
  spec.n_spins = static_cast<int>(couplings.size());
  spec.couplings = std::move(couplings);
  spec.beta = beta;
  if (breaker == "single") {
    spec.breaker = Breaker::SingleSiteZ;
  } else if (breaker == "sum") {
    spec.breaker = Breaker::FullSumZ;
  } else {
    throw py::value_error("breaker must be 'single' or 'sum'");
  }
  spec.validate();
  return spec;
}

py::dict record_dict(const CampaignRecord& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["tf"] = r.t_f;
  d["scheme"] = r.scheme;
  d["best_F"] = r.best_fidelity;
  d["n_evals"] = r.evaluations;
  d["wall_s"] = r.wall_s;
  d["status"] = r.status;
  d["checksum"] = r.checksum;
  d["params"] = r.params;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pulse control of a random-coupling transverse Ising ring";
  m.attr("__version__") = TFIM_VERSION;

  m.def("draw_couplings",
        [](std::uint64_t master_seed, int n_trials, int n_spins) {
          return draw_couplings(master_seed, n_trials, n_spins).couplings;
        },
        py::arg("master_seed"), py::arg("n_trials"), py::arg("n_spins"),
        "Couplings of trials 1..n_trials, one list per trial.");

  m.def("spectrum",
        [](std::vector<double> couplings, double beta, const std::string& breaker) {
          const auto spec = make_spec(std::move(couplings), beta, breaker);
          return RealVector(diagonalize(build_terms(spec).static_part()).eigenvalues);
        },
        py::arg("couplings"), py::arg("beta") = 1e-3, py::arg("breaker") = "single",
        "Ascending eigenvalues of the static Hamiltonian.");

  m.def("degeneracy_report",
        [](std::vector<double> couplings, double beta, const std::string& breaker, double tol) {
          const auto r = degeneracy_report(make_spec(std::move(couplings), beta, breaker), tol);
          py::dict d;
          d["pair_count"] = r.pair_count;
          d["min_gap"] = r.min_gap;
          d["min_nonzero_gap"] = r.min_nonzero_gap;
          return d;
        },
        py::arg("couplings"), py::arg("beta") = 1e-3, py::arg("breaker") = "single", py::arg("tol") = 1e-9);

  py::class_<ControlProblem>(m, "Problem")
      .def(py::init([](std::vector<double> couplings, double t_f, double beta, const std::string& breaker) {
             return make_problem(make_spec(std::move(couplings), beta, breaker), t_f);
           }),
           py::arg("couplings"), py::arg("t_f"), py::arg("beta") = 1e-3, py::arg("breaker") = "single")
      .def_readonly("t_f", &ControlProblem::t_f)
      .def_property_readonly("psi_i", [](const ControlProblem& p) { return p.states.psi_i; })
      .def_property_readonly("psi_f", [](const ControlProblem& p) { return p.states.psi_f; })
      .def("gaussian_fidelity",
           [](const ControlProblem& p, double a, double omega) {
             return evolve_problem(p, GaussianPulse{a, omega, p.t_f}).fidelity;
           },
           py::arg("a"), py::arg("omega"))
      .def("polynomial_fidelity",
           [](const ControlProblem& p, const std::vector<double>& lambdas) {
             return evolve_problem(p, solve_polynomial(lambdas, p.t_f)).fidelity;
           },
           py::arg("lambdas"))
      .def("bins_fidelity",
           [](const ControlProblem& p, const std::vector<double>& bins) {
             return evolve_problem(p, PiecewiseConstantPulse{bins, p.t_f}).fidelity;
           },
           py::arg("bins"))
      .def("grape_gradient",
           [](const ControlProblem& p, const std::vector<double>& bins) { return grape_gradient(p, bins); },
           py::arg("bins"), "Exact gradient of 1 - F with respect to the bin amplitudes.")
      .def("grape",
           [](const ControlProblem& p, int n_bins, std::uint64_t seed) {
             GrapeConfig config;
             config.n_bins = n_bins;
             const auto r = grape_optimize(p, config, seed);
             py::dict d;
             d["best_F"] = r.result.best_fidelity;
             d["bins"] = r.pulse.bins;
             d["history"] = r.result.history;
             d["n_evals"] = r.result.evaluations;
             return d;
           },
           py::arg("n_bins") = 100, py::arg("seed") = 0)
      .def("dcrab",
           [](const ControlProblem& p, int n_bins, std::uint64_t seed) {
             DcrabConfig config;
             config.n_bins = n_bins;
             const auto r = dcrab_optimize(p, config, seed);
             py::dict d;
             d["best_F"] = r.result.best_fidelity;
             d["params"] = r.result.best_params;
             d["super_iteration_best"] = r.super_iteration_best;
             d["n_evals"] = r.result.evaluations;
             return d;
           },
           py::arg("n_bins") = 100, py::arg("seed") = 0);

  m.def("config_text", [](const Settings& s) { return config_text(make_config(s)); }, py::arg("settings") = Settings{},
        "Canonical `key = value` text of the defaults with `settings` applied.");

  m.def("run_campaign",
        [](const Settings& s, const std::filesystem::path& out_dir) {
          const auto config = make_config(s);
          CampaignOutcome out;
          {
            py::gil_scoped_release release;
            out = run_campaign(config, out_dir);
          }
          py::list records;
          for (const auto& r : out.records) records.append(record_dict(r));
          py::dict d;
          d["records"] = records;
          d["failed"] = out.failed;
          d["resumed"] = out.resumed;
          d["csv_path"] = out.csv_path;
          d["manifest_path"] = out.manifest_path;
          return d;
        },
        py::arg("settings"), py::arg("out_dir"),
        "Run a campaign; settings use the `section.key` names of the INI config.");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
