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

// tfimctl: command-line front end for the tfim_control library.
//
// Exit codes: 0 success, 1 usage/config/runtime error, 2 campaign finished
// with failed cells.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "tfim/dynamics.hpp"
#include "tfim/harness/config.hpp"
#include "tfim/harness/harness.hpp"
#include "tfim/io.hpp"
#include "tfim/optimizers/dcrab.hpp"
#include "tfim/optimizers/grape.hpp"
#include "tfim/pulses.hpp"
#include "tfim/random.hpp"
#include "tfim/spin_model.hpp"

#ifndef TFIM_VERSION
#define TFIM_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace tfim;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
};

void load_ini(ExperimentConfig& config, const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
    for (const auto& [key, value] : body) apply_setting(config, section + "." + key, value.data());
  }
}

ExperimentConfig resolve_config(const CommonOptions& opts) {
  ExperimentConfig config;
  if (!opts.config_path.empty()) load_ini(config, opts.config_path);
  for (const auto& item : opts.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + item + "'");
    apply_setting(config, item.substr(0, eq), item.substr(eq + 1));
  }
  config.validate();
  return config;
}

std::string hex32(std::uint64_t x) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08llx", static_cast<unsigned long long>(x & 0xffffffffULL));
  return buf;
}

fs::path output_dir(const std::string& out, const std::string& command, std::uint64_t hash) {
  fs::path dir;
  if (!out.empty()) {
    dir = out;
  } else {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", std::gmtime(&now));
    dir = fs::path("runs") / (command + "-" + stamp + "-" + hex32(hash));
  }
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& command, const nlohmann::ordered_json& details) {
  nlohmann::ordered_json m;
  m["schema"] = "tfim.manifest.v1";
  m["version"] = TFIM_VERSION;
  m["command"] = command;
  for (const auto& [k, v] : details.items()) m[k] = v;
  std::ofstream(dir / "manifest.json") << m.dump(2) << '\n';
}

nlohmann::ordered_json config_json(const ExperimentConfig& config) {
  nlohmann::ordered_json echo;
  for (const auto& [k, v] : describe(config)) echo[k] = v;
  return echo;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("-c,--config", opts.config_path, "INI config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set grape.starts=3");
  cmd->add_option("-o,--out", opts.out, "output directory (default runs/<command>-<time>-<hash>)");
}

// ---- spectrum ---------------------------------------------------------------

struct SpectrumOptions {
  int spins = 4;
  std::uint64_t seed = 20260101;
  int trial = 1;
  std::string breaker = "single";
  double beta = 1e-3;
  double tol = 1e-9;
  std::string out;
};

int cmd_spectrum(const SpectrumOptions& o, const std::vector<std::string>& argv) {
  const TrialSet trials = draw_couplings(o.seed, o.trial, o.spins);
  SpinChainSpec spec = trials.spec(o.trial, ModelSettings{o.spins, o.beta,
                                                          o.breaker == "sum" ? Breaker::FullSumZ : Breaker::SingleSiteZ,
                                                          IndexBase::OneBased});
  const Spectrum spectrum = diagonalize(build_terms(spec).static_part());
  const DegeneracyReport report = degeneracy_report(spectrum, o.tol);
  const auto gaps = gap_profile(spectrum);

  std::string key = std::to_string(o.spins) + o.breaker + format_exact(o.beta) + std::to_string(o.seed);
  const fs::path dir = output_dir(o.out, "spectrum", hash_string(key));
  std::ofstream csv(dir / "spectrum.csv");
  csv << "# schema=tfim.spectrum.v1\nk,E_k,gap_k\n";
  for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
    csv << k + 1 << ',' << format_number(spectrum.eigenvalues(k)) << ','
        << (k + 1 < spectrum.eigenvalues.size() ? format_number(gaps[k]) : "") << '\n';
  }

  std::cout << "couplings = " << join_numbers(spec.couplings, ' ') << '\n'
            << "pair_count = " << report.pair_count << '\n'
            << "min_gap = " << format_number(report.min_gap) << '\n'
            << "min_nonzero_gap = " << format_number(report.min_nonzero_gap) << '\n'
            << "odd_gaps = " << join_numbers(odd_level_gaps(gaps), ' ') << '\n'
            << "output = " << dir.string() << '\n';

  write_manifest(dir, "spectrum",
                 {{"args", argv},
                  {"spins", o.spins},
                  {"seed", o.seed},
                  {"trial", o.trial},
                  {"breaker", o.breaker},
                  {"beta", o.beta},
                  {"couplings", spec.couplings},
                  {"report",
                   {{"pair_count", report.pair_count},
                    {"min_gap", report.min_gap},
                    {"min_nonzero_gap", report.min_nonzero_gap}}}});
  return 0;
}

// ---- evolve -----------------------------------------------------------------

struct EvolveOptions {
  int spins = 4;
  std::uint64_t seed = 20260101;
  int trial = 1;
  double tf = 1.0;
  std::string pulse = "zero";
  std::vector<double> params;
  int substeps = 128;
  double tol = 1e-10;
  int max_substeps = 65536;
  std::string method = "cf4";
  int trajectory = 0;
  std::string out;
};

Pulse build_pulse(const std::string& family, const std::vector<double>& params, double tf) {
  if (family == "zero") return zero_pulse(tf);
  if (family == "gauss") {
    if (params.size() != 2) throw ConfigError("gauss pulse takes --params a omega");
    return GaussianPulse{params[0], params[1], tf};
  }
  if (family == "poly") {
    if (params.empty()) throw ConfigError("poly pulse takes --params lambda_1 ... lambda_N");
    return solve_polynomial(params, tf);
  }
  if (family == "bins") {
    if (params.empty()) throw ConfigError("bins pulse takes --params u_1 ... u_M");
    return PiecewiseConstantPulse{params, tf};
  }
  throw ConfigError("unknown pulse family '" + family + "'");
}

int cmd_evolve(const EvolveOptions& o, const std::vector<std::string>& argv) {
  const TrialSet trials = draw_couplings(o.seed, o.trial, o.spins);
  const ModelSettings model{o.spins, 1e-3, Breaker::SingleSiteZ, IndexBase::OneBased};
  const ControlProblem problem = make_trial_problem(trials, o.trial, o.tf, model);
  const Pulse pulse = build_pulse(o.pulse, o.params, o.tf);

  PropagationSettings settings;
  settings.substeps = o.substeps;
  settings.convergence_tol = o.tol;
  settings.max_substeps = o.max_substeps;
  settings.method = o.method == "midpoint" ? Integrator::Midpoint : Integrator::CommutatorFree4;
  settings.trajectory_samples = o.trajectory;
  const EvolutionResult r = evolve_problem(problem, pulse, settings);
  const double f_s = subspace_fidelity(problem.states, [&](const StateVector& psi) {
    return evolve_fixed(problem.hamiltonian, psi, pulse, r.substeps, settings.method);
  });

  std::string key = std::to_string(o.spins) + std::to_string(o.seed) + format_exact(o.tf) + o.pulse +
                    join_numbers(o.params, ';');
  const fs::path dir = output_dir(o.out, "evolve", hash_string(key));
  {
    std::ofstream csv(dir / "pulse.csv");
    write_pulse_csv(csv, pulse);
  }
  if (o.trajectory > 0) {
    std::ofstream csv(dir / "trajectory.csv");
    csv << "# schema=tfim.trajectory.v1\nt,F,norm\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      csv << format_number(r.times[k]) << ',' << format_number(state_fidelity(problem.states.psi_f, r.states[k]))
          << ',' << format_number(r.states[k].norm()) << '\n';
    }
  }

  std::printf("F = %.12f\nF_S = %.12f\nsubsteps = %d\nconverged = %s\n", r.fidelity, f_s, r.substeps,
              r.converged ? "true" : "false");
  if (!r.converged) std::printf("warning: substep cap reached before the fidelity converged\n");
  std::cout << "output = " << dir.string() << '\n';

  write_manifest(dir, "evolve",
                 {{"args", argv},
                  {"spins", o.spins},
                  {"seed", o.seed},
                  {"trial", o.trial},
                  {"tf", o.tf},
                  {"pulse", o.pulse},
                  {"params", o.params},
                  {"fidelity", r.fidelity},
                  {"subspace_fidelity", f_s},
                  {"substeps", r.substeps},
                  {"converged", r.converged}});
  return 0;
}

// ---- sweep / optimize -------------------------------------------------------

struct CellOptions {
  CommonOptions common;
  std::string scheme = "gauss";
  int trial = 1;
  double tf = 0.1;
};

int cmd_sweep(const CellOptions& o, const std::vector<std::string>& argv) {
  const ExperimentConfig config = resolve_config(o.common);
  const TrialSet trials = draw_couplings(config.master_seed, o.trial, config.model.n_spins);
  const ControlProblem problem = make_trial_problem(trials, o.trial, o.tf, config.model);
  SearchBox box;
  if (o.scheme == "gauss") {
    box = gaussian_box(config.scheme.gauss_resolution_a, config.scheme.gauss_resolution_omega);
  } else if (o.scheme == "poly2") {
    box = polynomial_box(2, config.scheme.poly_resolution);
  } else {
    throw ConfigError("sweep supports --scheme gauss or poly2");
  }
  const LandscapeGrid grid = landscape_sweep(problem, o.trial, o.scheme, box, config.propagation);

  const fs::path dir =
      output_dir(o.common.out, "sweep", hash_string(config_text(config) + o.scheme + std::to_string(o.trial) +
                                                    format_exact(o.tf)));
  std::ofstream csv(dir / "landscape.csv");
  write_landscape_csv(csv, grid);
  std::cout << "best_F = " << format_number(grid.best.best_fidelity) << " at " << join_numbers(grid.best.best_params, ' ')
            << "\noutput = " << dir.string() << '\n';
  write_manifest(dir, "sweep",
                 {{"args", argv},
                  {"config", config_json(config)},
                  {"scheme", o.scheme},
                  {"trial", o.trial},
                  {"tf", o.tf},
                  {"trial_set_checksum", trials.checksum()}});
  return 0;
}

int cmd_optimize(const CellOptions& o, const std::vector<std::string>& argv) {
  const ExperimentConfig config = resolve_config(o.common);
  const TrialSet trials = draw_couplings(config.master_seed, o.trial, config.model.n_spins);
  const ControlProblem problem = make_trial_problem(trials, o.trial, o.tf, config.model);
  const std::uint64_t seed = cell_seed(config.master_seed, o.trial, 0, o.scheme);
  const SchemeOutcome outcome = run_scheme(problem, o.scheme, config, seed);

  CampaignRecord rec;
  rec.trial = o.trial;
  rec.t_f = o.tf;
  rec.scheme = o.scheme;
  rec.best_fidelity = outcome.best_fidelity;
  rec.evaluations = outcome.evaluations;
  rec.status = outcome.unconverged ? "unconverged" : "ok";
  rec.checksum = trials.checksum();
  rec.params = outcome.params;

  const fs::path dir =
      output_dir(o.common.out, "optimize", hash_string(config_text(config) + o.scheme + std::to_string(o.trial) +
                                                       format_exact(o.tf)));
  {
    std::ofstream csv(dir / "result.csv");
    csv << "# schema=tfim.campaign.v1\n" << kCampaignHeader << '\n' << format_record(rec) << '\n';
  }
  // Rebuild the optimized pulse for export.
  std::optional<Pulse> pulse;
  if (o.scheme == "gauss") {
    pulse = GaussianPulse{rec.params[0], rec.params[1], o.tf};
  } else if (o.scheme == "poly2" || o.scheme == "poly4") {
    pulse = solve_polynomial(rec.params, o.tf);
  } else if (o.scheme.rfind("grape", 0) == 0) {
    pulse = PiecewiseConstantPulse{rec.params, o.tf};
  } else {
    DressedPulse d;
    d.t_f = o.tf;
    d.envelope = config.scheme.dcrab.envelope;
    for (std::size_t k = 0; k + 2 < rec.params.size(); k += 3) {
      d.terms.push_back(DressingTerm{rec.params[k], rec.params[k + 1], rec.params[k + 2]});
    }
    pulse = d;
  }
  {
    std::ofstream csv(dir / "pulse.csv");
    write_pulse_csv(csv, *pulse);
  }
  std::cout << "best_F = " << format_number(rec.best_fidelity) << "\nn_evals = " << rec.evaluations
            << "\noutput = " << dir.string() << '\n';
  write_manifest(dir, "optimize",
                 {{"args", argv},
                  {"config", config_json(config)},
                  {"scheme", o.scheme},
                  {"trial", o.trial},
                  {"tf", o.tf},
                  {"seed", seed}});
  return 0;
}

// ---- campaign / compare -----------------------------------------------------

int cmd_campaign(const CommonOptions& o) {
  const ExperimentConfig config = resolve_config(o);
  const fs::path dir = output_dir(o.out, "campaign", config_hash(config));
  const CampaignOutcome outcome = run_campaign(config, dir);
  std::cout << "cells = " << outcome.records.size() << "\nresumed = " << outcome.resumed
            << "\nfailed = " << outcome.failed << "\noutput = " << dir.string() << '\n';
  return outcome.failed > 0 ? 2 : 0;
}

struct CompareOptions {
  std::string input;
  std::string reference = "dcrab100";
  std::string out;
};

int cmd_compare(const CompareOptions& o) {
  const auto records = read_campaign_csv(o.input);
  const ComparisonRecord comparison = compare_schemes(records, o.reference);
  const fs::path dir = output_dir(o.out, "compare", hash_string(o.input + o.reference));
  {
    std::ofstream csv(dir / "comparison.csv");
    write_comparison_csv(csv, comparison);
  }
  {
    std::ofstream csv(dir / "comparison_summary.csv");
    write_comparison_summary_csv(csv, comparison);
  }
  for (const auto& s : comparison.summary) {
    std::cout << "tf=" << format_number(s.t_f) << " scheme=" << s.scheme << " n=" << s.n
              << " median_dF=" << format_number(s.median_delta)
              << " median_abs_dF=" << format_number(s.median_abs_delta) << '\n';
  }
  std::cout << "output = " << dir.string() << '\n';
  write_manifest(dir, "compare", {{"input", o.input}, {"reference", o.reference}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Control of a random-coupling transverse Ising chain"};
  app.set_version_flag("--version", TFIM_VERSION);
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  SpectrumOptions spec_opts;
  auto* spectrum = app.add_subcommand("spectrum", "static spectrum and degeneracy report");
  spectrum->add_option("--spins", spec_opts.spins, "number of spins")->check(CLI::Range(2, 20));
  spectrum->add_option("--seed", spec_opts.seed, "master seed of the coupling draw");
  spectrum->add_option("--trial", spec_opts.trial, "trial number (1-based)")->check(CLI::PositiveNumber);
  spectrum->add_option("--breaker", spec_opts.breaker, "degeneracy breaker")->check(CLI::IsMember({"single", "sum"}));
  spectrum->add_option("--beta", spec_opts.beta, "breaker strength");
  spectrum->add_option("--tol", spec_opts.tol, "degeneracy tolerance")->check(CLI::PositiveNumber);
  spectrum->add_option("-o,--out", spec_opts.out, "output directory");

  EvolveOptions ev;
  auto* evolve = app.add_subcommand("evolve", "propagate one pulse and report F and F_S");
  evolve->add_option("--spins", ev.spins, "number of spins")->check(CLI::Range(4, 20));
  evolve->add_option("--seed", ev.seed, "master seed of the coupling draw");
  evolve->add_option("--trial", ev.trial, "trial number (1-based)")->check(CLI::PositiveNumber);
  evolve->add_option("--tf", ev.tf, "final time")->check(CLI::PositiveNumber);
  evolve->add_option("--pulse", ev.pulse, "pulse family")->check(CLI::IsMember({"zero", "gauss", "poly", "bins"}));
  evolve->add_option("--params", ev.params, "pulse parameters");
  evolve->add_option("--substeps", ev.substeps, "initial substeps")->check(CLI::PositiveNumber);
  evolve->add_option("--tol", ev.tol, "fidelity convergence tolerance")->check(CLI::PositiveNumber);
  evolve->add_option("--max-substeps", ev.max_substeps, "substep cap")->check(CLI::PositiveNumber);
  evolve->add_option("--method", ev.method, "integrator")->check(CLI::IsMember({"cf4", "midpoint"}));
  evolve->add_option("--trajectory", ev.trajectory, "number of trajectory samples to write");
  evolve->add_option("-o,--out", ev.out, "output directory");

  CellOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "2D fidelity landscape");
  add_common(sweep, sweep_opts.common);
  sweep->add_option("--scheme", sweep_opts.scheme, "gauss or poly2")->check(CLI::IsMember({"gauss", "poly2"}));
  sweep->add_option("--trial", sweep_opts.trial, "trial number (1-based)")->check(CLI::PositiveNumber);
  sweep->add_option("--tf", sweep_opts.tf, "final time")->check(CLI::PositiveNumber);

  CellOptions opt_opts;
  auto* optimize = app.add_subcommand("optimize", "run one scheme on one trial");
  add_common(optimize, opt_opts.common);
  optimize->add_option("--scheme", opt_opts.scheme, "scheme id")->check(CLI::IsMember(known_schemes()));
  optimize->add_option("--trial", opt_opts.trial, "trial number (1-based)")->check(CLI::PositiveNumber);
  optimize->add_option("--tf", opt_opts.tf, "final time")->check(CLI::PositiveNumber);

  CommonOptions camp_opts;
  auto* campaign = app.add_subcommand("campaign", "all trials x times x schemes");
  add_common(campaign, camp_opts);

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "delta F against a reference scheme");
  compare->add_option("-i,--input", cmp.input, "campaign.csv")->required()->check(CLI::ExistingFile);
  compare->add_option("--reference", cmp.reference, "reference scheme id");
  compare->add_option("-o,--out", cmp.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*spectrum) return cmd_spectrum(spec_opts, args);
    if (*evolve) return cmd_evolve(ev, args);
    if (*sweep) return cmd_sweep(sweep_opts, args);
    if (*optimize) return cmd_optimize(opt_opts, args);
    if (*campaign) return cmd_campaign(camp_opts);
    if (*compare) return cmd_compare(cmp);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
