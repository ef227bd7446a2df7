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

#include "tfim/optimizers/dcrab.hpp"

#include <stdexcept>

#include "tfim/random.hpp"

namespace tfim {

void DcrabConfig::validate() const {
  if (super_iterations < 1) throw std::invalid_argument("dcrab: super_iterations must be >= 1");
  if (components < 1) throw std::invalid_argument("dcrab: components must be >= 1");
  if (principal_max < 1) throw std::invalid_argument("dcrab: principal_max must be >= 1");
  if (restarts < 1) throw std::invalid_argument("dcrab: restarts must be >= 1");
  if (n_bins < 0) throw std::invalid_argument("dcrab: n_bins must be >= 0");
  nelder_mead.validate();
}

namespace {

struct Scored {
  double fidelity = 0.0;
  bool converged = true;
};

Scored score(const ControlProblem& problem, const DressedPulse& pulse, const DcrabConfig& config) {
  if (config.n_bins > 0) {
    const PiecewiseConstantPulse bins = sample_to_bins(Pulse(pulse), config.n_bins);
    const StateVector out = evolve_bins(problem.hamiltonian, problem.states.psi_i, bins.bins, bins.bin_width());
    return {state_fidelity(problem.states.psi_f, out), true};
  }
  const EvolutionResult r = evolve_problem(problem, Pulse(pulse), config.propagation);
  return {r.fidelity, r.converged};
}

struct RestartOutcome {
  DressedPulse pulse;
  std::vector<double> bins;
  double fidelity = 0.0;
  long evaluations = 0;
  std::vector<double> trace;
};

double binned_fidelity(const ControlProblem& problem, const std::vector<double>& bins) {
  const StateVector out =
      evolve_bins(problem.hamiltonian, problem.states.psi_i, bins, problem.t_f / static_cast<double>(bins.size()));
  return state_fidelity(problem.states.psi_f, out);
}

RestartOutcome run_restart(const ControlProblem& problem, const DcrabConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  RestartOutcome out;
  out.pulse.t_f = problem.t_f;
  out.pulse.envelope = config.envelope;
  const bool binned = config.n_bins > 0;
  if (binned) out.bins.assign(config.n_bins, 0.0);
  out.fidelity = binned ? binned_fidelity(problem, out.bins) : score(problem, out.pulse, config).fidelity;
  out.evaluations = 1;

  for (int j = 0; j < config.super_iterations; ++j) {
    const std::vector<double> frequencies = make_random_basis(rng, config.components, problem.t_f, config.principal_max);
    DressedPulse trial = out.pulse;
    const std::size_t first = trial.terms.size();
    for (double w : frequencies) trial.terms.push_back(DressingTerm{0.0, 0.0, w});

    // In the binned case the frozen base and each new basis function are
    // sampled once; a candidate is then base + sum_k c_k f_k bin by bin.
    std::vector<std::vector<double>> basis;
    std::vector<double> bins = out.bins;
    if (binned) {
      const double width = problem.t_f / config.n_bins;
      for (double w : frequencies) {
        std::vector<double> f_cos(config.n_bins), f_sin(config.n_bins);
        for (int m = 0; m < config.n_bins; ++m) {
          DressedPulse single{nullptr, {DressingTerm{1.0, 0.0, w}}, config.envelope, problem.t_f};
          const double t = (m + 0.5) * width;
          f_cos[m] = eval_dressed(single, t);
          single.terms[0] = DressingTerm{0.0, 1.0, w};
          f_sin[m] = eval_dressed(single, t);
        }
        basis.push_back(std::move(f_cos));
        basis.push_back(std::move(f_sin));
      }
    }

    const Objective cost = [&](std::span<const double> c) {
      for (std::size_t i = 0; i < frequencies.size(); ++i) {
        trial.terms[first + i].c_cos = c[2 * i];
        trial.terms[first + i].c_sin = c[2 * i + 1];
      }
      if (!binned) return 1.0 - score(problem, trial, config).fidelity;
      for (int m = 0; m < config.n_bins; ++m) {
        double v = out.bins[m];
        for (std::size_t k = 0; k < basis.size(); ++k) v += c[k] * basis[k][m];
        bins[m] = v;
      }
      return 1.0 - binned_fidelity(problem, bins);
    };
    const std::vector<double> zero(2 * frequencies.size(), 0.0);
    const NelderMeadResult nm = nelder_mead(cost, zero, config.nelder_mead);
    out.evaluations += nm.evaluations;

    const double candidate = 1.0 - cost(nm.x);  // leaves trial and bins at nm.x
    ++out.evaluations;
    if (candidate >= out.fidelity) {
      out.pulse = std::move(trial);
      out.bins = std::move(bins);
      out.fidelity = candidate;
    }
    out.trace.push_back(out.fidelity);
  }
  return out;
}

}  // namespace

double dcrab_fidelity(const ControlProblem& problem, const DressedPulse& pulse, const DcrabConfig& config) {
  return score(problem, pulse, config).fidelity;
}

DcrabResult dcrab_optimize(const ControlProblem& problem, const DcrabConfig& config, std::uint64_t seed) {
  config.validate();
  RestartOutcome best;
  long evaluations = 0;
  for (int r = 0; r < config.restarts; ++r) {
    RestartOutcome run = run_restart(problem, config, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    evaluations += run.evaluations;
    if (r == 0 || run.fidelity > best.fidelity) best = std::move(run);
  }

  DcrabResult out;
  out.result.best_fidelity = best.fidelity;
  out.result.evaluations = evaluations;
  out.result.seed = seed;
  out.result.converged = best.fidelity >= problem.fidelity_target;
  for (const auto& term : best.pulse.terms) {
    out.result.best_params.push_back(term.c_cos);
    out.result.best_params.push_back(term.c_sin);
    out.result.best_params.push_back(term.frequency);
  }
  for (double f : best.trace) out.result.history.push_back(1.0 - f);
  out.super_iteration_best = std::move(best.trace);
  out.bins = std::move(best.bins);
  out.pulse = std::move(best.pulse);
  return out;
}

}  // namespace tfim
