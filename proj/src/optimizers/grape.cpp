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

#include "tfim/optimizers/grape.hpp"

#include <cmath>
#include <stdexcept>

#include "tfim/random.hpp"

namespace tfim {

void GrapeConfig::validate() const {
  if (n_bins < 1) throw std::invalid_argument("grape: n_bins must be >= 1");
  if (max_iterations < 0) throw std::invalid_argument("grape: max_iterations must be >= 0");
  if (!(initial_step > 0.0)) throw std::invalid_argument("grape: initial step must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("grape: backtrack factor must be in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("grape: armijo constant must be in (0, 1)");
  if (stagnation_window < 1) throw std::invalid_argument("grape: stagnation window must be >= 1");
  if (starts < 1) throw std::invalid_argument("grape: need at least one start");
  if (!(init_low <= init_high)) throw std::invalid_argument("grape: init range reversed");
}

namespace {

double bin_width(const ControlProblem& problem, std::span<const double> bins) {
  if (bins.empty()) throw std::invalid_argument("grape: no bins");
  return problem.t_f / static_cast<double>(bins.size());
}

}  // namespace

double grape_cost(const ControlProblem& problem, std::span<const double> bins) {
  const double dt = bin_width(problem, bins);
  const StateVector final_state = evolve_bins(problem.hamiltonian, problem.states.psi_i, bins, dt);
  return 1.0 - state_fidelity(problem.states.psi_f, final_state);
}

std::vector<double> grape_gradient(const ControlProblem& problem, std::span<const double> bins) {
  const double dt = bin_width(problem, bins);
  const std::size_t n = bins.size();
  const auto& h = problem.hamiltonian;

  // Forward: w_j = (dU_j/du_j) psi_{j-1}, alongside psi_j = U_j psi_{j-1}.
  std::vector<StateVector> partial(n);
  StateVector psi = problem.states.psi_i;
  for (std::size_t j = 0; j < n; ++j) {
    partial[j] = StateVector::Zero(psi.size());
    h.step_with_derivative(psi, partial[j], bins[j], dt);
  }
  const Complex overlap = problem.states.psi_f.dot(psi);  // A = <psi_f|psi_N>

  // Backward: dA/du_j = <chi_j|w_j>, chi_{j-1} = U_j^+ chi_j.
  std::vector<double> gradient(n);
  StateVector chi = problem.states.psi_f;
  for (std::size_t jj = n; jj-- > 0;) {
    const Complex d_amplitude = chi.dot(partial[jj]);
    gradient[jj] = -2.0 * (std::conj(overlap) * d_amplitude).real();
    h.step(chi, 1.0, bins[jj], -dt);
  }
  return gradient;
}

std::vector<double> grape_gradient_first_order(const ControlProblem& problem, std::span<const double> bins) {
  const double dt = bin_width(problem, bins);
  const std::size_t n = bins.size();
  const auto& h = problem.hamiltonian;

  std::vector<StateVector> after(n);
  StateVector psi = problem.states.psi_i;
  for (std::size_t j = 0; j < n; ++j) {
    h.step(psi, 1.0, bins[j], dt);
    after[j] = psi;
  }
  const Complex back_overlap = psi.dot(problem.states.psi_f);  // <psi_N|psi_f>

  std::vector<double> gradient(n);
  StateVector chi = problem.states.psi_f;
  StateVector h1_psi;
  for (std::size_t jj = n; jj-- > 0;) {
    h.apply(0.0, 1.0, after[jj], h1_psi);
    gradient[jj] = -2.0 * dt * (chi.dot(h1_psi) * back_overlap).imag();
    h.step(chi, 1.0, bins[jj], -dt);
  }
  return gradient;
}

GrapeResult grape_descend(const ControlProblem& problem, const GrapeConfig& config, std::vector<double> bins) {
  config.validate();
  if (static_cast<int>(bins.size()) != config.n_bins) {
    throw std::invalid_argument("grape_descend: initial bins do not match n_bins");
  }

  GrapeResult out;
  double cost = grape_cost(problem, bins);
  long evaluations = 1;
  out.result.history.push_back(cost);

  double step = config.initial_step;
  int iteration = 0;
  int stalled = 0;
  bool reached = cost < config.cost_target;
  while (!reached && iteration < config.max_iterations) {
    const std::vector<double> gradient = grape_gradient(problem, bins);
    ++evaluations;
    double slope = 0.0;
    for (double g : gradient) slope += g * g;
    if (slope == 0.0) break;

    std::vector<double> trial(bins.size());
    double trial_cost = cost;
    bool accepted = false;
    for (double alpha = step; alpha > 1e-300; alpha *= config.backtrack) {
      for (std::size_t j = 0; j < bins.size(); ++j) trial[j] = bins[j] - alpha * gradient[j];
      trial_cost = grape_cost(problem, trial);
      ++evaluations;
      if (trial_cost <= cost - config.armijo * alpha * slope) {
        accepted = true;
        step = 2.0 * alpha;
        break;
      }
      // Past this point further halving cannot change the cost in double precision.
      if (alpha * std::sqrt(slope) < 1e-15) break;
    }
    if (!accepted) break;

    const double decrease = cost - trial_cost;
    bins.swap(trial);
    cost = trial_cost;
    ++iteration;
    out.result.history.push_back(cost);
    reached = cost < config.cost_target;
    // A small first step is not stagnation: near F = 0 the gradient is tiny
    // until the step length has grown.
    stalled = decrease < config.stagnation_tol ? stalled + 1 : 0;
    if (stalled >= config.stagnation_window) break;
  }

  out.iterations = iteration;
  out.result.best_params = bins;
  out.result.best_fidelity = 1.0 - cost;
  out.result.evaluations = evaluations;
  out.result.converged = reached;
  out.pulse = PiecewiseConstantPulse{std::move(bins), problem.t_f};
  return out;
}

GrapeResult grape_optimize(const ControlProblem& problem, const GrapeConfig& config, std::uint64_t seed) {
  config.validate();
  GrapeResult best;
  long evaluations = 0;
  bool have_best = false;
  for (int s = 0; s < config.starts; ++s) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(s)}));
    std::vector<double> init(config.n_bins);
    for (double& u : init) u = rng.uniform(config.init_low, config.init_high);
    GrapeResult run = grape_descend(problem, config, std::move(init));
    evaluations += run.result.evaluations;
    if (!have_best || run.result.best_fidelity > best.result.best_fidelity) {
      best = std::move(run);
      have_best = true;
    }
    if (best.result.converged) break;
  }
  best.result.evaluations = evaluations;
  best.result.seed = seed;
  return best;
}

}  // namespace tfim
