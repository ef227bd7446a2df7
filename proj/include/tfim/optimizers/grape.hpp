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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tfim/dynamics.hpp"
#include "tfim/optimizers/common.hpp"

namespace tfim {

struct GrapeConfig {
  int n_bins = 100;
  int max_iterations = 500;
  double initial_step = 0.1;
  double backtrack = 0.5;
  double armijo = 1e-4;
  double cost_target = 1e-4;      // stop once C = 1 - F drops below this
  double stagnation_tol = 1e-10;  // stop once accepted steps lower C by less
  int stagnation_window = 10;     // ... this many times in a row
  int starts = 5;
  double init_low = -5.0;
  double init_high = 5.0;

  void validate() const;
};

/// C = 1 - |<psi_f| U_N ... U_1 |psi_i>|^2 with U_j = exp[-i dt (D + u_j H1)],
/// dt = t_f / n_bins.
double grape_cost(const ControlProblem& problem, std::span<const double> bins);

/// dC/du_j, exact to rounding.
///
/// One forward pass propagates psi_j = U_j psi_{j-1} together with
/// w_j = (dU_j/du_j) psi_{j-1}; one backward pass carries
/// chi_j = U_{j+1}^+ ... U_N^+ psi_f. With A = <psi_f|psi_N>,
/// dA/du_j = <chi_j|w_j> and dC/du_j = -2 Re[conj(A) dA/du_j].
std::vector<double> grape_gradient(const ControlProblem& problem, std::span<const double> bins);

/// The first-order-in-dt form of the same derivative:
///   dC/du_j ~ -2 dt Im[<chi_j|H1|psi_j> <psi_N|psi_f>],
/// with psi_j the state after bin j. Agrees with grape_gradient as dt -> 0.
std::vector<double> grape_gradient_first_order(const ControlProblem& problem, std::span<const double> bins);

struct GrapeResult {
  OptimizationResult result;  // best_params are the bin values
  PiecewiseConstantPulse pulse;
  int iterations = 0;  // accepted steps of the winning start
};

/// Gradient descent on C from one initial bin vector, with a backtracking
/// Armijo line search. Each iteration starts its search at twice the last
/// accepted step, so the step length adapts to the gradient scale.
GrapeResult grape_descend(const ControlProblem& problem, const GrapeConfig& config, std::vector<double> initial_bins);

/// `config.starts` descents from uniform random bins; the best fidelity wins
/// (earliest start on ties). Start s is seeded with derive_seed(seed, {s}).
GrapeResult grape_optimize(const ControlProblem& problem, const GrapeConfig& config, std::uint64_t seed);

}  // namespace tfim
