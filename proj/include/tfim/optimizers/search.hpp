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
#include <functional>
#include <span>
#include <vector>

#include "tfim/dynamics.hpp"
#include "tfim/optimizers/common.hpp"

namespace tfim {

/// Maps a parameter vector to a pulse of fixed duration.
using PulseFactory = std::function<Pulse(std::span<const double>)>;

/// Parameters (a, omega).
PulseFactory gaussian_family(double t_f);
/// Parameters lambda_1..lambda_N; any N >= 1.
PulseFactory polynomial_family(double t_f);

/// a in [-50, 50], omega in [0.02, 4].
SearchBox gaussian_box(int resolution_a, int resolution_omega);
/// Every lambda_k in [-30, 30].
SearchBox polynomial_box(int n_lambda, int resolution);

struct EvaluationStats {
  long evaluations = 0;
  long unconverged = 0;
};

/// Fidelity of the pulse built from the parameters. The objective keeps a
/// reference to `problem`; `stats`, when given, must outlive it too.
Objective fidelity_objective(const ControlProblem& problem, PulseFactory factory, PropagationSettings settings,
                             EvaluationStats* stats = nullptr);

struct GridSearchResult {
  OptimizationResult best;
  std::vector<int> shape;
  std::vector<double> values;  // row-major, last axis fastest
};

/// Maximizes `fidelity` over the Cartesian grid of a 1- or 2-axis box. Ties
/// go to the lowest linear index.
GridSearchResult grid_search(const Objective& fidelity, const SearchBox& box);

/// Best of n_guesses i.i.d. uniform points in the box; first wins ties.
OptimizationResult random_search(const Objective& fidelity, const SearchBox& box, int n_guesses, std::uint64_t seed);

}  // namespace tfim
