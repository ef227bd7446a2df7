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
#include <vector>

#include "tfim/dynamics.hpp"
#include "tfim/optimizers/common.hpp"
#include "tfim/optimizers/nelder_mead.hpp"

namespace tfim {

struct DcrabConfig {
  int super_iterations = 8;
  int components = 3;  // random Fourier frequencies per super-iteration
  int principal_max = 10;
  NelderMeadConfig nelder_mead{};
  int restarts = 4;
  /// Evaluate the dressed pulse sampled into this many bins (exact per-bin
  /// propagation); 0 integrates the smooth pulse instead.
  int n_bins = 100;
  bool envelope = true;
  PropagationSettings propagation{};  // smooth evaluation only

  void validate() const;
};

struct DcrabResult {
  /// best_params holds (c_cos, c_sin, frequency) per dressing term.
  OptimizationResult result;
  DressedPulse pulse;
  /// Bins actually scored when n_bins > 0, empty otherwise.
  std::vector<double> bins;
  /// Best fidelity after each super-iteration of the winning restart.
  std::vector<double> super_iteration_best;
};

/// Fidelity of a dressed pulse under the scoring rule of `config`.
double dcrab_fidelity(const ControlProblem& problem, const DressedPulse& pulse, const DcrabConfig& config);

/// Starting from the zero pulse, each super-iteration draws a fresh random
/// frequency set, freezes the current pulse as the base and optimizes the
/// 2 * components new coefficients with Nelder-Mead from zero. The update is
/// kept only if the fidelity does not drop. Restart r uses
/// derive_seed(seed, {r}); the best restart wins (earliest on ties).
DcrabResult dcrab_optimize(const ControlProblem& problem, const DcrabConfig& config, std::uint64_t seed);

}  // namespace tfim
