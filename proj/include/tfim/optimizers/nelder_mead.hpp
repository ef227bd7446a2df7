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

#include <span>
#include <vector>

#include "tfim/optimizers/common.hpp"

namespace tfim {

struct NelderMeadConfig {
  double simplex_scale = 1.0;  // initial vertices at x0 + scale * e_i
  double x_tolerance = 1e-8;   // simplex diameter (max-norm from the best vertex)
  double f_tolerance = 1e-8;   // spread of vertex values
  int max_evaluations = 2000;

  void validate() const;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;  // false: evaluation budget exhausted
};

/// Minimizes `f` with the standard reflection / expansion / contraction /
/// shrink simplex moves (coefficients 1, 2, 1/2, 1/2).
///
/// Stops when both the value spread and the diameter fall below their
/// tolerances, or immediately when all vertex values coincide (a flat
/// simplex carries no descent direction). Deterministic in (x0, config).
NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0, const NelderMeadConfig& config = {});

}  // namespace tfim
