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

namespace tfim {

/// Scalar objective over a real parameter vector.
using Objective = std::function<double(std::span<const double>)>;

struct OptimizationResult {
  std::vector<double> best_params;
  double best_fidelity = 0.0;
  long evaluations = 0;
  std::vector<double> history;  // cost (1 - F) after each accepted step
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Axis-aligned parameter box. `resolution` is only used by grid searches.
struct SearchBox {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> resolution;

  std::size_t dims() const { return lower.size(); }
  void validate(bool need_resolution) const;
  /// Grid coordinate i along `axis`; a single-point axis sits at `lower`.
  double axis_value(std::size_t axis, int i) const;
};

/// Central differences, one coordinate at a time.
std::vector<double> finite_difference_gradient(const Objective& f, std::span<const double> x, double h);

}  // namespace tfim
