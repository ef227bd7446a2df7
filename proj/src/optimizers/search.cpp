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

#include "tfim/optimizers/search.hpp"

#include <stdexcept>

#include "tfim/random.hpp"

namespace tfim {

PulseFactory gaussian_family(double t_f) {
  return [t_f](std::span<const double> p) -> Pulse {
    if (p.size() != 2) throw std::invalid_argument("gaussian pulse takes (a, omega)");
    return GaussianPulse{p[0], p[1], t_f};
  };
}

PulseFactory polynomial_family(double t_f) {
  return [t_f](std::span<const double> p) -> Pulse { return solve_polynomial(p, t_f); };
}

SearchBox gaussian_box(int resolution_a, int resolution_omega) {
  return SearchBox{{-50.0, 0.02}, {50.0, 4.0}, {resolution_a, resolution_omega}};
}

SearchBox polynomial_box(int n_lambda, int resolution) {
  return SearchBox{std::vector<double>(n_lambda, -30.0), std::vector<double>(n_lambda, 30.0),
                   std::vector<int>(n_lambda, resolution)};
}

Objective fidelity_objective(const ControlProblem& problem, PulseFactory factory, PropagationSettings settings,
                             EvaluationStats* stats) {
  return [&problem, factory = std::move(factory), settings, stats](std::span<const double> p) {
    const EvolutionResult r = evolve_problem(problem, factory(p), settings);
    if (stats) {
      ++stats->evaluations;
      if (!r.converged) ++stats->unconverged;
    }
    return r.fidelity;
  };
}

GridSearchResult grid_search(const Objective& fidelity, const SearchBox& box) {
  box.validate(true);
  if (box.dims() > 2) throw std::invalid_argument("grid_search: landscapes are 1- or 2-dimensional");

  GridSearchResult out;
  out.shape = box.resolution;
  const int n0 = box.resolution[0];
  const int n1 = box.dims() == 2 ? box.resolution[1] : 1;
  out.values.reserve(static_cast<std::size_t>(n0) * n1);

  std::vector<double> point(box.dims());
  double best = 0.0;
  for (int i = 0; i < n0; ++i) {
    point[0] = box.axis_value(0, i);
    for (int j = 0; j < n1; ++j) {
      if (box.dims() == 2) point[1] = box.axis_value(1, j);
      const double f = fidelity(point);
      out.values.push_back(f);
      if (out.values.size() == 1 || f > best) {
        best = f;
        out.best.best_params = point;
      }
    }
  }
  out.best.best_fidelity = best;
  out.best.evaluations = static_cast<long>(out.values.size());
  out.best.converged = true;
  return out;
}

OptimizationResult random_search(const Objective& fidelity, const SearchBox& box, int n_guesses, std::uint64_t seed) {
  box.validate(false);
  if (n_guesses < 1) throw std::invalid_argument("random_search: need at least one guess");

  Rng rng(seed);
  OptimizationResult out;
  out.seed = seed;
  std::vector<double> point(box.dims());
  for (int g = 0; g < n_guesses; ++g) {
    for (std::size_t k = 0; k < box.dims(); ++k) point[k] = rng.uniform(box.lower[k], box.upper[k]);
    const double f = fidelity(point);
    if (g == 0 || f > out.best_fidelity) {
      out.best_fidelity = f;
      out.best_params = point;
    }
  }
  out.evaluations = n_guesses;
  out.converged = true;
  return out;
}

}  // namespace tfim
