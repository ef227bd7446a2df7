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

// Trend-level checks on the qualitative results for the default trial draws.
// Each takes seconds to a couple of minutes on one core.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "tfim/harness/config.hpp"
#include "tfim/harness/harness.hpp"
#include "tfim/optimizers/grape.hpp"
#include "tfim/optimizers/search.hpp"

using namespace tfim;

namespace {

constexpr std::uint64_t kMaster = 20260101;

const TrialSet& trials4() {
  static const TrialSet t = draw_couplings(kMaster, 10, 4);
  return t;
}

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

// Share of the variance of F explained by grouping the points on one
// coordinate: 1 - (within-group sum of squares) / (total sum of squares).
double explained(const std::vector<int>& group, const std::vector<double>& f) {
  std::map<int, std::pair<double, int>> sums;
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sums[group[i]].first += f[i];
    sums[group[i]].second += 1;
    mean += f[i] / f.size();
  }
  double within = 0.0, total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& [s, n] = sums[group[i]];
    within += std::pow(f[i] - s / n, 2);
    total += std::pow(f[i] - mean, 2);
  }
  return 1.0 - within / total;
}

}  // namespace

TEST(Trends, GaussianLandscapeIsAmplitudeDominatedAtShortTime) {
  const ControlProblem p = make_trial_problem(trials4(), 1, 0.1, ModelSettings{});
  const SearchBox box = gaussian_box(101, 101);
  const LandscapeGrid g = landscape_sweep(p, 1, "gauss", box, ExperimentConfig{}.propagation);
  std::vector<int> by_a, by_omega;
  for (int i = 0; i < 101; ++i) {
    for (int j = 0; j < 101; ++j) {
      by_a.push_back(i);
      by_omega.push_back(j);
    }
  }
  const double from_a = explained(by_a, g.values);
  const double from_omega = explained(by_omega, g.values);
  RecordProperty("explained_by_a", std::to_string(from_a));
  RecordProperty("explained_by_omega", std::to_string(from_omega));
  EXPECT_GT(from_a, 0.5);
  EXPECT_GT(from_a, 3.0 * from_omega);
}

TEST(Trends, PolynomialRidgeHasSlopeMinusOneAtShortTime) {
  const ControlProblem p = make_trial_problem(trials4(), 1, 0.1, ModelSettings{});
  const SearchBox box = polynomial_box(2, 101);
  const LandscapeGrid g = landscape_sweep(p, 1, "poly2", box, ExperimentConfig{}.propagation);
  const auto l = axis(-30, 30, 101);
  // Direction u = cos(theta) x + sin(theta) y along which F varies most: F is
  // nearly a function of u alone, so the ridge runs perpendicular to it.
  double best_unexplained = 2.0, best_theta = 0.0;
  for (int k = 0; k < 360; ++k) {
    const double theta = std::numbers::pi * k / 360;
    std::vector<int> bucket;
    for (int i = 0; i < 101; ++i) {
      for (int j = 0; j < 101; ++j) {
        const double u = (std::cos(theta) * l[i] + std::sin(theta) * l[j]) / (60.0 * std::numbers::sqrt2);
        bucket.push_back(static_cast<int>(std::floor(u * 101)));
      }
    }
    const double unexplained = 1.0 - explained(bucket, g.values);
    if (unexplained < best_unexplained) {
      best_unexplained = unexplained;
      best_theta = theta;
    }
  }
  const double slope = -std::cos(best_theta) / std::sin(best_theta);
  RecordProperty("ridge_slope", std::to_string(slope));
  EXPECT_LT(best_unexplained, 0.05);
  EXPECT_NEAR(slope, -1.0, 0.05);
}

TEST(Trends, PolynomialRandomSearchMatchesGrid) {
  ExperimentConfig grid;
  grid.scheme.poly_resolution = 61;
  ExperimentConfig random = grid;
  random.scheme.poly2_random = true;
  std::vector<double> deltas;
  for (int r = 1; r <= 10; ++r) {
    const ControlProblem p = make_trial_problem(trials4(), r, 1.0, ModelSettings{});
    const double a = run_scheme(p, "poly2", grid, cell_seed(kMaster, r, 0, "poly2")).best_fidelity;
    const double b = run_scheme(p, "poly2", random, cell_seed(kMaster, r, 0, "poly2")).best_fidelity;
    deltas.push_back(std::abs(a - b));
  }
  RecordProperty("median_abs_delta", std::to_string(median(deltas)));
  EXPECT_LE(median(deltas), 0.05);
}

TEST(Trends, GrapeMatchesGaussianSearchAtUnitTime) {
  const ControlProblem p = make_trial_problem(trials4(), 1, 1.0, ModelSettings{});
  const ExperimentConfig c;
  const double gauss = run_scheme(p, "gauss", c, cell_seed(kMaster, 1, 0, "gauss")).best_fidelity;
  const double grape = run_scheme(p, "grape100", c, cell_seed(kMaster, 1, 0, "grape100")).best_fidelity;
  RecordProperty("gauss", std::to_string(gauss));
  RecordProperty("grape100", std::to_string(grape));
  EXPECT_NEAR(grape, gauss, 0.05);
}

TEST(Trends, TenAndHundredBinGrapeReachSimilarFidelity) {
  const ControlProblem p = make_trial_problem(trials4(), 1, 1.0, ModelSettings{});
  GrapeConfig c;
  c.n_bins = 10;
  const GrapeResult coarse = grape_optimize(p, c, cell_seed(kMaster, 1, 0, "grape10"));
  c.n_bins = 100;
  const GrapeResult fine = grape_optimize(p, c, cell_seed(kMaster, 1, 0, "grape100"));
  RecordProperty("grape10", std::to_string(coarse.result.best_fidelity));
  RecordProperty("grape100", std::to_string(fine.result.best_fidelity));
  EXPECT_LE(std::abs(coarse.result.best_fidelity - fine.result.best_fidelity), 0.02);

  double shape_difference = 0.0;
  for (int j = 0; j < 100; ++j) {
    shape_difference = std::max(shape_difference, std::abs(fine.pulse.bins[j] - coarse.pulse.bins[j / 10]));
  }
  EXPECT_GT(shape_difference, 0.1);
}
