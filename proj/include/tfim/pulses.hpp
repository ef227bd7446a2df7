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

#include <iosfwd>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "tfim/random.hpp"

namespace tfim {

/// g(t) = a exp[-32 (t - t_f/2)^2 / t_f^2] sin^2(2 pi t omega / t_f).
///
/// Vanishes exactly at t = 0 but only up to |a| e^{-8} at t = t_f.
struct GaussianPulse {
  double a = 0.0;
  double omega = 1.0;
  double t_f = 1.0;
};

/// g(t) = sum_{j=1}^{J} a_j t^j, J = N_lambda + 5, with g, g', g'' zero at both
/// ends and g(k t_f / (N_lambda + 1)) = lambda_k. Build with solve_polynomial.
struct PolynomialPulse {
  std::vector<double> lambdas;
  double t_f = 1.0;
  std::vector<double> scaled;        // b_j in tau = t / t_f, index j - 1
  std::vector<double> coefficients;  // a_j = b_j / t_f^j, index j - 1

  int degree() const { return static_cast<int>(scaled.size()); }
};

struct PiecewiseConstantPulse {
  std::vector<double> bins;
  double t_f = 1.0;

  int n_bins() const { return static_cast<int>(bins.size()); }
  double bin_width() const { return t_f / static_cast<double>(bins.size()); }
  /// Bin holding t; t in [t_{j-1}, t_j) maps to j - 1 and t_f to the last bin.
  int bin_index(double t) const;
};

struct DressingTerm {
  double c_cos = 0.0;
  double c_sin = 0.0;
  double frequency = 0.0;
};

struct Pulse;

/// base(t) + envelope(t) sum_i [c_cos,i cos(w_i t) + c_sin,i sin(w_i t)] with
/// envelope(t) = sin^2(pi t / t_f) when enabled and 1 otherwise.
struct DressedPulse {
  std::shared_ptr<const Pulse> base;  // null means the zero pulse
  std::vector<DressingTerm> terms;
  bool envelope = true;
  double t_f = 1.0;
};

struct Pulse {
  std::variant<GaussianPulse, PolynomialPulse, PiecewiseConstantPulse, DressedPulse> shape;

  Pulse(GaussianPulse p) : shape(std::move(p)) {}
  Pulse(PolynomialPulse p) : shape(std::move(p)) {}
  Pulse(PiecewiseConstantPulse p) : shape(std::move(p)) {}
  Pulse(DressedPulse p) : shape(std::move(p)) {}

  double final_time() const;
  double operator()(double t) const;
  bool is_piecewise_constant() const { return std::holds_alternative<PiecewiseConstantPulse>(shape); }
};

/// One-bin zero pulse over [0, t_f].
Pulse zero_pulse(double t_f);

double eval_gaussian(const GaussianPulse& p, double t);

/// Throws std::invalid_argument if lambdas is empty or t_f <= 0 and
/// std::runtime_error if the linear system is singular.
PolynomialPulse solve_polynomial(std::span<const double> lambdas, double t_f);
double eval_polynomial(const PolynomialPulse& p, double t);

double eval_piecewise(const PiecewiseConstantPulse& p, double t);
double eval_dressed(const DressedPulse& p, double t);

/// Dressing frequencies w_i = (n_i + r_i) pi / t_f, n_i uniform on
/// 1..principal_max and r_i uniform on [-0.5, 0.5].
std::vector<double> make_random_basis(Rng& rng, int n_components, double t_f, int principal_max = 10);

/// Bin j takes the pulse value at the bin midpoint.
PiecewiseConstantPulse sample_to_bins(const Pulse& pulse, int n_bins);

/// `# schema=tfim.pulse.v1` then `t,g` rows on a uniform grid including both
/// end points.
void write_pulse_csv(std::ostream& out, const Pulse& pulse, int points = 512);

}  // namespace tfim
