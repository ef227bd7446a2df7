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

#include "tfim/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "tfim/io.hpp"

namespace tfim {

namespace {

void check_time(double t, double t_f, const char* who) {
  const double slack = 1e-12 * std::max(1.0, t_f);
  if (!(t >= -slack && t <= t_f + slack)) {
    throw std::domain_error(std::string(who) + ": t = " + std::to_string(t) + " outside [0, " +
                            std::to_string(t_f) + "]");
  }
}

}  // namespace

int PiecewiseConstantPulse::bin_index(double t) const {
  const int n = n_bins();
  const int j = static_cast<int>(std::floor(t / bin_width()));
  return std::clamp(j, 0, n - 1);
}

double Pulse::final_time() const {
  return std::visit([](const auto& p) { return p.t_f; }, shape);
}

double Pulse::operator()(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianPulse>) {
          return eval_gaussian(p, t);
        } else if constexpr (std::is_same_v<T, PolynomialPulse>) {
          return eval_polynomial(p, t);
        } else if constexpr (std::is_same_v<T, PiecewiseConstantPulse>) {
          return eval_piecewise(p, t);
        } else {
          return eval_dressed(p, t);
        }
      },
      shape);
}

Pulse zero_pulse(double t_f) { return PiecewiseConstantPulse{{0.0}, t_f}; }

double eval_gaussian(const GaussianPulse& p, double t) {
  check_time(t, p.t_f, "eval_gaussian");
  const double x = t - 0.5 * p.t_f;
  const double s = std::sin(2.0 * std::numbers::pi * t * p.omega / p.t_f);
  return p.a * std::exp(-32.0 * x * x / (p.t_f * p.t_f)) * s * s;
}

PolynomialPulse solve_polynomial(std::span<const double> lambdas, double t_f) {
  if (lambdas.empty()) throw std::invalid_argument("solve_polynomial: need at least one lambda");
  if (!(t_f > 0.0)) throw std::invalid_argument("solve_polynomial: t_f must be positive");

  const int n_lambda = static_cast<int>(lambdas.size());
  const int degree = n_lambda + 5;
  // The monomial system is poorly conditioned (about 1e7 for N_lambda = 4),
  // so it is solved in extended precision and rounded once at the end.
  using Matrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  Matrix system = Matrix::Zero(degree, degree);
  Vector rhs = Vector::Zero(degree);

  // Unknowns b_1..b_J of g(tau) = sum b_j tau^j; column j - 1 holds b_j.
  system(0, 0) = 1.0L;  // g'(0) = b_1
  system(1, 1) = 2.0L;  // g''(0) = 2 b_2
  for (int j = 1; j <= degree; ++j) {
    system(2, j - 1) = 1.0L;                                // g(1)
    system(3, j - 1) = j;                                   // g'(1)
    system(4, j - 1) = static_cast<long double>(j) * (j - 1);  // g''(1)
  }
  for (int k = 1; k <= n_lambda; ++k) {
    const long double node = static_cast<long double>(k) / (n_lambda + 1);
    long double power = 1.0L;
    for (int j = 1; j <= degree; ++j) {
      power *= node;
      system(4 + k, j - 1) = power;
    }
    rhs(4 + k) = lambdas[k - 1];
  }

  Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) throw std::runtime_error("solve_polynomial: singular system");
  const Vector b = lu.solve(rhs);
  // Normwise backward error; the solution can be much larger than the
  // right-hand side.
  const long double scale = system.norm() * b.norm() + rhs.norm();
  if ((system * b - rhs).norm() > 1e-12L * scale) {
    throw std::runtime_error("solve_polynomial: ill-conditioned system");
  }

  PolynomialPulse pulse;
  pulse.lambdas.assign(lambdas.begin(), lambdas.end());
  pulse.t_f = t_f;
  pulse.scaled.resize(degree);
  pulse.coefficients.resize(degree);
  for (int j = 1; j <= degree; ++j) {
    pulse.scaled[j - 1] = static_cast<double>(b(j - 1));
    pulse.coefficients[j - 1] = static_cast<double>(b(j - 1) / std::pow(static_cast<long double>(t_f), j));
  }
  return pulse;
}

double eval_polynomial(const PolynomialPulse& p, double t) {
  check_time(t, p.t_f, "eval_polynomial");
  // Horner in the scaled variable.
  const double tau = t / p.t_f;
  double acc = 0.0;
  for (auto it = p.scaled.rbegin(); it != p.scaled.rend(); ++it) acc = (acc + *it) * tau;
  return acc;
}

double eval_piecewise(const PiecewiseConstantPulse& p, double t) {
  check_time(t, p.t_f, "eval_piecewise");
  if (p.bins.empty()) throw std::invalid_argument("eval_piecewise: pulse has no bins");
  return p.bins[p.bin_index(t)];
}

double eval_dressed(const DressedPulse& p, double t) {
  check_time(t, p.t_f, "eval_dressed");
  double value = p.base ? (*p.base)(t) : 0.0;
  if (p.terms.empty()) return value;

  double dressing = 0.0;
  for (const auto& term : p.terms) {
    dressing += term.c_cos * std::cos(term.frequency * t) + term.c_sin * std::sin(term.frequency * t);
  }
  if (p.envelope) {
    const double s = std::sin(std::numbers::pi * t / p.t_f);
    dressing *= s * s;
  }
  return value + dressing;
}

std::vector<double> make_random_basis(Rng& rng, int n_components, double t_f, int principal_max) {
  if (n_components < 1) throw std::invalid_argument("make_random_basis: n_components must be >= 1");
  if (principal_max < 1) throw std::invalid_argument("make_random_basis: principal_max must be >= 1");
  if (!(t_f > 0.0)) throw std::invalid_argument("make_random_basis: t_f must be positive");

  std::vector<double> frequencies;
  frequencies.reserve(n_components);
  for (int i = 0; i < n_components; ++i) {
    const auto harmonic = static_cast<double>(rng.uniform_int(1, principal_max));
    const double offset = rng.uniform(-0.5, 0.5);
    frequencies.push_back((harmonic + offset) * std::numbers::pi / t_f);
  }
  return frequencies;
}

PiecewiseConstantPulse sample_to_bins(const Pulse& pulse, int n_bins) {
  if (n_bins < 1) throw std::invalid_argument("sample_to_bins: n_bins must be >= 1");
  PiecewiseConstantPulse out;
  out.t_f = pulse.final_time();
  out.bins.resize(n_bins);
  const double width = out.t_f / n_bins;
  for (int j = 0; j < n_bins; ++j) out.bins[j] = pulse((j + 0.5) * width);
  return out;
}

void write_pulse_csv(std::ostream& out, const Pulse& pulse, int points) {
  if (points < 2) throw std::invalid_argument("write_pulse_csv: need at least 2 points");
  const double t_f = pulse.final_time();
  out << "# schema=tfim.pulse.v1\n";
  out << "t,g\n";
  for (int i = 0; i < points; ++i) {
    const double t = (i == points - 1) ? t_f : t_f * i / (points - 1);
    out << format_number(t) << ',' << format_number(pulse(t)) << '\n';
  }
}

}  // namespace tfim
