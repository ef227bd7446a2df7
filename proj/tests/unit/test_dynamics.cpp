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

#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tfim/dynamics.hpp"

using namespace tfim;
using namespace tfim::testing_support;

namespace {

StateVector random_state(Rng& rng, Eigen::Index dim) {
  StateVector v(dim);
  for (auto& c : v) c = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return v / v.norm();
}

ControlProblem random_problem(Rng& rng, int n, double tf) { return make_problem(random_spec(rng, n), tf); }

}  // namespace

TEST(Dynamics, ApplyMatchesDenseOperator) {
  Rng rng(41);
  const ModelTerms terms = build_terms(random_spec(rng, 5));
  const ControlHamiltonian h(terms);
  const StateVector v = random_state(rng, 32);
  StateVector out;
  h.apply(0.7, -2.3, v, out);
  Operator dense = -2.3 * terms.h1;
  dense.diagonal() += 0.7 * terms.static_diagonal();
  EXPECT_LE((out - dense.cast<Complex>() * v).norm(), 1e-13);
  EXPECT_LE((h.dense(1.5) - (terms.static_part() + 1.5 * terms.h1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Dynamics, TaylorStepMatchesEigenPropagator) {
  Rng rng(42);
  const ModelTerms terms = build_terms(random_spec(rng, 4));
  const ControlHamiltonian h(terms);
  for (double g : {0.0, 0.3, -4.0, 40.0}) {
    for (double dt : {1e-3, 0.05, 1.0, -0.7, 3.0}) {
      StateVector psi = random_state(rng, 16);
      const StateVector expected = step_propagator(h.dense(g), dt) * psi;
      h.step(psi, 1.0, g, dt);
      EXPECT_LE((psi - expected).norm(), 1e-12) << "g=" << g << " dt=" << dt;
    }
  }
}

TEST(Dynamics, DenseControlTermPath) {
  Rng rng(43);
  ModelTerms terms = build_terms(random_spec(rng, 3));
  terms.h1 = terms.h1 + 0.5 * site_operator(pauli_z(), 1, 3) * site_operator(pauli_x(), 2, 3) +
             0.5 * site_operator(pauli_x(), 2, 3) * site_operator(pauli_z(), 1, 3);
  const ControlHamiltonian h(terms);
  StateVector psi = random_state(rng, 8);
  const StateVector expected = step_propagator(h.dense(1.7), 0.9) * psi;
  h.step(psi, 1.0, 1.7, 0.9);
  EXPECT_LE((psi - expected).norm(), 1e-12);
}

TEST(Dynamics, StepDerivativeMatchesDifferenceQuotient) {
  Rng rng(44);
  const ControlHamiltonian h(build_terms(random_spec(rng, 4)));
  const StateVector psi0 = random_state(rng, 16);
  for (double g : {0.0, 2.5, -7.0}) {
    const double dt = 0.3;
    StateVector psi = psi0;
    StateVector deriv = StateVector::Zero(16);
    h.step_with_derivative(psi, deriv, g, dt);

    StateVector plain = psi0;
    h.step(plain, 1.0, g, dt);
    EXPECT_LE((psi - plain).norm(), 1e-13);

    const double eps = 1e-5;
    StateVector up = psi0, down = psi0;
    h.step(up, 1.0, g + eps, dt);
    h.step(down, 1.0, g - eps, dt);
    EXPECT_LE((deriv - (up - down) / (2 * eps)).norm(), 1e-8);
  }
}

TEST(Dynamics, BinsForwardThenBackwardIsIdentity) {
  Rng rng(45);
  const ControlHamiltonian h(build_terms(random_spec(rng, 4)));
  std::vector<double> bins(12);
  for (double& u : bins) u = rng.uniform(-5, 5);
  const StateVector psi0 = random_state(rng, 16);
  const StateVector forward = evolve_bins(h, psi0, bins, 0.1);
  EXPECT_NEAR(forward.norm(), 1.0, 1e-13);
  const std::vector<double> reversed(bins.rbegin(), bins.rend());
  const StateVector back = evolve_bins(h, forward, reversed, -0.1);
  EXPECT_LE((back - psi0).norm(), 1e-12);
}

TEST(Dynamics, NullPulseGivesZeroFidelity) {
  Rng rng(46);
  for (int n : {4, 6}) {
    for (double tf : {0.1, 1.0, 5.0}) {
      const ControlProblem p = random_problem(rng, n, tf);
      EXPECT_LE(evolve_problem(p, zero_pulse(tf)).fidelity, 1e-10);
      EXPECT_LE(evolve_problem(p, GaussianPulse{0.0, 1.0, tf}).fidelity, 1e-10);
    }
  }
}

TEST(Dynamics, PiecewisePulseIsOneExactStepPerBin) {
  Rng rng(47);
  const ControlProblem p = random_problem(rng, 4, 2.0);
  std::vector<double> bins(7);
  for (double& u : bins) u = rng.uniform(-3, 3);
  const EvolutionResult r = evolve_problem(p, PiecewiseConstantPulse{bins, 2.0});
  StateVector expected = p.states.psi_i;
  for (double u : bins) expected = step_propagator(p.hamiltonian.dense(u), 2.0 / 7) * expected;
  EXPECT_LE((r.final_state - expected).norm(), 1e-12);
  EXPECT_EQ(r.substeps, 7);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.fidelity, std::norm(p.states.psi_f.dot(expected)), 1e-14);
}

TEST(Dynamics, FourthOrderConvergence) {
  Rng rng(48);
  const ControlProblem p = random_problem(rng, 4, 1.0);
  const Pulse pulse = GaussianPulse{12.0, 1.3, 1.0};
  const StateVector reference =
      evolve_fixed(p.hamiltonian, p.states.psi_i, pulse, 4096, Integrator::CommutatorFree4);
  auto error = [&](int m, Integrator method) {
    return (evolve_fixed(p.hamiltonian, p.states.psi_i, pulse, m, method) - reference).norm();
  };
  const double cf_ratio = error(32, Integrator::CommutatorFree4) / error(64, Integrator::CommutatorFree4);
  EXPECT_GT(cf_ratio, 12.0);
  EXPECT_LT(cf_ratio, 20.0);
  const double mid_ratio = error(64, Integrator::Midpoint) / error(128, Integrator::Midpoint);
  EXPECT_GT(mid_ratio, 3.5);
  EXPECT_LT(mid_ratio, 4.5);
}

TEST(Dynamics, PropagateConvergesAndFlagsTheCap) {
  Rng rng(49);
  const ControlProblem p = random_problem(rng, 4, 1.0);
  const Pulse pulse = GaussianPulse{20.0, 1.5, 1.0};
  const EvolutionResult good = evolve_problem(p, pulse);
  EXPECT_TRUE(good.converged);
  const StateVector fine = evolve_fixed(p.hamiltonian, p.states.psi_i, pulse, 8192);
  EXPECT_NEAR(good.fidelity, state_fidelity(p.states.psi_f, fine), 1e-9);

  PropagationSettings capped;
  capped.substeps = 4;
  capped.max_substeps = 8;
  capped.convergence_tol = 1e-14;
  const EvolutionResult r = evolve_problem(p, pulse, capped);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.substeps, 8);
}

TEST(Dynamics, TrajectorySamplesEndAtFinalTime) {
  Rng rng(50);
  const ControlProblem p = random_problem(rng, 4, 1.0);
  PropagationSettings s;
  s.trajectory_samples = 16;
  const EvolutionResult r = evolve_problem(p, GaussianPulse{5.0, 1.0, 1.0}, s);
  ASSERT_FALSE(r.times.empty());
  EXPECT_EQ(r.times.size(), r.states.size());
  EXPECT_EQ(r.times.front(), 0.0);
  EXPECT_EQ(r.times.back(), 1.0);
  EXPECT_LE((r.states.back() - r.final_state).norm(), 0.0);
  for (const auto& st : r.states) EXPECT_NEAR(st.norm(), 1.0, 1e-12);
}

TEST(Dynamics, FidelityEqualsSubspaceFidelity) {
  Rng rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const ControlProblem p = random_problem(rng, 4, 1.0);
    const Pulse pulse = GaussianPulse{rng.uniform(-50, 50), rng.uniform(0.02, 4), 1.0};
    const EvolutionResult r = evolve_problem(p, pulse);
    const double fs = subspace_fidelity(p.states, [&](const StateVector& psi) {
      return evolve_fixed(p.hamiltonian, psi, pulse, r.substeps);
    });
    EXPECT_NEAR(r.fidelity, fs, 1e-12);
  }
}

TEST(Dynamics, SubspaceFidelityRejectsOverlap) {
  Rng rng(52);
  const ControlProblem p = random_problem(rng, 4, 1.0);
  auto identity = [](const StateVector& v) { return v; };
  EXPECT_THROW(subspace_fidelity(p.states.basis_i, p.states.basis_i, p.states.psi_i, p.states.psi_i, identity),
               std::invalid_argument);
}

TEST(Dynamics, ProblemChecksPulseDuration) {
  Rng rng(53);
  const ControlProblem p = random_problem(rng, 4, 1.0);
  EXPECT_THROW(evolve_problem(p, zero_pulse(2.0)), std::invalid_argument);
  EXPECT_THROW(make_problem(random_spec(rng, 4), 0.0), std::invalid_argument);
}
