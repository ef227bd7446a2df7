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

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tfim/pulses.hpp"
#include "tfim/spin_model.hpp"
#include "tfim/types.hpp"

namespace tfim {

/// H(g) = D + g H1 where D = H0 + beta H2 is diagonal in the computational
/// basis and H1 is the control term (normally -sum_i sigma_i^x).
///
/// Besides the dense form, the action of H(g) on a state and of
/// exp(-i dt H(g)) are available; the latter uses a Taylor series truncated
/// at double precision, with the step split so that each piece has
/// |dt| ||H|| <= 2. The standard transverse term is applied by bit flips,
/// any other control term as a dense product.
class ControlHamiltonian {
 public:
  explicit ControlHamiltonian(const ModelTerms& terms);

  int n_spins() const { return n_spins_; }
  Eigen::Index dimension() const { return diagonal_.size(); }
  const RealVector& static_diagonal() const { return diagonal_; }
  const Operator& control_term() const { return h1_; }

  Operator dense(double g) const;

  /// out = (static_scale D + g H1) in.
  void apply(double static_scale, double g, const StateVector& in, StateVector& out) const;

  /// psi <- exp(-i dt (static_scale D + g H1)) psi.
  void step(StateVector& psi, double static_scale, double g, double dt) const;

  /// With U = exp(-i dt (D + g H1)): psi <- U psi and
  /// deriv <- U deriv + (dU/dg) psi, both from one Taylor series of the
  /// block-triangular generator [[A, E], [0, A]], A = -i dt H(g), E = -i dt H1.
  /// Starting from deriv = 0 this gives the exact derivative of the step.
  void step_with_derivative(StateVector& psi, StateVector& deriv, double g, double dt) const;

 private:
  int n_spins_ = 0;
  RealVector diagonal_;
  Operator h1_;
  bool transverse_ = true;
  double diagonal_bound_ = 0.0;
  double control_bound_ = 0.0;
};

/// exp(-i dt H) via eigendecomposition of a real symmetric H.
ComplexMatrix step_propagator(const Operator& h, double dt);

enum class Integrator {
  Midpoint,         // H held at its midpoint value over each substep
  CommutatorFree4,  // fourth order, two exponentials per substep
};

struct PropagationSettings {
  int substeps = 128;
  double convergence_tol = 1e-10;
  int max_substeps = 65536;
  Integrator method = Integrator::CommutatorFree4;
  int trajectory_samples = 0;  // 0 disables trajectory recording
};

struct EvolutionResult {
  StateVector final_state;
  double fidelity = 0.0;
  std::vector<double> times;
  std::vector<StateVector> states;
  int substeps = 0;
  bool converged = false;
};

/// F = |<target|final>|^2.
double state_fidelity(const StateVector& target, const StateVector& final_state);

/// Evolve psi0 over [0, t_f] under H(t) = D + g(t) H1.
///
/// Piecewise-constant pulses take one exact exponential per bin. Other pulses
/// are integrated with `settings.method`, doubling the substep count from
/// `settings.substeps` until the fidelity with `target` changes by less than
/// `convergence_tol`; `converged` is false if `max_substeps` was reached
/// first, in which case the finest result is returned.
EvolutionResult propagate(const ControlHamiltonian& hamiltonian, const StateVector& psi0,
                          const StateVector& target, const Pulse& pulse,
                          const PropagationSettings& settings = {});

/// One pass with a fixed substep count (ignored for piecewise-constant pulses).
StateVector evolve_fixed(const ControlHamiltonian& hamiltonian, const StateVector& psi0, const Pulse& pulse,
                         int substeps, Integrator method = Integrator::CommutatorFree4);

/// Apply exp(-i dt H(u_j)) for j = 0, 1, ... in order. dt may be negative.
StateVector evolve_bins(const ControlHamiltonian& hamiltonian, const StateVector& psi0,
                        std::span<const double> bins, double dt);

using StateAction = std::function<StateVector(const StateVector&)>;

/// F_S = |<psi_f| P_f U P_i |psi_i>|^2 with the projectors given by
/// orthonormal column bases. U is only applied, never materialized. Throws
/// std::invalid_argument when the subspaces overlap.
double subspace_fidelity(const Eigen::MatrixXd& basis_i, const Eigen::MatrixXd& basis_f,
                         const StateVector& psi_i, const StateVector& psi_f, const StateAction& evolve);
double subspace_fidelity(const BoundaryStates& states, const StateAction& evolve);

/// Everything needed to score a pulse: model, boundary states, final time.
struct ControlProblem {
  ControlHamiltonian hamiltonian;
  BoundaryStates states;
  double t_f = 1.0;
  double fidelity_target = 0.9999;
};

/// Builds the model from `spec`, diagonalizes its static part and forms the
/// boundary states (canonical subspaces unless given).
ControlProblem make_problem(const SpinChainSpec& spec, double t_f,
                            const std::optional<SubspaceDefinition>& subspaces = std::nullopt);

EvolutionResult evolve_problem(const ControlProblem& problem, const Pulse& pulse,
                               const PropagationSettings& settings = {});

}  // namespace tfim
