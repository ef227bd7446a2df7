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

#include "tfim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace tfim {

namespace {

// Number of Taylor pieces keeping |tau| * bound <= 2.
int piece_count(double dt, double bound) {
  const double pieces = std::ceil(std::abs(dt) * bound / 2.0);
  if (!(pieces <= 1e8)) throw std::invalid_argument("time step too long for the state-action exponential");
  return std::max(1, static_cast<int>(pieces));
}

}  // namespace

ControlHamiltonian::ControlHamiltonian(const ModelTerms& terms)
    : n_spins_(terms.n_spins), diagonal_(terms.static_diagonal()), h1_(terms.h1) {
  if (terms.h0.rows() != terms.h1.rows() || terms.h1.rows() != terms.h1.cols()) {
    throw std::invalid_argument("ControlHamiltonian: term dimensions differ");
  }
  if (asymmetry(terms.h1) > 1e-12) throw std::invalid_argument("ControlHamiltonian: control term not symmetric");
  diagonal_bound_ = diagonal_.cwiseAbs().maxCoeff();
  control_bound_ = terms.h1.cwiseAbs().rowwise().sum().maxCoeff();

  const Eigen::Index dim = dimension();
  for (Eigen::Index row = 0; row < dim && transverse_; ++row) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      const auto diff = static_cast<std::uint64_t>(row ^ col);
      const bool single_flip = diff != 0 && (diff & (diff - 1)) == 0;
      if (h1_(row, col) != (single_flip ? -1.0 : 0.0)) {
        transverse_ = false;
        break;
      }
    }
  }
}

Operator ControlHamiltonian::dense(double g) const {
  Operator h = g * h1_;
  h.diagonal() += diagonal_;
  return h;
}

void ControlHamiltonian::apply(double static_scale, double g, const StateVector& in, StateVector& out) const {
  const Eigen::Index dim = dimension();
  if (!transverse_) {
    out.noalias() = g * (h1_ * in);
    out += static_scale * diagonal_.cwiseProduct(in);
    return;
  }
  out.resize(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (int i = 0; i < n_spins_; ++i) {
      const Complex& c = in[k ^ (Eigen::Index{1} << i)];
      re += c.real();
      im += c.imag();
    }
    const double d = static_scale * diagonal_[k];
    out[k] = Complex(d * in[k].real() - g * re, d * in[k].imag() - g * im);
  }
}

void ControlHamiltonian::step(StateVector& psi, double static_scale, double g, double dt) const {
  const double bound = std::abs(static_scale) * diagonal_bound_ + std::abs(g) * control_bound_;
  const int pieces = piece_count(dt, bound);
  const double tau = dt / pieces;

  const Eigen::Index dim = dimension();
  StateVector term(dim);
  StateVector next(dim);
  for (int piece = 0; piece < pieces; ++piece) {
    term = psi;
    for (int k = 1; k <= 60; ++k) {
      apply(static_scale, g, term, next);
      // term = (-i tau / k) next, written out to avoid a general complex product.
      const double r = tau / k;
      double largest = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex v(r * next[i].imag(), -r * next[i].real());
        term[i] = v;
        psi[i] += v;
        largest = std::max(largest, std::abs(v.real()) + std::abs(v.imag()));
      }
      if (largest < 1e-17) break;
    }
  }
}

void ControlHamiltonian::step_with_derivative(StateVector& psi, StateVector& deriv, double g, double dt) const {
  const double bound = diagonal_bound_ + (std::abs(g) + 1.0) * control_bound_;
  const int pieces = piece_count(dt, bound);
  const double tau = dt / pieces;

  const Eigen::Index dim = dimension();
  StateVector top(dim), bottom(dim), h_top(dim), h_bottom(dim), h1_bottom(dim);
  for (int piece = 0; piece < pieces; ++piece) {
    top = deriv;
    bottom = psi;
    for (int k = 1; k <= 80; ++k) {
      apply(1.0, g, top, h_top);
      apply(0.0, 1.0, bottom, h1_bottom);
      apply(1.0, g, bottom, h_bottom);
      const double r = tau / k;
      double largest = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex a = h_top[i] + h1_bottom[i];
        const Complex vt(r * a.imag(), -r * a.real());
        const Complex vb(r * h_bottom[i].imag(), -r * h_bottom[i].real());
        top[i] = vt;
        bottom[i] = vb;
        deriv[i] += vt;
        psi[i] += vb;
        largest = std::max({largest, std::abs(vt.real()) + std::abs(vt.imag()), std::abs(vb.real()) + std::abs(vb.imag())});
      }
      if (largest < 1e-17) break;
    }
  }
}

ComplexMatrix step_propagator(const Operator& h, double dt) {
  if (!std::isfinite(dt)) throw std::invalid_argument("step_propagator: dt must be finite");
  const Spectrum spectrum = diagonalize(h);
  const Eigen::VectorXcd phases =
      (spectrum.eigenvalues.cast<Complex>() * Complex(0.0, -dt)).array().exp().matrix();
  const ComplexMatrix v = spectrum.eigenvectors.cast<Complex>();
  return v * phases.asDiagonal() * v.transpose();
}

double state_fidelity(const StateVector& target, const StateVector& final_state) {
  return std::norm(target.dot(final_state));
}

namespace {

// Nodes and weights of the fourth-order commutator-free exponential
// integrator; the earlier-weighted exponential acts first.
const double kCfOffset = std::sqrt(3.0) / 6.0;
const double kCfAlpha1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
const double kCfAlpha2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

void check_state(const StateVector& psi, const ControlHamiltonian& h) {
  if (psi.size() != h.dimension()) throw std::invalid_argument("state dimension does not match the model");
}

StateVector run_smooth(const ControlHamiltonian& hamiltonian, const StateVector& psi0, const Pulse& pulse,
                       int substeps, Integrator method, int samples, std::vector<double>* times,
                       std::vector<StateVector>* states) {
  const double t_f = pulse.final_time();
  const double dt = t_f / substeps;
  const int stride = samples > 0 ? std::max(1, substeps / samples) : 0;
  StateVector psi = psi0;
  if (stride) {
    times->assign(1, 0.0);
    states->assign(1, psi);
  }

  for (int j = 0; j < substeps; ++j) {
    const double t0 = j * dt;
    if (method == Integrator::Midpoint) {
      hamiltonian.step(psi, 1.0, pulse(t0 + 0.5 * dt), dt);
    } else {
      const double g1 = pulse(t0 + (0.5 - kCfOffset) * dt);
      const double g2 = pulse(t0 + (0.5 + kCfOffset) * dt);
      hamiltonian.step(psi, 0.5, kCfAlpha2 * g1 + kCfAlpha1 * g2, dt);
      hamiltonian.step(psi, 0.5, kCfAlpha1 * g1 + kCfAlpha2 * g2, dt);
    }
    if (stride && ((j + 1) % stride == 0 || j + 1 == substeps)) {
      times->push_back(j + 1 == substeps ? t_f : (j + 1) * dt);
      states->push_back(psi);
    }
  }
  return psi;
}

}  // namespace

StateVector evolve_bins(const ControlHamiltonian& hamiltonian, const StateVector& psi0,
                        std::span<const double> bins, double dt) {
  check_state(psi0, hamiltonian);
  StateVector psi = psi0;
  for (double u : bins) hamiltonian.step(psi, 1.0, u, dt);
  return psi;
}

StateVector evolve_fixed(const ControlHamiltonian& hamiltonian, const StateVector& psi0, const Pulse& pulse,
                         int substeps, Integrator method) {
  check_state(psi0, hamiltonian);
  if (const auto* bins = std::get_if<PiecewiseConstantPulse>(&pulse.shape)) {
    return evolve_bins(hamiltonian, psi0, bins->bins, bins->bin_width());
  }
  if (substeps < 1) throw std::invalid_argument("evolve_fixed: substeps must be >= 1");
  return run_smooth(hamiltonian, psi0, pulse, substeps, method, 0, nullptr, nullptr);
}

EvolutionResult propagate(const ControlHamiltonian& hamiltonian, const StateVector& psi0,
                          const StateVector& target, const Pulse& pulse, const PropagationSettings& settings) {
  check_state(psi0, hamiltonian);
  check_state(target, hamiltonian);
  if (!(pulse.final_time() > 0.0)) throw std::invalid_argument("propagate: t_f must be positive");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("propagate: psi0 must be normalized");

  EvolutionResult result;
  if (const auto* bins = std::get_if<PiecewiseConstantPulse>(&pulse.shape)) {
    const double dt = bins->bin_width();
    StateVector psi = psi0;
    if (settings.trajectory_samples > 0) {
      result.times.push_back(0.0);
      result.states.push_back(psi);
    }
    for (int j = 0; j < bins->n_bins(); ++j) {
      hamiltonian.step(psi, 1.0, bins->bins[j], dt);
      if (settings.trajectory_samples > 0) {
        result.times.push_back((j + 1) * dt);
        result.states.push_back(psi);
      }
    }
    result.final_state = std::move(psi);
    result.fidelity = state_fidelity(target, result.final_state);
    result.substeps = bins->n_bins();
    result.converged = true;
    return result;
  }

  if (settings.substeps < 1 || settings.max_substeps < settings.substeps) {
    throw std::invalid_argument("propagate: need 1 <= substeps <= max_substeps");
  }

  int substeps = settings.substeps;
  auto pass = [&](int m) {
    result.final_state = run_smooth(hamiltonian, psi0, pulse, m, settings.method, settings.trajectory_samples,
                                    &result.times, &result.states);
    result.substeps = m;
    return state_fidelity(target, result.final_state);
  };

  double previous = pass(substeps);
  result.fidelity = previous;
  while (2 * static_cast<long long>(substeps) <= settings.max_substeps) {
    substeps *= 2;
    const double current = pass(substeps);
    result.fidelity = current;
    if (std::abs(current - previous) < settings.convergence_tol) {
      result.converged = true;
      return result;
    }
    previous = current;
  }
  return result;
}

double subspace_fidelity(const Eigen::MatrixXd& basis_i, const Eigen::MatrixXd& basis_f,
                         const StateVector& psi_i, const StateVector& psi_f, const StateAction& evolve) {
  if ((basis_f.transpose() * basis_i).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("subspace_fidelity: initial and target subspaces overlap");
  }
  const auto bi = basis_i.cast<Complex>();
  const auto bf = basis_f.cast<Complex>();
  const StateVector projected = bi * (bi.adjoint() * psi_i);
  const StateVector evolved = evolve(projected);
  const StateVector target = bf * (bf.adjoint() * psi_f);
  return std::norm(target.dot(evolved));
}

double subspace_fidelity(const BoundaryStates& states, const StateAction& evolve) {
  return subspace_fidelity(states.basis_i, states.basis_f, states.psi_i, states.psi_f, evolve);
}

ControlProblem make_problem(const SpinChainSpec& spec, double t_f, const std::optional<SubspaceDefinition>& subspaces) {
  if (!(t_f > 0.0)) throw std::invalid_argument("make_problem: t_f must be positive");
  const ModelTerms terms = build_terms(spec);
  const Spectrum spectrum = diagonalize(terms.static_part());
  const SubspaceDefinition def = subspaces ? *subspaces : SubspaceDefinition::canonical(spec.n_spins);
  return ControlProblem{ControlHamiltonian(terms), build_boundary_states(spectrum, def), t_f};
}

EvolutionResult evolve_problem(const ControlProblem& problem, const Pulse& pulse, const PropagationSettings& settings) {
  if (std::abs(pulse.final_time() - problem.t_f) > 1e-12 * problem.t_f) {
    throw std::invalid_argument("evolve_problem: pulse duration differs from the problem's t_f");
  }
  return propagate(problem.hamiltonian, problem.states.psi_i, problem.states.psi_f, pulse, settings);
}

}  // namespace tfim
