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

#include "tfim/spin_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tfim {

void SpinChainSpec::validate() const {
  if (n_spins < 2) {
    throw std::invalid_argument("spin chain needs at least 2 spins, got " + std::to_string(n_spins));
  }
  if (n_spins > 20) {
    throw std::invalid_argument("dense representation limited to 20 spins");
  }
  if (couplings.size() != static_cast<std::size_t>(n_spins)) {
    throw std::invalid_argument("expected " + std::to_string(n_spins) + " couplings, got " +
                                std::to_string(couplings.size()));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite and non-negative");
  }
}

double classical_energy(const std::vector<double>& couplings, std::uint64_t config) {
  const int n = static_cast<int>(couplings.size());
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    energy -= couplings[i] * spin_value(config, i, n) * spin_value(config, j, n);
  }
  return energy;
}

ModelTerms build_terms(const SpinChainSpec& spec) {
  spec.validate();
  const int n = spec.n_spins;
  const auto dim = static_cast<Eigen::Index>(spec.dimension());

  ModelTerms terms;
  terms.n_spins = n;
  terms.beta = spec.beta;
  terms.h0 = Operator::Zero(dim, dim);
  terms.h1 = Operator::Zero(dim, dim);
  terms.h2 = Operator::Zero(dim, dim);

  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto config = static_cast<std::uint64_t>(k);
    terms.h0(k, k) = classical_energy(spec.couplings, config);

    if (spec.breaker == Breaker::SingleSiteZ) {
      terms.h2(k, k) = spin_value(config, 0, n);
    } else {
      double magnetization = 0.0;
      for (int i = 0; i < n; ++i) magnetization += spin_value(config, i, n);
      terms.h2(k, k) = magnetization;
    }

    for (int i = 0; i < n; ++i) {
      const auto flipped = static_cast<Eigen::Index>(config ^ (std::uint64_t{1} << (n - 1 - i)));
      terms.h1(flipped, k) -= 1.0;
    }
  }
  return terms;
}

double asymmetry(const Operator& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.transpose()).cwiseAbs().maxCoeff();
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
    for (Eigen::Index row = 0; row < vectors.rows(); ++row) {
      const double v = vectors(row, col);
      if (std::abs(v) > Spectrum::sign_threshold) {
        if (v < 0.0) vectors.col(col) *= -1.0;
        break;
      }
    }
  }
}

Spectrum diagonalize(const Operator& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("diagonalize: operator must be square and non-empty");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (asymmetry(h) > 1e-12 * scale) {
    throw std::invalid_argument("diagonalize: operator is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("diagonalize: eigensolver failed");
  }

  Spectrum spectrum;
  spectrum.eigenvalues = solver.eigenvalues();
  spectrum.eigenvectors = solver.eigenvectors();
  fix_signs(spectrum.eigenvectors);

  const double norm = h.norm();
  const Eigen::MatrixXd residual =
      h * spectrum.eigenvectors - spectrum.eigenvectors * spectrum.eigenvalues.asDiagonal();
  for (Eigen::Index k = 0; k < residual.cols(); ++k) {
    if (residual.col(k).norm() > 1e-10 * std::max(norm, 1.0)) {
      throw std::runtime_error("diagonalize: residual check failed for eigenpair " + std::to_string(k));
    }
  }
  return spectrum;
}

DegeneracyReport degeneracy_report(const Spectrum& spectrum, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("degeneracy_report: tol must be positive");

  const auto& e = spectrum.eigenvalues;
  const Eigen::Index n = e.size();
  DegeneracyReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  report.min_nonzero_gap = std::numeric_limits<double>::infinity();

  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n && e(b) - e(a) < tol; ++b) ++report.pair_count;
    if (a + 1 < n) {
      const double gap = e(a + 1) - e(a);
      report.min_gap = std::min(report.min_gap, gap);
      if (gap >= tol) report.min_nonzero_gap = std::min(report.min_nonzero_gap, gap);
    }
  }
  if (n < 2) report.min_gap = 0.0;
  return report;
}

DegeneracyReport degeneracy_report(const SpinChainSpec& spec, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("degeneracy_report: tol must be positive");
  return degeneracy_report(diagonalize(build_terms(spec).static_part()), tol);
}

std::vector<double> gap_profile(const Spectrum& spectrum) {
  std::vector<double> gaps;
  const auto& e = spectrum.eigenvalues;
  for (Eigen::Index k = 0; k + 1 < e.size(); ++k) gaps.push_back(e(k + 1) - e(k));
  return gaps;
}

std::vector<double> odd_level_gaps(const std::vector<double>& gaps) {
  std::vector<double> odd;
  for (std::size_t k = 0; k < gaps.size(); k += 2) odd.push_back(gaps[k]);
  return odd;
}

SubspaceDefinition SubspaceDefinition::canonical(int n_spins, IndexBase base) {
  if (n_spins < 4) {
    throw std::invalid_argument("canonical subspaces need 2^N divisible by 16 (N >= 4)");
  }
  const int sixteenth = (1 << n_spins) / 16;
  SubspaceDefinition def;
  def.index_base = base;
  def.initial = {3 * sixteenth, 6 * sixteenth};
  def.target = {11 * sixteenth, 14 * sixteenth};
  return def;
}

StateVector BoundaryStates::project_initial(const StateVector& v) const {
  return basis_i.cast<Complex>() * (basis_i.transpose().cast<Complex>() * v);
}

StateVector BoundaryStates::project_target(const StateVector& v) const {
  return basis_f.cast<Complex>() * (basis_f.transpose().cast<Complex>() * v);
}

namespace {

Eigen::MatrixXd range_columns(const Spectrum& spectrum, IndexRange range, int offset, const char* label) {
  const int first = range.first - offset;
  const int last = range.last - offset;
  if (first < 0 || last >= static_cast<int>(spectrum.size()) || first > last) {
    throw std::invalid_argument(std::string("build_boundary_states: ") + label + " range out of bounds");
  }
  return spectrum.eigenvectors.middleCols(first, last - first + 1);
}

}  // namespace

BoundaryStates build_boundary_states(const Spectrum& spectrum, const SubspaceDefinition& subspaces) {
  const int offset = subspaces.index_base == IndexBase::OneBased ? 1 : 0;
  const auto& a = subspaces.initial;
  const auto& b = subspaces.target;
  if (a.first <= b.last && b.first <= a.last) {
    throw std::invalid_argument("build_boundary_states: initial and target ranges overlap");
  }

  BoundaryStates states;
  states.basis_i = range_columns(spectrum, a, offset, "initial");
  states.basis_f = range_columns(spectrum, b, offset, "target");
  states.c_i = 1.0 / std::sqrt(static_cast<double>(a.count()));
  states.c_f = 1.0 / std::sqrt(static_cast<double>(b.count()));
  states.psi_i = (states.c_i * states.basis_i.rowwise().sum()).cast<Complex>();
  states.psi_f = (states.c_f * states.basis_f.rowwise().sum()).cast<Complex>();
  return states;
}

}  // namespace tfim
