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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tfim/types.hpp"

namespace tfim {

/// Which term multiplies beta in the static Hamiltonian.
enum class Breaker {
  SingleSiteZ,  // sigma_1^z
  FullSumZ,     // sum_i sigma_i^z
};

/// Random-coupling transverse Ising ring.
///
/// couplings[i] is the bond between site i and site (i + 1) mod N, so the
/// list has exactly one entry per site (periodic boundary).
struct SpinChainSpec {
  int n_spins = 4;
  std::vector<double> couplings;
  double beta = 1e-3;
  Breaker breaker = Breaker::SingleSiteZ;

  std::size_t dimension() const { return std::size_t{1} << n_spins; }
  void validate() const;
};

/// The three Hamiltonian terms in the computational basis.
///
/// Basis index k encodes the spin configuration with site 1 as the most
/// significant bit; a zero bit is spin up (sigma^z = +1). For N = 2 the order
/// is |up up>, |up down>, |down up>, |down down>.
struct ModelTerms {
  int n_spins = 0;
  double beta = 0.0;
  Operator h0;  // -sum_i J_{i,i+1} sz_i sz_{i+1}
  Operator h1;  // -sum_i sx_i
  Operator h2;  // breaker

  std::size_t dimension() const { return static_cast<std::size_t>(h0.rows()); }
  /// H0 + beta * H2, diagonal by construction.
  Operator static_part() const { return h0 + beta * h2; }
  RealVector static_diagonal() const { return static_part().diagonal(); }
};

/// +1 for spin up, -1 for spin down. `site` is zero-based.
inline int spin_value(std::uint64_t config, int site, int n_spins) {
  return ((config >> (n_spins - 1 - site)) & 1U) ? -1 : 1;
}

/// Classical Ising energy -sum_i J_{i,i+1} s_i s_{i+1} of one configuration.
double classical_energy(const std::vector<double>& couplings, std::uint64_t config);

ModelTerms build_terms(const SpinChainSpec& spec);

/// Largest entrywise |H - H^T|.
double asymmetry(const Operator& h);

struct Spectrum {
  RealVector eigenvalues;         // ascending
  Eigen::MatrixXd eigenvectors;   // column k pairs with eigenvalue k
  // Columns have their first component with |v| > sign_threshold positive.
  static constexpr double sign_threshold = 1e-9;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Ascending eigenpairs of a real symmetric operator with the sign convention
/// applied. Throws std::invalid_argument for a non-symmetric input and
/// std::runtime_error if the residual check fails.
Spectrum diagonalize(const Operator& h);

/// Flip each eigenvector so its first significant component is positive.
void fix_signs(Eigen::MatrixXd& vectors);

struct DegeneracyReport {
  int pair_count = 0;            // eigenvalue pairs with |E_a - E_b| < tol
  double min_gap = 0.0;          // smallest adjacent gap, zero when degenerate
  double min_nonzero_gap = 0.0;  // smallest adjacent gap >= tol
};

DegeneracyReport degeneracy_report(const Spectrum& spectrum, double tol = 1e-9);
DegeneracyReport degeneracy_report(const SpinChainSpec& spec, double tol = 1e-9);

/// g_k = E_{k+1} - E_k, length 2^N - 1.
std::vector<double> gap_profile(const Spectrum& spectrum);

/// Gaps between phi_k and phi_{k+1} for odd one-based k, i.e. gaps[0],
/// gaps[2], ...
std::vector<double> odd_level_gaps(const std::vector<double>& gaps);

enum class IndexBase { OneBased, ZeroBased };

/// Inclusive range of eigenstate indices.
struct IndexRange {
  int first = 0;
  int last = 0;
  int count() const { return last - first + 1; }
};

struct SubspaceDefinition {
  IndexBase index_base = IndexBase::OneBased;
  IndexRange initial;
  IndexRange target;

  /// [2^N 3/16, 2^N 6/16] -> [2^N 11/16, 2^N 14/16], read in `base`. The
  /// one-based reading places both ranges symmetrically about the middle of
  /// the spectrum. Requires N >= 4.
  static SubspaceDefinition canonical(int n_spins, IndexBase base = IndexBase::OneBased);
};

struct BoundaryStates {
  StateVector psi_i;
  StateVector psi_f;
  Eigen::MatrixXd basis_i;  // eigenvectors spanning S_i, one per column
  Eigen::MatrixXd basis_f;
  double c_i = 0.0;
  double c_f = 0.0;

  StateVector project_initial(const StateVector& v) const;
  StateVector project_target(const StateVector& v) const;
  Operator projector_initial() const { return basis_i * basis_i.transpose(); }
  Operator projector_target() const { return basis_f * basis_f.transpose(); }
};

/// psi_i = c_i sum_{k in initial} |phi_k>, psi_f likewise over the target
/// range. Throws std::invalid_argument on overlapping or out-of-range indices.
BoundaryStates build_boundary_states(const Spectrum& spectrum, const SubspaceDefinition& subspaces);

}  // namespace tfim
