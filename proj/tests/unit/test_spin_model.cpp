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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tfim/spin_model.hpp"

using namespace tfim;
using namespace tfim::testing_support;

TEST(SpinModel, BasisConventionForTwoSpins) {
  // |up up>, |up down>, |down up>, |down down>
  EXPECT_EQ(spin_value(0b00, 0, 2), 1);
  EXPECT_EQ(spin_value(0b01, 0, 2), 1);
  EXPECT_EQ(spin_value(0b01, 1, 2), -1);
  EXPECT_EQ(spin_value(0b10, 0, 2), -1);
  EXPECT_EQ(spin_value(0b10, 1, 2), 1);
}

TEST(SpinModel, TermsMatchKroneckerConstruction) {
  Rng rng(11);
  for (int n : {2, 3, 4, 5}) {
    for (Breaker b : {Breaker::SingleSiteZ, Breaker::FullSumZ}) {
      const SpinChainSpec spec = random_spec(rng, n, 0.25, b);
      const ModelTerms t = build_terms(spec);
      EXPECT_LE((t.h0 - kron_h0(spec)).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LE((t.h1 - kron_h1(n)).cwiseAbs().maxCoeff(), 1e-14);
      Eigen::MatrixXd h2 = site_operator(pauli_z(), 0, n);
      if (b == Breaker::FullSumZ) {
        for (int i = 1; i < n; ++i) h2 += site_operator(pauli_z(), i, n);
      }
      EXPECT_LE((t.h2 - h2).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(SpinModel, DiagonalEqualsClassicalEnergy) {
  Rng rng(12);
  const SpinChainSpec spec = random_spec(rng, 6, 0.0);
  const ModelTerms t = build_terms(spec);
  for (std::uint64_t c = 0; c < spec.dimension(); ++c) {
    double e = 0.0;
    for (int i = 0; i < 6; ++i) {
      const int si = (c >> (5 - i)) & 1 ? -1 : 1;
      const int sj = (c >> (5 - (i + 1) % 6)) & 1 ? -1 : 1;
      e -= spec.couplings[i] * si * sj;
    }
    EXPECT_NEAR(t.h0(c, c), e, 1e-14);
    EXPECT_NEAR(classical_energy(spec.couplings, c), e, 1e-14);
  }
}

TEST(SpinModel, ValidateRejectsBadSpecs) {
  EXPECT_THROW((SpinChainSpec{1, {0.5}, 1e-3, Breaker::SingleSiteZ}.validate()), std::invalid_argument);
  EXPECT_THROW((SpinChainSpec{3, {0.5, 0.5}, 1e-3, Breaker::SingleSiteZ}.validate()), std::invalid_argument);
  EXPECT_THROW((SpinChainSpec{2, {0.5, 0.5}, -1.0, Breaker::SingleSiteZ}.validate()), std::invalid_argument);
  EXPECT_THROW((SpinChainSpec{2, {0.5, 0.5}, NAN, Breaker::SingleSiteZ}.validate()), std::invalid_argument);
  EXPECT_THROW((SpinChainSpec{21, std::vector<double>(21, 0.1), 1e-3, Breaker::SingleSiteZ}.validate()),
               std::invalid_argument);
}

TEST(SpinModel, SpectrumIsSortedAndOrthonormal) {
  Rng rng(13);
  const SpinChainSpec spec = random_spec(rng, 4);
  Operator h = build_terms(spec).static_part() + 0.3 * build_terms(spec).h1;
  const Spectrum s = diagonalize(h);
  for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k) EXPECT_LE(s.eigenvalues(k - 1), s.eigenvalues(k));
  const Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((h * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SpinModel, DiagonalizeRejectsAsymmetric) {
  Operator h = Operator::Identity(4, 4);
  h(0, 1) = 1.0;
  EXPECT_THROW(diagonalize(h), std::invalid_argument);
}

TEST(SpinModel, SpectrumMatchesSortedClassicalEnergies) {
  Rng rng(14);
  for (int n : {3, 4, 5}) {
    const SpinChainSpec spec = random_spec(rng, n, 0.0);
    const Spectrum s = diagonalize(build_terms(spec).static_part());
    std::vector<double> classical;
    for (std::uint64_t c = 0; c < spec.dimension(); ++c) classical.push_back(classical_energy(spec.couplings, c));
    std::sort(classical.begin(), classical.end());
    for (std::size_t k = 0; k < classical.size(); ++k) EXPECT_NEAR(s.eigenvalues(k), classical[k], 1e-12);
  }
}

TEST(SpinModel, FlipSymmetryWithoutBreakerPairsEveryLevel) {
  Rng rng(15);
  const SpinChainSpec spec = random_spec(rng, 4, 0.0);
  const auto report = degeneracy_report(spec);
  EXPECT_EQ(report.pair_count, 8);
  EXPECT_EQ(report.min_gap, 0.0);
  for (double g : odd_level_gaps(gap_profile(diagonalize(build_terms(spec).static_part())))) EXPECT_LE(g, 1e-12);
}

TEST(SpinModel, SumBreakerLeavesThreePairsAtFourSpins) {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    EXPECT_EQ(degeneracy_report(random_spec(rng, 4, 1e-3, Breaker::FullSumZ)).pair_count, 3);
  }
}

TEST(SpinModel, SingleSiteBreakerRemovesDegeneracies) {
  Rng rng(17);
  for (int n : {4, 5, 6}) {
    const auto report = degeneracy_report(random_spec(rng, n));
    EXPECT_EQ(report.pair_count, 0);
    EXPECT_GT(report.min_gap, 1e-7);
    EXPECT_EQ(report.min_gap, report.min_nonzero_gap);
  }
}

TEST(SpinModel, DegeneracyReportRejectsNonPositiveTolerance) {
  Rng rng(18);
  EXPECT_THROW(degeneracy_report(random_spec(rng, 4), 0.0), std::invalid_argument);
}

TEST(SpinModel, OddGapsAreTwiceBetaForSeparatedFlipPairs) {
  // Flipping every spin leaves H0 unchanged and reverses sigma_1^z, so each
  // flip pair is split by exactly 2 beta.
  Rng rng(19);
  const double beta = 1e-3;
  const SpinChainSpec spec = random_spec(rng, 4, beta);
  const auto odd = odd_level_gaps(gap_profile(diagonalize(build_terms(spec).static_part())));
  ASSERT_EQ(odd.size(), 8u);
  for (double g : odd) EXPECT_NEAR(g, 2.0 * beta, 1e-12);
}

TEST(SpinModel, CanonicalSubspacesAtFourSpins) {
  const auto def = SubspaceDefinition::canonical(4);
  EXPECT_EQ(def.initial.first, 3);
  EXPECT_EQ(def.initial.last, 6);
  EXPECT_EQ(def.target.first, 11);
  EXPECT_EQ(def.target.last, 14);
  EXPECT_THROW(SubspaceDefinition::canonical(3), std::invalid_argument);

  const auto eight = SubspaceDefinition::canonical(8);
  EXPECT_EQ(eight.initial.first, 48);
  EXPECT_EQ(eight.initial.last, 96);
  EXPECT_EQ(eight.target.first, 176);
  EXPECT_EQ(eight.target.last, 224);
}

TEST(SpinModel, BoundaryStatesAreNormalizedAndOrthogonal) {
  Rng rng(20);
  for (int n : {4, 6}) {
    const SpinChainSpec spec = random_spec(rng, n);
    const Spectrum s = diagonalize(build_terms(spec).static_part());
    for (IndexBase base : {IndexBase::OneBased, IndexBase::ZeroBased}) {
      const BoundaryStates b = build_boundary_states(s, SubspaceDefinition::canonical(n, base));
      const double expected_c = 1.0 / std::sqrt(3.0 * (1 << n) / 16.0 + 1.0);
      EXPECT_NEAR(b.c_i, expected_c, 1e-15);
      EXPECT_NEAR(b.c_f, expected_c, 1e-15);
      EXPECT_NEAR(b.psi_i.norm(), 1.0, 1e-14);
      EXPECT_NEAR(b.psi_f.norm(), 1.0, 1e-14);
      EXPECT_LE(std::abs(b.psi_i.dot(b.psi_f)), 1e-14);
      EXPECT_LE((b.project_initial(b.psi_i) - b.psi_i).norm(), 1e-14);
      EXPECT_LE(b.project_target(b.psi_i).norm(), 1e-14);
    }
  }
}

TEST(SpinModel, IndexBaseShiftsTheSelectedLevels) {
  Rng rng(21);
  const Spectrum s = diagonalize(build_terms(random_spec(rng, 4)).static_part());
  const auto one = build_boundary_states(s, SubspaceDefinition::canonical(4, IndexBase::OneBased));
  const auto zero = build_boundary_states(s, SubspaceDefinition::canonical(4, IndexBase::ZeroBased));
  // One-based 3..6 is zero-based 2..5.
  EXPECT_LE((one.basis_i - s.eigenvectors.middleCols(2, 4)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((zero.basis_i - s.eigenvectors.middleCols(3, 4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SpinModel, BoundaryStatesRejectOverlapAndOutOfRange) {
  Rng rng(22);
  const Spectrum s = diagonalize(build_terms(random_spec(rng, 4)).static_part());
  SubspaceDefinition overlap{IndexBase::OneBased, {3, 8}, {8, 12}};
  EXPECT_THROW(build_boundary_states(s, overlap), std::invalid_argument);
  SubspaceDefinition outside{IndexBase::OneBased, {1, 2}, {15, 17}};
  EXPECT_THROW(build_boundary_states(s, outside), std::invalid_argument);
  SubspaceDefinition zero_index{IndexBase::OneBased, {0, 2}, {10, 12}};
  EXPECT_THROW(build_boundary_states(s, zero_index), std::invalid_argument);
}
