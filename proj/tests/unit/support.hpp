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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tfim/random.hpp"
#include "tfim/spin_model.hpp"

namespace tfim::testing_support {

inline SpinChainSpec random_spec(Rng& rng, int n, double beta = 1e-3, Breaker breaker = Breaker::SingleSiteZ) {
  SpinChainSpec spec{n, {}, beta, breaker};
  for (int i = 0; i < n; ++i) spec.couplings.push_back(rng.uniform(-1.0, 1.0));
  return spec;
}

// Dense operators assembled from Kronecker products, independent of the
// bit tricks in the library. Site 1 is the leftmost factor.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXd site_operator(const Eigen::MatrixXd& op, int site, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int s = 0; s < n; ++s) out = kron(out, s == site ? op : Eigen::MatrixXd::Identity(2, 2));
  return out;
}

inline Eigen::MatrixXd pauli_z() { return (Eigen::MatrixXd(2, 2) << 1, 0, 0, -1).finished(); }
inline Eigen::MatrixXd pauli_x() { return (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished(); }

inline Eigen::MatrixXd kron_h0(const SpinChainSpec& spec) {
  const int n = spec.n_spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) {
    h -= spec.couplings[i] * site_operator(pauli_z(), i, n) * site_operator(pauli_z(), (i + 1) % n, n);
  }
  return h;
}

inline Eigen::MatrixXd kron_h1(int n) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) h -= site_operator(pauli_x(), i, n);
  return h;
}

}  // namespace tfim::testing_support
