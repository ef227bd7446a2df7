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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tfim/dynamics.hpp"
#include "tfim/optimizers/dcrab.hpp"
#include "tfim/optimizers/grape.hpp"
#include "tfim/spin_model.hpp"

namespace tfim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelSettings {
  int n_spins = 4;
  double beta = 1e-3;
  Breaker breaker = Breaker::SingleSiteZ;
  IndexBase index_base = IndexBase::OneBased;
};

struct SchemeSettings {
  int gauss_resolution_a = 101;
  int gauss_resolution_omega = 101;
  int poly_resolution = 101;  // per axis, poly2 grid
  int poly_guesses = 1000;    // random searches
  bool poly2_random = false;  // poly2 by random search instead of the grid
  GrapeConfig grape{};        // n_bins is set by the scheme id
  DcrabConfig dcrab{};        // likewise
};

/// Everything a campaign depends on. Two configs with the same describe()
/// output produce the same campaign files.
struct ExperimentConfig {
  std::uint64_t master_seed = 20260101;
  int n_trials = 20;
  ModelSettings model{};
  std::vector<double> t_f{0.1, 1.0, 5.0};
  std::vector<std::string> schemes{"gauss"};
  PropagationSettings propagation{128, 1e-8, 65536, Integrator::CommutatorFree4, 0};
  SchemeSettings scheme{};
  int threads = 0;  // 0: one per hardware thread
  bool record_wall_time = false;

  ExperimentConfig();
  void validate() const;
};

/// Sets `section.key` from its text form. Throws ConfigError for unknown keys
/// and malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Every key with its current value, in a fixed order. Feeding these back
/// through apply_setting reproduces the config.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

/// False for settings that cannot change any output value (the thread count).
bool affects_results(std::string_view key);

/// Canonical text of describe() restricted to keys that affect results, one
/// `key = value` line each. Campaign cells and manifests depend only on this.
std::string config_text(const ExperimentConfig& config);

/// hash_string(config_text(config)).
std::uint64_t config_hash(const ExperimentConfig& config);

std::vector<std::string> known_schemes();

}  // namespace tfim
