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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfim/harness/config.hpp"
#include "tfim/optimizers/common.hpp"
#include "tfim/optimizers/search.hpp"

namespace tfim {

/// Coupling draws shared by every scheme of a campaign. Trial r (1-based)
/// draws its N couplings uniformly on [-1, 1] from derive_seed(master, {r}),
/// so trial r is the same across campaigns with different n_trials, and its
/// first couplings agree across different N.
struct TrialSet {
  std::uint64_t master_seed = 0;
  int n_spins = 0;
  std::vector<std::vector<double>> couplings;  // couplings[r - 1]

  int n_trials() const { return static_cast<int>(couplings.size()); }
  std::uint64_t checksum() const;
  SpinChainSpec spec(int trial, const ModelSettings& model) const;
};

TrialSet draw_couplings(std::uint64_t master_seed, int n_trials, int n_spins);

ControlProblem make_trial_problem(const TrialSet& trials, int trial, double t_f, const ModelSettings& model);

struct SchemeOutcome {
  double best_fidelity = 0.0;
  long evaluations = 0;
  std::vector<double> params;
  long unconverged = 0;  // propagations that hit max_substeps
};

/// Runs one scheme on one problem. Scheme ids:
///   gauss     2D grid over (a, omega)
///   poly2     lambda_1, lambda_2 by grid (or random search, see config)
///   poly4     lambda_1..lambda_4 by random search
///   grape10, grape100   GRAPE with that many bins
///   dcrab10, dcrab100   dCRAB scored on that many bins
SchemeOutcome run_scheme(const ControlProblem& problem, const std::string& scheme, const ExperimentConfig& config,
                         std::uint64_t seed);

/// Per-cell seed: derive_seed(master, {trial, tf_index, hash_string(scheme)}).
std::uint64_t cell_seed(std::uint64_t master_seed, int trial, int tf_index, const std::string& scheme);

struct CampaignRecord {
  int trial = 0;
  int tf_index = 0;
  double t_f = 0.0;
  std::string scheme;
  double best_fidelity = 0.0;
  long evaluations = 0;
  double wall_s = 0.0;
  std::string status;  // ok | unconverged | error
  std::uint64_t checksum = 0;
  std::vector<double> params;
};

/// Header row of campaign CSVs, after the schema comment.
extern const char* const kCampaignHeader;

/// One CSV row, without newline.
std::string format_record(const CampaignRecord& record);
CampaignRecord parse_record(const std::string& line);

std::vector<CampaignRecord> read_campaign_csv(const std::filesystem::path& path);

struct CampaignOutcome {
  std::vector<CampaignRecord> records;  // ordered by (trial, tf, scheme)
  int failed = 0;
  int resumed = 0;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
};

/// Evaluates every (trial, t_f, scheme) cell on a bounded worker pool.
///
/// Each finished cell is written to out_dir/cells/ via an atomic rename. A
/// later call with the same config reuses those files, so an interrupted
/// campaign resumes where it stopped. The finalizer merges cells in order
/// into out_dir/campaign.csv and writes out_dir/manifest.json. A failing cell
/// is recorded with status `error` and the campaign continues.
CampaignOutcome run_campaign(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct LandscapeGrid {
  std::string x_name;
  std::string y_name;
  SearchBox box;
  std::vector<double> values;  // row-major, y fastest
  int trial = 0;
  std::string scheme;
  double t_f = 0.0;
  OptimizationResult best;
};

/// Full F surface for `gauss` (a, omega) or `poly2` (lambda_1, lambda_2).
LandscapeGrid landscape_sweep(const ControlProblem& problem, int trial, const std::string& scheme,
                              const SearchBox& box, const PropagationSettings& settings);

/// `# schema=tfim.landscape.v1 ...` then `x,y,F` rows.
void write_landscape_csv(std::ostream& out, const LandscapeGrid& grid);

struct ComparisonRow {
  int trial = 0;
  double t_f = 0.0;
  std::string scheme;
  double f_reference = 0.0;
  double f_other = 0.0;
  double delta = 0.0;  // f_reference - f_other
};

struct ComparisonSummary {
  double t_f = 0.0;
  std::string scheme;
  int n = 0;
  double median_delta = 0.0;
  double median_abs_delta = 0.0;
};

struct ComparisonRecord {
  std::string reference;
  std::vector<ComparisonRow> rows;
  std::vector<ComparisonSummary> summary;
};

/// Delta F against `reference` for every other record with the same (trial,
/// t_f). Throws std::invalid_argument if the records come from different
/// trial sets or a scheme lacks a cell the reference has.
ComparisonRecord compare_schemes(const std::vector<CampaignRecord>& records, const std::string& reference);

/// `trial,tf,scheme,F_ref,F_other,dF` rows.
void write_comparison_csv(std::ostream& out, const ComparisonRecord& comparison);
/// `tf,scheme,n,median_dF,median_abs_dF` rows.
void write_comparison_summary_csv(std::ostream& out, const ComparisonRecord& comparison);

double median(std::vector<double> xs);

}  // namespace tfim
