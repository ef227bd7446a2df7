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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tfim/harness/config.hpp"
#include "tfim/harness/harness.hpp"

using namespace tfim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tfim_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.n_trials = 2;
  c.t_f = {0.1, 0.5};
  c.schemes = {"gauss", "grape10"};
  c.scheme.gauss_resolution_a = 3;
  c.scheme.gauss_resolution_omega = 3;
  c.scheme.grape.max_iterations = 5;
  c.scheme.grape.starts = 1;
  c.threads = 1;
  return c;
}

}  // namespace

TEST(Config, DescribeRoundTrips) {
  ExperimentConfig a;
  apply_setting(a, "grape.starts", "3");
  apply_setting(a, "campaign.tf", "0.1, 2.5");
  apply_setting(a, "campaign.schemes", "gauss,dcrab100");
  apply_setting(a, "model.breaker", "sum");
  ExperimentConfig b;
  for (const auto& [k, v] : describe(a)) apply_setting(b, k, v);
  EXPECT_EQ(config_text(a), config_text(b));
  EXPECT_EQ(b.scheme.grape.starts, 3);
  EXPECT_EQ(b.t_f, (std::vector<double>{0.1, 2.5}));
  EXPECT_EQ(b.model.breaker, Breaker::FullSumZ);
  EXPECT_NE(config_hash(a), config_hash(ExperimentConfig{}));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  ExperimentConfig c;
  EXPECT_THROW(apply_setting(c, "grape.speed", "1"), ConfigError);
  EXPECT_THROW(apply_setting(c, "grape.starts", "three"), ConfigError);
  EXPECT_THROW(apply_setting(c, "model.breaker", "both"), ConfigError);
  EXPECT_THROW(apply_setting(c, "campaign.record_wall_time", "maybe"), ConfigError);
  c.schemes = {"simplex"};
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.t_f = {1.0, -1.0};
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.scheme.dcrab.super_iterations = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
}

TEST(Trials, DeterministicAndInRange) {
  const TrialSet a = draw_couplings(42, 5, 4);
  const TrialSet b = draw_couplings(42, 5, 4);
  EXPECT_EQ(a.couplings, b.couplings);
  EXPECT_EQ(a.checksum(), b.checksum());
  EXPECT_NE(a.checksum(), draw_couplings(43, 5, 4).checksum());
  for (const auto& row : a.couplings) {
    ASSERT_EQ(row.size(), 4u);
    for (double j : row) {
      EXPECT_GE(j, -1.0);
      EXPECT_LE(j, 1.0);
    }
  }
  // Trial r does not depend on how many trials were drawn, and N = 8 extends N = 4.
  const TrialSet longer = draw_couplings(42, 9, 8);
  for (int r = 0; r < 5; ++r) {
    for (int i = 0; i < 4; ++i) EXPECT_EQ(longer.couplings[r][i], a.couplings[r][i]);
  }
  EXPECT_THROW(draw_couplings(1, 0, 4), std::invalid_argument);
}

TEST(Trials, EmpiricalMeanIsNearZero) {
  const TrialSet t = draw_couplings(7, 2500, 4);
  double sum = 0.0;
  for (const auto& row : t.couplings)
    for (double j : row) sum += j;
  EXPECT_NEAR(sum / 1e4, 0.0, 0.05);
}

TEST(Records, FormatParseRoundTrip) {
  CampaignRecord r{3, 0, 0.1, "grape10", 0.123456789012345, 77, 0.0, "ok", 0xdeadbeefULL, {1.5, -2.25}};
  const CampaignRecord back = parse_record(format_record(r));
  EXPECT_EQ(back.trial, 3);
  EXPECT_EQ(back.scheme, "grape10");
  EXPECT_NEAR(back.best_fidelity, r.best_fidelity, 1e-12);
  EXPECT_EQ(back.checksum, r.checksum);
  EXPECT_EQ(back.params, r.params);
  EXPECT_EQ(format_record(back), format_record(r));
  EXPECT_THROW(parse_record("1,2,3"), std::invalid_argument);
}

TEST(Campaign, SingleCellMatchesGridSearch) {
  ExperimentConfig c = tiny_config();
  c.n_trials = 1;
  c.t_f = {0.1};
  c.schemes = {"gauss"};
  const auto out = run_campaign(c, fresh_dir("single"));
  ASSERT_EQ(out.records.size(), 1u);

  const TrialSet trials = draw_couplings(c.master_seed, 1, 4);
  const ControlProblem p = make_trial_problem(trials, 1, 0.1, c.model);
  const auto grid = grid_search(fidelity_objective(p, gaussian_family(0.1), c.propagation), gaussian_box(3, 3));
  EXPECT_EQ(out.records[0].best_fidelity, grid.best.best_fidelity);
  EXPECT_EQ(out.records[0].params, grid.best.best_params);
  EXPECT_EQ(out.records[0].status, "ok");
  EXPECT_EQ(out.records[0].wall_s, 0.0);
  EXPECT_EQ(out.records[0].checksum, trials.checksum());

  const auto csv = read_campaign_csv(out.csv_path);
  ASSERT_EQ(csv.size(), 1u);
  EXPECT_EQ(format_record(csv[0]), format_record(out.records[0]));
}

TEST(Campaign, RerunResumeAndThreadsGiveIdenticalFiles) {
  const ExperimentConfig c = tiny_config();
  const fs::path a = fresh_dir("a");
  const auto first = run_campaign(c, a);
  EXPECT_EQ(first.records.size(), 8u);
  EXPECT_EQ(first.failed, 0);
  const std::string csv = slurp(first.csv_path);
  const std::string manifest = slurp(first.manifest_path);

  // Ordered by (trial, tf, scheme).
  EXPECT_EQ(first.records[1].scheme, "grape10");
  EXPECT_EQ(first.records[2].tf_index, 1);
  EXPECT_EQ(first.records[4].trial, 2);

  // Fresh directory, same config.
  const auto again = run_campaign(c, fresh_dir("b"));
  EXPECT_EQ(slurp(again.csv_path), csv);
  EXPECT_EQ(slurp(again.manifest_path), manifest);

  // Interrupted campaign: drop some cells and resume.
  fs::remove(a / "cells" / "r2_t0_grape10.csv");
  fs::remove(a / "cells" / "r1_t1_gauss.csv");
  fs::remove(a / "campaign.csv");
  const auto resumed = run_campaign(c, a);
  EXPECT_EQ(resumed.resumed, 6);
  EXPECT_EQ(slurp(resumed.csv_path), csv);
  EXPECT_EQ(slurp(resumed.manifest_path), manifest);

  ExperimentConfig threaded = c;
  threaded.threads = 3;
  const auto parallel = run_campaign(threaded, fresh_dir("c"));
  EXPECT_EQ(slurp(parallel.csv_path), csv);
  EXPECT_EQ(slurp(parallel.manifest_path), manifest);
  // The thread count does not invalidate finished cells.
  EXPECT_EQ(run_campaign(threaded, a).resumed, 8);
}

TEST(Campaign, ChangedConfigInvalidatesCells) {
  ExperimentConfig c = tiny_config();
  c.n_trials = 1;
  c.t_f = {0.1};
  const fs::path dir = fresh_dir("invalidate");
  run_campaign(c, dir);
  c.scheme.gauss_resolution_a = 2;
  const auto out = run_campaign(c, dir);
  EXPECT_EQ(out.resumed, 0);
}

TEST(Campaign, FailingCellsAreRecordedAndSkipped) {
  ExperimentConfig c = tiny_config();
  c.n_trials = 1;
  c.t_f = {0.1, 1e300};  // the second time cannot be propagated
  const auto out = run_campaign(c, fresh_dir("fail"));
  ASSERT_EQ(out.records.size(), 4u);
  EXPECT_EQ(out.failed, 2);
  EXPECT_EQ(out.records[0].status, "ok");
  EXPECT_EQ(out.records[2].status, "error");
  EXPECT_TRUE(std::isnan(out.records[2].best_fidelity));
  EXPECT_NE(slurp(out.manifest_path).find("\"failures\""), std::string::npos);
}

TEST(Landscape, SmallGridMatchesGridSearch) {
  const TrialSet trials = draw_couplings(5, 1, 4);
  const ControlProblem p = make_trial_problem(trials, 1, 0.1, ModelSettings{});
  const SearchBox box = gaussian_box(2, 2);
  PropagationSettings s;
  s.convergence_tol = 1e-8;
  const LandscapeGrid g = landscape_sweep(p, 1, "gauss", box, s);
  ASSERT_EQ(g.values.size(), 4u);
  const auto direct = grid_search(fidelity_objective(p, gaussian_family(0.1), s), box);
  EXPECT_EQ(g.best.best_fidelity, direct.best.best_fidelity);
  for (double f : g.values) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }

  std::ostringstream os;
  write_landscape_csv(os, g);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# schema=tfim.landscape.v1 trial=1 scheme=gauss", 0), 0u);
  std::getline(is, line);
  EXPECT_EQ(line, "x,y,F");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);

  EXPECT_THROW(landscape_sweep(p, 1, "grape10", box, s), std::invalid_argument);
  EXPECT_THROW(landscape_sweep(p, 1, "gauss", SearchBox{{0}, {1}, {2}}, s), std::invalid_argument);
}

TEST(Compare, SelfComparisonIsZeroAndMismatchesThrow) {
  std::vector<CampaignRecord> records;
  for (int r = 1; r <= 3; ++r) {
    records.push_back({r, 0, 0.1, "dcrab100", 0.2 * r, 1, 0, "ok", 9, {}});
    records.push_back({r, 0, 0.1, "gauss", 0.25 * r, 1, 0, "ok", 9, {}});
  }
  const ComparisonRecord cmp = compare_schemes(records, "dcrab100");
  ASSERT_EQ(cmp.rows.size(), 6u);
  for (const auto& row : cmp.rows) {
    EXPECT_GE(row.delta, -1.0);
    EXPECT_LE(row.delta, 1.0);
    if (row.scheme == "dcrab100") EXPECT_EQ(row.delta, 0.0);
  }
  ASSERT_EQ(cmp.summary.size(), 2u);
  EXPECT_EQ(cmp.summary[0].median_delta, 0.0);
  EXPECT_NEAR(cmp.summary[1].median_delta, -0.1, 1e-15);
  EXPECT_NEAR(cmp.summary[1].median_abs_delta, 0.1, 1e-15);

  auto mixed = records;
  mixed[3].checksum = 10;
  EXPECT_THROW(compare_schemes(mixed, "dcrab100"), std::invalid_argument);
  auto missing = records;
  missing.pop_back();
  EXPECT_THROW(compare_schemes(missing, "dcrab100"), std::invalid_argument);
  EXPECT_THROW(compare_schemes(records, "grape100"), std::invalid_argument);
}

TEST(Compare, Median) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}
