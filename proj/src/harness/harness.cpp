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

#include "tfim/harness/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "tfim/io.hpp"
#include "tfim/optimizers/dcrab.hpp"
#include "tfim/optimizers/grape.hpp"
#include "tfim/random.hpp"

#ifndef TFIM_VERSION
#define TFIM_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace tfim {

namespace {

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc{} || end != s.data() + s.size()) throw std::invalid_argument("bad checksum field '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream is(s);
  while (std::getline(is, piece, sep)) out.push_back(piece);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

int bins_of(const std::string& scheme, const std::string& prefix) {
  return static_cast<int>(to_long(scheme.substr(prefix.size())));
}

}  // namespace

const char* const kCampaignHeader = "trial,tf,scheme,best_F,n_evals,wall_s,status,checksum,params";

std::uint64_t TrialSet::checksum() const {
  std::string text = std::to_string(master_seed) + ':' + std::to_string(n_spins);
  for (const auto& row : couplings) {
    text += '|';
    for (double j : row) text += format_exact(j) + ',';
  }
  return hash_string(text);
}

SpinChainSpec TrialSet::spec(int trial, const ModelSettings& model) const {
  if (trial < 1 || trial > n_trials()) throw std::out_of_range("trial index out of range");
  return SpinChainSpec{n_spins, couplings[trial - 1], model.beta, model.breaker};
}

TrialSet draw_couplings(std::uint64_t master_seed, int n_trials, int n_spins) {
  if (n_trials < 1) throw std::invalid_argument("draw_couplings: n_trials must be >= 1");
  if (n_spins < 2) throw std::invalid_argument("draw_couplings: n_spins must be >= 2");
  TrialSet set{master_seed, n_spins, {}};
  set.couplings.reserve(n_trials);
  for (int r = 1; r <= n_trials; ++r) {
    Rng rng(derive_seed(master_seed, {static_cast<std::uint64_t>(r)}));
    std::vector<double> j(n_spins);
    for (double& x : j) x = rng.uniform(-1.0, 1.0);
    set.couplings.push_back(std::move(j));
  }
  return set;
}

ControlProblem make_trial_problem(const TrialSet& trials, int trial, double t_f, const ModelSettings& model) {
  return make_problem(trials.spec(trial, model), t_f, SubspaceDefinition::canonical(model.n_spins, model.index_base));
}

std::uint64_t cell_seed(std::uint64_t master_seed, int trial, int tf_index, const std::string& scheme) {
  return derive_seed(master_seed,
                     {static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(tf_index), hash_string(scheme)});
}

SchemeOutcome run_scheme(const ControlProblem& problem, const std::string& scheme, const ExperimentConfig& config,
                         std::uint64_t seed) {
  const SchemeSettings& s = config.scheme;
  SchemeOutcome out;
  EvaluationStats stats;

  if (scheme == "gauss") {
    const auto objective = fidelity_objective(problem, gaussian_family(problem.t_f), config.propagation, &stats);
    const auto grid = grid_search(objective, gaussian_box(s.gauss_resolution_a, s.gauss_resolution_omega));
    out.best_fidelity = grid.best.best_fidelity;
    out.params = grid.best.best_params;
  } else if (scheme == "poly2" || scheme == "poly4") {
    const int n_lambda = scheme == "poly2" ? 2 : 4;
    const auto objective = fidelity_objective(problem, polynomial_family(problem.t_f), config.propagation, &stats);
    OptimizationResult best;
    if (n_lambda == 2 && !s.poly2_random) {
      best = grid_search(objective, polynomial_box(2, s.poly_resolution)).best;
    } else {
      best = random_search(objective, polynomial_box(n_lambda, 1), s.poly_guesses, seed);
    }
    out.best_fidelity = best.best_fidelity;
    out.params = best.best_params;
  } else if (scheme.rfind("grape", 0) == 0) {
    GrapeConfig grape = s.grape;
    grape.n_bins = bins_of(scheme, "grape");
    const GrapeResult r = grape_optimize(problem, grape, seed);
    out.best_fidelity = r.result.best_fidelity;
    out.params = r.result.best_params;
    out.evaluations = r.result.evaluations;
    return out;
  } else if (scheme.rfind("dcrab", 0) == 0) {
    DcrabConfig dcrab = s.dcrab;
    dcrab.n_bins = bins_of(scheme, "dcrab");
    const DcrabResult r = dcrab_optimize(problem, dcrab, seed);
    out.best_fidelity = r.result.best_fidelity;
    out.params = r.result.best_params;
    out.evaluations = r.result.evaluations;
    return out;
  } else {
    throw std::invalid_argument("unknown scheme '" + scheme + "'");
  }
  out.evaluations = stats.evaluations;
  out.unconverged = stats.unconverged;
  return out;
}

std::string format_record(const CampaignRecord& r) {
  std::string line = std::to_string(r.trial) + ',' + format_number(r.t_f) + ',' + r.scheme + ',' +
                     format_number(r.best_fidelity) + ',' + std::to_string(r.evaluations) + ',' +
                     format_number(r.wall_s) + ',' + r.status + ',' + hex64(r.checksum) + ',' +
                     join_numbers(r.params, ';');
  return line;
}

CampaignRecord parse_record(const std::string& line) {
  const auto fields = split(line, ',');
  if (fields.size() != 9) throw std::invalid_argument("campaign row needs 9 fields: '" + line + "'");
  CampaignRecord r;
  r.trial = static_cast<int>(to_long(fields[0]));
  r.t_f = to_double(fields[1]);
  r.scheme = fields[2];
  r.best_fidelity = to_double(fields[3]);
  r.evaluations = to_long(fields[4]);
  r.wall_s = to_double(fields[5]);
  r.status = fields[6];
  r.checksum = parse_hex64(fields[7]);
  if (!fields[8].empty()) {
    for (const auto& p : split(fields[8], ';')) r.params.push_back(to_double(p));
  }
  return r;
}

std::vector<CampaignRecord> read_campaign_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<CampaignRecord> out;
  std::string line;
  bool seen_header = false;
  bool seen_schema = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("schema=tfim.campaign.v1") != std::string::npos) seen_schema = true;
      continue;
    }
    if (!seen_header) {
      if (line != kCampaignHeader) throw std::runtime_error(path.string() + ": unexpected header");
      seen_header = true;
      continue;
    }
    out.push_back(parse_record(line));
  }
  if (!seen_schema) throw std::runtime_error(path.string() + ": missing schema tag tfim.campaign.v1");
  // tf_index is implied by the order of first appearance.
  std::vector<double> times;
  for (auto& r : out) {
    auto it = std::find(times.begin(), times.end(), r.t_f);
    if (it == times.end()) {
      times.push_back(r.t_f);
      it = times.end() - 1;
    }
    r.tf_index = static_cast<int>(it - times.begin());
  }
  return out;
}

CampaignOutcome run_campaign(const ExperimentConfig& config, const fs::path& out_dir) {
  config.validate();
  const TrialSet trials = draw_couplings(config.master_seed, config.n_trials, config.model.n_spins);
  const std::uint64_t checksum = trials.checksum();
  const std::string cfg_hash = hex64(config_hash(config));
  const fs::path cell_dir = out_dir / "cells";
  fs::create_directories(cell_dir);

  struct Cell {
    int trial;
    int tf_index;
    std::string scheme;
    std::uint64_t seed;
    fs::path file;
    CampaignRecord record;
    std::string error;
    bool resumed = false;
  };
  std::vector<Cell> cells;
  for (int r = 1; r <= config.n_trials; ++r) {
    for (int k = 0; k < static_cast<int>(config.t_f.size()); ++k) {
      for (const auto& scheme : config.schemes) {
        Cell c{r, k, scheme, cell_seed(config.master_seed, r, k, scheme), {}, {}, {}, false};
        c.file = cell_dir / ("r" + std::to_string(r) + "_t" + std::to_string(k) + "_" + scheme + ".csv");
        cells.push_back(std::move(c));
      }
    }
  }

  const std::string cell_schema = "# schema=tfim.cell.v1 config=" + cfg_hash;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Cell& c = cells[i];
    if (fs::exists(c.file)) {
      std::istringstream is(read_file(c.file));
      std::string schema, row;
      std::getline(is, schema);
      std::getline(is, row);
      if (schema == cell_schema && !row.empty()) {
        try {
          c.record = parse_record(row);
          c.record.tf_index = c.tf_index;
          c.resumed = true;
          continue;
        } catch (const std::exception&) {
          // Unreadable leftovers are recomputed.
        }
      }
    }
    pending.push_back(i);
  }

  auto work = [&](Cell& c) {
    CampaignRecord rec;
    rec.trial = c.trial;
    rec.tf_index = c.tf_index;
    rec.t_f = config.t_f[c.tf_index];
    rec.scheme = c.scheme;
    rec.checksum = checksum;
    const auto start = std::chrono::steady_clock::now();
    try {
      const ControlProblem problem = make_trial_problem(trials, c.trial, rec.t_f, config.model);
      const SchemeOutcome o = run_scheme(problem, c.scheme, config, c.seed);
      rec.best_fidelity = o.best_fidelity;
      rec.evaluations = o.evaluations;
      rec.params = o.params;
      rec.status = o.unconverged > 0 ? "unconverged" : "ok";
    } catch (const std::exception& e) {
      rec.best_fidelity = std::nan("");
      rec.status = "error";
      c.error = e.what();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.wall_s = config.record_wall_time ? wall : 0.0;
    c.record = rec;
    if (rec.status != "error") write_atomically(c.file, cell_schema + "\n" + format_record(rec) + "\n");
  };

  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(pending.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::mutex io_error_mutex;
  std::string io_error;
  auto worker = [&]() {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      try {
        work(cells[pending[i]]);
      } catch (const std::exception& e) {
        std::lock_guard lock(io_error_mutex);
        if (io_error.empty()) io_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!io_error.empty()) throw std::runtime_error("campaign output failed: " + io_error);

  CampaignOutcome outcome;
  std::string csv = "# schema=tfim.campaign.v1\n" + std::string(kCampaignHeader) + "\n";
  nlohmann::ordered_json cells_json = nlohmann::ordered_json::array();
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const Cell& c : cells) {
    csv += format_record(c.record) + "\n";
    outcome.records.push_back(c.record);
    if (c.resumed) ++outcome.resumed;
    cells_json.push_back({{"trial", c.trial},
                          {"tf_index", c.tf_index},
                          {"scheme", c.scheme},
                          {"seed", hex64(c.seed)},
                          {"status", c.record.status}});
    if (c.record.status == "error") {
      ++outcome.failed;
      failures.push_back({{"trial", c.trial}, {"tf_index", c.tf_index}, {"scheme", c.scheme}, {"message", c.error}});
    }
  }
  outcome.csv_path = out_dir / "campaign.csv";
  write_atomically(outcome.csv_path, csv);

  nlohmann::ordered_json manifest;
  manifest["schema"] = "tfim.manifest.v1";
  manifest["version"] = TFIM_VERSION;
  nlohmann::ordered_json echo;
  for (const auto& [k, v] : describe(config)) {
    if (affects_results(k)) echo[k] = v;
  }
  manifest["config"] = echo;
  manifest["config_hash"] = cfg_hash;
  manifest["master_seed"] = config.master_seed;
  manifest["seed_rule"] = "cell seed = derive_seed(master_seed, {trial, tf_index, fnv1a64(scheme)})";
  manifest["trial_set"] = {{"n_trials", trials.n_trials()},
                           {"n_spins", trials.n_spins},
                           {"checksum", hex64(checksum)},
                           {"couplings", trials.couplings}};
  manifest["cells"] = cells_json;
  manifest["failures"] = failures;
  manifest["files"] = {{"campaign.csv", {{"fnv1a64", hex64(hash_string(csv))}, {"rows", cells.size()}}}};
  outcome.manifest_path = out_dir / "manifest.json";
  write_atomically(outcome.manifest_path, manifest.dump(2) + "\n");
  return outcome;
}

LandscapeGrid landscape_sweep(const ControlProblem& problem, int trial, const std::string& scheme,
                              const SearchBox& box, const PropagationSettings& settings) {
  if (box.dims() != 2) throw std::invalid_argument("landscape_sweep: the box must be 2D");
  LandscapeGrid grid;
  PulseFactory factory;
  if (scheme == "gauss") {
    factory = gaussian_family(problem.t_f);
    grid.x_name = "a";
    grid.y_name = "omega";
  } else if (scheme == "poly2") {
    factory = polynomial_family(problem.t_f);
    grid.x_name = "lambda1";
    grid.y_name = "lambda2";
  } else {
    throw std::invalid_argument("landscape_sweep: scheme must be gauss or poly2");
  }
  const auto result = grid_search(fidelity_objective(problem, factory, settings), box);
  grid.box = box;
  grid.values = result.values;
  grid.best = result.best;
  grid.trial = trial;
  grid.scheme = scheme;
  grid.t_f = problem.t_f;
  return grid;
}

void write_landscape_csv(std::ostream& out, const LandscapeGrid& grid) {
  const int nx = grid.box.resolution[0];
  const int ny = grid.box.resolution[1];
  out << "# schema=tfim.landscape.v1 trial=" << grid.trial << " scheme=" << grid.scheme
      << " tf=" << format_number(grid.t_f) << " x=" << grid.x_name << " y=" << grid.y_name << " nx=" << nx
      << " ny=" << ny << '\n';
  out << "x,y,F\n";
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      out << format_number(grid.box.axis_value(0, i)) << ',' << format_number(grid.box.axis_value(1, j)) << ','
          << format_number(grid.values[static_cast<std::size_t>(i) * ny + j]) << '\n';
    }
  }
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty list");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

ComparisonRecord compare_schemes(const std::vector<CampaignRecord>& records, const std::string& reference) {
  if (records.empty()) throw std::invalid_argument("compare_schemes: no records");
  const std::uint64_t checksum = records.front().checksum;
  std::map<std::tuple<int, int, std::string>, const CampaignRecord*> index;
  std::vector<std::string> schemes;
  for (const auto& r : records) {
    if (r.checksum != checksum) throw std::invalid_argument("compare_schemes: records come from different trial sets");
    index[{r.trial, r.tf_index, r.scheme}] = &r;
    if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) schemes.push_back(r.scheme);
  }
  if (std::find(schemes.begin(), schemes.end(), reference) == schemes.end()) {
    throw std::invalid_argument("compare_schemes: reference scheme '" + reference + "' not present");
  }

  ComparisonRecord out;
  out.reference = reference;
  std::map<std::pair<int, std::string>, std::vector<double>> deltas;
  std::vector<std::pair<int, std::string>> order;
  std::map<int, double> tf_of;
  for (const auto& ref : records) {
    if (ref.scheme != reference) continue;
    for (const auto& scheme : schemes) {
      const auto it = index.find({ref.trial, ref.tf_index, scheme});
      if (it == index.end()) {
        throw std::invalid_argument("compare_schemes: scheme '" + scheme + "' lacks trial " +
                                    std::to_string(ref.trial) + " at tf " + format_number(ref.t_f));
      }
      const CampaignRecord& other = *it->second;
      if (ref.status == "error" || other.status == "error") {
        throw std::invalid_argument("compare_schemes: failed cell for trial " + std::to_string(ref.trial));
      }
      ComparisonRow row{ref.trial, ref.t_f, scheme, ref.best_fidelity, other.best_fidelity,
                        ref.best_fidelity - other.best_fidelity};
      out.rows.push_back(row);
      const std::pair<int, std::string> key{ref.tf_index, scheme};
      if (!deltas.count(key)) order.push_back(key);
      deltas[key].push_back(row.delta);
      tf_of[ref.tf_index] = ref.t_f;
    }
  }
  for (const auto& key : order) {
    const auto& d = deltas[key];
    std::vector<double> abs_d(d.size());
    std::transform(d.begin(), d.end(), abs_d.begin(), [](double x) { return std::abs(x); });
    out.summary.push_back(
        ComparisonSummary{tf_of[key.first], key.second, static_cast<int>(d.size()), median(d), median(abs_d)});
  }
  return out;
}

void write_comparison_csv(std::ostream& out, const ComparisonRecord& c) {
  out << "# schema=tfim.compare.v1 reference=" << c.reference << '\n';
  out << "trial,tf,scheme,F_ref,F_other,dF\n";
  for (const auto& r : c.rows) {
    out << r.trial << ',' << format_number(r.t_f) << ',' << r.scheme << ',' << format_number(r.f_reference) << ','
        << format_number(r.f_other) << ',' << format_number(r.delta) << '\n';
  }
}

void write_comparison_summary_csv(std::ostream& out, const ComparisonRecord& c) {
  out << "# schema=tfim.compare_summary.v1 reference=" << c.reference << '\n';
  out << "tf,scheme,n,median_dF,median_abs_dF\n";
  for (const auto& s : c.summary) {
    out << format_number(s.t_f) << ',' << s.scheme << ',' << s.n << ',' << format_number(s.median_delta) << ','
        << format_number(s.median_abs_delta) << '\n';
  }
}

}  // namespace tfim
