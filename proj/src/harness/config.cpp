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

#include "tfim/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

#include "tfim/io.hpp"
#include "tfim/random.hpp"

namespace tfim {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) {
    throw ConfigError(std::string(key) + ": not a number: '" + t + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) {
    throw ConfigError(std::string(key) + ": not an integer: '" + t + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + t + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string list_text(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_exact(xs[i]);
  return out;
}

struct Entry {
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define TFIM_DOUBLE(KEY, FIELD)                                                                      \
  Entry {                                                                                            \
    KEY, [](ExperimentConfig& c, std::string_view v) { c.FIELD = parse_double(KEY, v); },            \
        [](const ExperimentConfig& c) { return format_exact(c.FIELD); }                              \
  }
#define TFIM_INT(KEY, FIELD)                                                                         \
  Entry {                                                                                            \
    KEY, [](ExperimentConfig& c, std::string_view v) { c.FIELD = parse_int<int>(KEY, v); },          \
        [](const ExperimentConfig& c) { return std::to_string(c.FIELD); }                            \
  }
#define TFIM_BOOL(KEY, FIELD)                                                                        \
  Entry {                                                                                            \
    KEY, [](ExperimentConfig& c, std::string_view v) { c.FIELD = parse_bool(KEY, v); },              \
        [](const ExperimentConfig& c) { return bool_text(c.FIELD); }                                 \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      Entry{"trials.master_seed",
            [](ExperimentConfig& c, std::string_view v) {
              c.master_seed = parse_int<std::uint64_t>("trials.master_seed", v);
            },
            [](const ExperimentConfig& c) { return std::to_string(c.master_seed); }},
      TFIM_INT("trials.n_trials", n_trials),

      TFIM_INT("model.n_spins", model.n_spins),
      TFIM_DOUBLE("model.beta", model.beta),
      Entry{"model.breaker",
            [](ExperimentConfig& c, std::string_view v) {
              const std::string t = trim(v);
              if (t == "single") c.model.breaker = Breaker::SingleSiteZ;
              else if (t == "sum") c.model.breaker = Breaker::FullSumZ;
              else throw ConfigError("model.breaker: expected single or sum, got '" + t + "'");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.model.breaker == Breaker::SingleSiteZ ? "single" : "sum");
            }},
      Entry{"model.index_base",
            [](ExperimentConfig& c, std::string_view v) {
              const std::string t = trim(v);
              if (t == "one") c.model.index_base = IndexBase::OneBased;
              else if (t == "zero") c.model.index_base = IndexBase::ZeroBased;
              else throw ConfigError("model.index_base: expected one or zero, got '" + t + "'");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.model.index_base == IndexBase::OneBased ? "one" : "zero");
            }},

      Entry{"campaign.tf",
            [](ExperimentConfig& c, std::string_view v) {
              c.t_f.clear();
              for (const auto& piece : split_list(v)) c.t_f.push_back(parse_double("campaign.tf", piece));
            },
            [](const ExperimentConfig& c) { return list_text(c.t_f); }},
      Entry{"campaign.schemes", [](ExperimentConfig& c, std::string_view v) { c.schemes = split_list(v); },
            [](const ExperimentConfig& c) {
              std::string out;
              for (std::size_t i = 0; i < c.schemes.size(); ++i) out += (i ? "," : "") + c.schemes[i];
              return out;
            }},
      TFIM_INT("campaign.threads", threads),
      TFIM_BOOL("campaign.record_wall_time", record_wall_time),

      TFIM_INT("propagation.substeps", propagation.substeps),
      TFIM_DOUBLE("propagation.tol", propagation.convergence_tol),
      TFIM_INT("propagation.max_substeps", propagation.max_substeps),
      Entry{"propagation.method",
            [](ExperimentConfig& c, std::string_view v) {
              const std::string t = trim(v);
              if (t == "cf4") c.propagation.method = Integrator::CommutatorFree4;
              else if (t == "midpoint") c.propagation.method = Integrator::Midpoint;
              else throw ConfigError("propagation.method: expected cf4 or midpoint, got '" + t + "'");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.propagation.method == Integrator::CommutatorFree4 ? "cf4" : "midpoint");
            }},

      TFIM_INT("gauss.resolution_a", scheme.gauss_resolution_a),
      TFIM_INT("gauss.resolution_omega", scheme.gauss_resolution_omega),
      TFIM_INT("poly.resolution", scheme.poly_resolution),
      TFIM_INT("poly.guesses", scheme.poly_guesses),
      TFIM_BOOL("poly.poly2_random", scheme.poly2_random),

      TFIM_INT("grape.max_iterations", scheme.grape.max_iterations),
      TFIM_DOUBLE("grape.initial_step", scheme.grape.initial_step),
      TFIM_DOUBLE("grape.backtrack", scheme.grape.backtrack),
      TFIM_DOUBLE("grape.armijo", scheme.grape.armijo),
      TFIM_DOUBLE("grape.cost_target", scheme.grape.cost_target),
      TFIM_DOUBLE("grape.stagnation_tol", scheme.grape.stagnation_tol),
      TFIM_INT("grape.stagnation_window", scheme.grape.stagnation_window),
      TFIM_INT("grape.starts", scheme.grape.starts),
      TFIM_DOUBLE("grape.init_low", scheme.grape.init_low),
      TFIM_DOUBLE("grape.init_high", scheme.grape.init_high),

      TFIM_INT("dcrab.super_iterations", scheme.dcrab.super_iterations),
      TFIM_INT("dcrab.components", scheme.dcrab.components),
      TFIM_INT("dcrab.principal_max", scheme.dcrab.principal_max),
      TFIM_INT("dcrab.restarts", scheme.dcrab.restarts),
      TFIM_BOOL("dcrab.envelope", scheme.dcrab.envelope),
      TFIM_DOUBLE("dcrab.simplex_scale", scheme.dcrab.nelder_mead.simplex_scale),
      TFIM_DOUBLE("dcrab.x_tolerance", scheme.dcrab.nelder_mead.x_tolerance),
      TFIM_DOUBLE("dcrab.f_tolerance", scheme.dcrab.nelder_mead.f_tolerance),
      TFIM_INT("dcrab.max_evaluations", scheme.dcrab.nelder_mead.max_evaluations),
  };
  return table;
}

#undef TFIM_DOUBLE
#undef TFIM_INT
#undef TFIM_BOOL

}  // namespace

ExperimentConfig::ExperimentConfig() { scheme.dcrab.propagation = propagation; }

std::vector<std::string> known_schemes() {
  return {"gauss", "poly2", "poly4", "grape10", "grape100", "dcrab10", "dcrab100"};
}

void ExperimentConfig::validate() const {
  if (n_trials < 1) throw ConfigError("trials.n_trials must be >= 1");
  if (model.n_spins < 4) throw ConfigError("model.n_spins must be >= 4 for the canonical subspaces");
  SpinChainSpec probe{model.n_spins, std::vector<double>(model.n_spins, 0.0), model.beta, model.breaker};
  try {
    probe.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (t_f.empty()) throw ConfigError("campaign.tf must list at least one time");
  for (double t : t_f) {
    if (!(t > 0.0)) throw ConfigError("campaign.tf values must be positive");
  }
  if (schemes.empty()) throw ConfigError("campaign.schemes must list at least one scheme");
  const auto known = known_schemes();
  for (const auto& s : schemes) {
    if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown scheme '" + s + "'");
  }
  if (threads < 0) throw ConfigError("campaign.threads must be >= 0");
  if (propagation.substeps < 1 || propagation.max_substeps < propagation.substeps) {
    throw ConfigError("propagation: need 1 <= substeps <= max_substeps");
  }
  if (!(propagation.convergence_tol > 0.0)) throw ConfigError("propagation.tol must be positive");
  if (scheme.gauss_resolution_a < 1 || scheme.gauss_resolution_omega < 1 || scheme.poly_resolution < 1) {
    throw ConfigError("grid resolutions must be >= 1");
  }
  if (scheme.poly_guesses < 1) throw ConfigError("poly.guesses must be >= 1");
  try {
    scheme.grape.validate();
    scheme.dcrab.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  const std::string k = trim(key);
  for (const auto& e : entries()) {
    if (k == e.key) {
      e.set(config, value);
      config.scheme.dcrab.propagation = config.propagation;
      return;
    }
  }
  throw ConfigError("unknown config key '" + k + "'");
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : entries()) out.emplace_back(e.key, e.get(config));
  return out;
}

bool affects_results(std::string_view key) { return key != "campaign.threads"; }

std::string config_text(const ExperimentConfig& config) {
  std::ostringstream os;
  for (const auto& [k, v] : describe(config)) {
    if (affects_results(k)) os << k << " = " << v << '\n';
  }
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) { return hash_string(config_text(config)); }

}  // namespace tfim
