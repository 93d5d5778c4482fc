// Copyright 2026 The schedq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCHEDQ_EXPERIMENTS_HPP_
#define SCHEDQ_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "schedq/perturbation.hpp"

namespace schedq {

inline constexpr std::string_view kVersion = "0.1.0";

// Master seed used whenever neither the config nor the command line sets one,
// so that bare runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 20260416;

// Validated experiment description. `knobs` holds every experiment-specific
// setting with all defaults filled in.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t replications = 1;
  PerturbationModel model = PerturbationModel::zero();
  double eps = 1e-10;
  nlohmann::json knobs = nlohmann::json::object();

  // Flat document: common fields plus knobs. Reparses to an equal config.
  nlohmann::json to_json() const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

// Names accepted in the "experiment" field.
const std::vector<std::string>& registered_experiments();

// Fills in defaults and validates. Throws ConfigError (validation kind).
ExperimentConfig parse_config(const nlohmann::json& doc);

// Strict JSON: duplicate keys and trailing content are parse errors.
// Throws ConfigError (parse kind).
nlohmann::json parse_json_strict(const std::string& text);

// Reads, parses and validates `path`. Every ConfigError message names the
// file and says whether it failed to load, to parse or to validate.
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::string cell;
  std::string stat;
  double value;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::int64_t n_reps;  // 0 for exact computations
};

struct ExperimentResult {
  std::string experiment;
  std::string anchor;  // the statement the experiment exercises
  nlohmann::json config;
  std::vector<ResultRow> rows;
  double wall_seconds = 0.0;  // reported only in the metadata sidecar

  // Header comments, the payload rows, then "# checksum: fnv1a64=<hex>".
  std::string to_csv() const;
  nlohmann::json to_json() const;
  // FNV-1a over the payload rows as they appear in the CSV.
  std::string checksum() const;
  // seed, version, wall time.
  nlohmann::json metadata() const;

  const ResultRow* find(std::string_view cell, std::string_view stat) const;
};

// Every run_* is deterministic in the config: `threads` (0 = all cores)
// changes only the wall time.
ExperimentResult run_covariance(const ExperimentConfig& config, int threads = 0);
ExperimentResult run_bernoulli_tails(const ExperimentConfig& config, int threads = 0);
ExperimentResult run_critical_loading(const ExperimentConfig& config, int threads = 0);
ExperimentResult run_heavy_traffic(const ExperimentConfig& config, int threads = 0);
ExperimentResult run_sg1_fclt(const ExperimentConfig& config, int threads = 0);
ExperimentResult run_limit_distribution(const ExperimentConfig& config, int threads = 0);
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 0);

}  // namespace schedq

#endif  // SCHEDQ_EXPERIMENTS_HPP_
