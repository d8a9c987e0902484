// Copyright 2026 The Authors.
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

#ifndef BUDGETBID_EXPERIMENT_H_
#define BUDGETBID_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "budgetbid/harness.h"
#include "budgetbid/policies.h"
#include "budgetbid/price_pmf.h"

namespace budgetbid {

// Invalid experiment configuration (CLI exit status 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MarketMode { kStochastic, kReplay };

// Flat `key = value` configuration:
//
//   mode = stochastic | replay
//   budget = <int>              (omit to calibrate)
//   calibrate_f = 0.1           V(B, T) >= f * T
//   horizon = 100
//   periods = 10
//   trials = 20
//   seed = 1
//   ctr = 1.0 | auto            (auto: empirical click rate in replay mode)
//   paired = true               same market draws for every policy
//   report_period = 2           stochastic summary period; 0 = all periods
//   threads = 0                 0 = hardware concurrency
//   market.family = uniform     plus market.<param> = <number>
//   market.replay = <path>      replay file
//   policies = gpl, lueker, fps, qlearn, smoothing
//   policy.<name>.<param> = <value>
//
// Lines starting with '#' are comments.
struct ExperimentConfig {
  MarketMode mode = MarketMode::kStochastic;
  std::optional<int> budget;
  double calibrate_f = 0.1;
  int horizon = 100;
  int periods = 10;
  int trials = 20;
  uint64_t seed = 1;
  std::optional<double> ctr;  // nullopt = auto
  bool paired = true;
  int report_period = 2;
  int threads = 0;
  std::string market_family;
  FamilyParams market_params;
  std::string replay_path;
  std::vector<PolicySpec> policies;
};

// Both throw ConfigError with the offending line or key.
ExperimentConfig ParseConfig(std::istream& in, const std::string& source,
                             const std::filesystem::path& base_dir = {});
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Checks cross-field constraints; throws ConfigError.
void ValidateConfig(const ExperimentConfig& config);

// Canonical text of the configuration with every default spelled out.
// Feeding it back to ParseConfig yields the same configuration.
std::string EchoConfig(const ExperimentConfig& config);

struct PolicyRun {
  int trial = 0;
  uint64_t market_seed = 0;
  uint64_t policy_seed = 0;
  std::vector<PeriodLog> logs;
  // Stochastic: clicks_p / V_p(B, T). Replay: A_{k,p} / O_k.
  std::vector<double> ratios;
};

struct PolicySummary {
  std::string policy;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;
  std::vector<double> trial_ratios;
};

struct ExperimentResult {
  ExperimentConfig config;
  int budget = 0;
  bool budget_calibrated = false;
  double ctr = 1.0;
  // V_p(B, T) in stochastic mode; mean per-trial O_k in replay mode.
  double reference = 0.0;
  std::vector<std::string> policy_names;
  std::vector<std::vector<PolicyRun>> runs;  // [policy][trial]
  std::vector<PolicySummary> summary;
  std::vector<std::string> warnings;
};

// Runs every configured policy for every trial. Throws ConfigError for
// configuration problems discovered while resolving the market (unreadable
// replay file, unreachable calibration target) and std::runtime_error for
// failures during simulation.
ExperimentResult RunExperiment(const ExperimentConfig& config);

// Writes summary.csv, periods.csv, curves.csv, ttest.csv, seeds.csv and
// config.echo into out_dir (created if needed). Throws std::runtime_error
// when the result is empty or the directory is not writable; nothing is
// written in the empty case.
void EmitReports(const ExperimentResult& result,
                 const std::filesystem::path& out_dir);

}  // namespace budgetbid

#endif  // BUDGETBID_EXPERIMENT_H_
