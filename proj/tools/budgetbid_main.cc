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

// Command-line experiment runner.
//
//   budgetbid run <config> [--out DIR] [--seed N] [--trials N]
//   budgetbid generate --family NAME [--param k=v ...] --length N --out FILE
//
// Exit status: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "budgetbid/experiment.h"
#include "budgetbid/market.h"
#include "budgetbid/price_pmf.h"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int Run(const std::string& config_path, const std::string& out_dir,
        std::optional<uint64_t> seed, std::optional<int> trials) {
  budgetbid::ExperimentConfig config;
  try {
    config = budgetbid::LoadConfig(config_path);
    if (seed) config.seed = *seed;
    if (trials) config.trials = *trials;
    budgetbid::ValidateConfig(config);
  } catch (const budgetbid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    const budgetbid::ExperimentResult result =
        budgetbid::RunExperiment(config);
    for (const std::string& w : result.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
    budgetbid::EmitReports(result, out_dir);
    std::cout << fmt::format("budget {}  reference {:.4f}\n", result.budget,
                             result.reference);
    for (const budgetbid::PolicySummary& s : result.summary) {
      std::cout << fmt::format("{:<22} {:.4f} +- {:.4f}\n", s.policy,
                               s.mean_ratio, s.std_ratio);
    }
  } catch (const budgetbid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}

int Generate(const std::string& family, const std::vector<std::string>& params,
             double ctr, int length, uint64_t seed, const std::string& out) {
  budgetbid::BurstyProcess process{budgetbid::PricePmf::PointMass(1), ctr};
  try {
    budgetbid::FamilyParams fp;
    for (const std::string& kv : params) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("expected key=value, got '" + kv + "'");
      }
      fp[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    process.base = budgetbid::MakeFamily(family, fp);
    if (!(ctr > 0.0 && ctr <= 1.0)) {
      throw std::invalid_argument("--ctr must be in (0, 1]");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write '" << out << "'\n";
    return kRuntimeError;
  }
  budgetbid::WriteReplay(budgetbid::GenerateSequence(process, length, seed),
                         file);
  return file ? 0 : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained bidding experiments"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  std::string out_dir = "out";
  std::optional<uint64_t> seed;
  std::optional<int> trials;
  run->add_option("config", config_path, "Experiment config file")
      ->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--trials", trials, "Override the number of trials")
      ->check(CLI::PositiveNumber);

  CLI::App* gen =
      app.add_subcommand("generate", "Write a synthetic bursty replay file");
  std::string family = "uniform";
  std::vector<std::string> params;
  double ctr = 1.0;
  int length = 1000;
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--family", family, "Base price family");
  gen->add_option("--param", params, "Family parameter key=value");
  gen->add_option("--ctr", ctr, "Click probability");
  gen->add_option("--length", length, "Number of auctions")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out", gen_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (*run) return Run(config_path, out_dir, seed, trials);
  return Generate(family, params, ctr, length, gen_seed, gen_out);
}
