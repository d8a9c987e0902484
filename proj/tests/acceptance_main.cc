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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fmt/format.h"
#include "budgetbid/censored_estimation.h"
#include "budgetbid/experiment.h"
#include "budgetbid/harness.h"
#include "budgetbid/market.h"
#include "budgetbid/policies.h"
#include "budgetbid/price_pmf.h"
#include "budgetbid/random.h"
#include "budgetbid/stats.h"
#include "budgetbid/value_iteration.h"
#include "oracles.h"

namespace budgetbid {
namespace {

namespace fs = std::filesystem;
using testing::GridSearchMaxLogLikelihood;

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("budgetbid_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ObservationLog RandomLog(Rng& rng, int support_max, int max_samples,
                         bool allow_left) {
  ObservationLog log;
  const int n = static_cast<int>(rng.UniformInt(1, max_samples));
  for (int i = 0; i < n; ++i) {
    const int kind = static_cast<int>(rng.UniformInt(0, allow_left ? 2 : 1));
    if (kind == 0) {
      const int o = static_cast<int>(rng.UniformInt(1, support_max));
      const int k = static_cast<int>(rng.UniformInt(o + 1, support_max + 1));
      log.Append(CensoredSample::Direct(o, k));
    } else if (kind == 1) {
      log.Append(CensoredSample::RightCensored(
          static_cast<int>(rng.UniformInt(1, support_max + 1))));
    } else {
      log.Append(CensoredSample::LeftCensored(
          static_cast<int>(rng.UniformInt(2, support_max + 1))));
    }
  }
  return log;
}

Outcome DpMatchesEnumeration() {
  Rng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int support = static_cast<int>(rng.UniformInt(1, 6));
    const PricePmf pmf = testing::RandomPmf(rng, support, rng.Bernoulli(0.3));
    const int budget = static_cast<int>(rng.UniformInt(0, 6));
    const int horizon = static_cast<int>(rng.UniformInt(1, 4));
    const ValueTable table = Solve(pmf, budget, horizon);
    const double enumerated = testing::EnumerateExpectedClicks(
        pmf, budget, horizon,
        [&](int b, int t) { return table.BestBid(b, t); });
    worst = std::max(worst, std::abs(enumerated - table.Value(budget, horizon)));
  }
  return {worst <= 1e-9, fmt::format("50 instances, max |E - V| = {:.2e}", worst)};
}

Outcome ProductLimitIsMle() {
  Rng rng(202);
  double worst = -1e300;
  for (int i = 0; i < 100; ++i) {
    const int support = static_cast<int>(rng.UniformInt(1, 4));
    const ObservationLog log = RandomLog(rng, support, 6, false);
    const double grid = GridSearchMaxLogLikelihood(log, support, 100);
    worst = std::max(worst, grid - LogLikelihood(ProductLimit(log, support), log));
  }
  ObservationLog worked;
  worked.Append(CensoredSample::Direct(1, 3));
  worked.Append(CensoredSample::RightCensored(2));
  worked.Append(CensoredSample::Direct(2, 3));
  const PricePmf p = ProductLimit(worked, 2);
  const bool exact = std::abs(p.Mass(1) - 1.0 / 3.0) < 1e-12 &&
                     std::abs(p.Mass(2) - 2.0 / 3.0) < 1e-12;
  return {worst <= 1e-6 && exact,
          fmt::format("100 datasets, max(grid - estimator) = {:.2e}; worked "
                      "example ({:.6f}, {:.6f})",
                      worst, p.Mass(1), p.Mass(2))};
}

Outcome TurnbullReducesAndIsMle() {
  Rng rng(303);
  double worst_tv = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int support = static_cast<int>(rng.UniformInt(1, 12));
    const ObservationLog log = RandomLog(rng, support, 40, false);
    worst_tv = std::max(worst_tv,
                        testing::TotalVariation(Turnbull(log, support).pmf,
                                                ProductLimit(log, support)));
  }
  double worst_gap = -1e300;
  for (int i = 0; i < 100; ++i) {
    const int support = static_cast<int>(rng.UniformInt(1, 4));
    const ObservationLog log = RandomLog(rng, support, 6, true);
    const double grid = GridSearchMaxLogLikelihood(log, support, 100);
    worst_gap = std::max(worst_gap,
                         grid - LogLikelihood(Turnbull(log, support).pmf, log));
  }
  return {worst_tv <= 1e-6 && worst_gap <= 1e-6,
          fmt::format("right-censored max TV = {:.2e}; doubly-censored "
                      "max(grid - estimator) = {:.2e}",
                      worst_tv, worst_gap)};
}

struct SuiteEntry {
  const char* family;
  FamilyParams params;
};

std::vector<SuiteEntry> SyntheticSuite() {
  return {
      {"uniform", {{"lo", 1}, {"hi", 20}}},
      {"uniform", {{"lo", 5}, {"hi", 30}}},
      {"uniform", {{"lo", 3}, {"hi", 12}}},
      {"uniform", {{"lo", 10}, {"hi", 25}}},
      {"uniform", {{"lo", 2}, {"hi", 8}}},
      {"geometric", {{"ratio", 0.8}, {"support_max", 30}, {"lo", 1}}},
      {"geometric", {{"ratio", 0.85}, {"support_max", 25}, {"lo", 4}}},
      {"geometric", {{"ratio", 0.7}, {"support_max", 20}, {"lo", 2}}},
      {"geometric", {{"ratio", 0.9}, {"support_max", 40}, {"lo", 3}}},
      {"geometric", {{"ratio", 0.6}, {"support_max", 15}, {"lo", 5}}},
      {"bimodal_gap", {{"low", 2}, {"high", 20}, {"low_prob", 0.3}}},
      {"bimodal_gap", {{"low", 4}, {"high", 15}, {"low_prob", 0.5}}},
      {"bimodal_gap", {{"low", 6}, {"high", 30}, {"low_prob", 0.2}}},
      {"bimodal_gap", {{"low", 1}, {"high", 10}, {"low_prob", 0.25}}},
      {"bimodal_gap", {{"low", 3}, {"high", 9}, {"low_prob", 0.6}}},
      {"bursty",
       {{"lo", 3}, {"hi", 10}, {"spike_lo", 20}, {"spike_hi", 40},
        {"spike_prob", 0.1}}},
      {"bursty",
       {{"lo", 5}, {"hi", 15}, {"spike_lo", 25}, {"spike_hi", 50},
        {"spike_prob", 0.2}}},
      {"bursty",
       {{"lo", 1}, {"hi", 6}, {"spike_lo", 10}, {"spike_hi", 30},
        {"spike_prob", 0.15}}},
      {"bursty",
       {{"lo", 4}, {"hi", 8}, {"spike_lo", 12}, {"spike_hi", 20},
        {"spike_prob", 0.3}}},
      {"bursty",
       {{"lo", 2}, {"hi", 12}, {"spike_lo", 30}, {"spike_hi", 60},
        {"spike_prob", 0.05}}},
  };
}

Outcome SyntheticSuiteOrdering() {
  const std::vector<SuiteEntry> suite = SyntheticSuite();
  const std::vector<std::string> names = {"gpl", "lueker", "fps", "qlearn",
                                          "smoothing"};
  std::vector<double> mean(names.size(), 0.0);
  for (size_t i = 0; i < suite.size(); ++i) {
    ExperimentConfig c;
    c.market_family = suite[i].family;
    c.market_params = suite[i].params;
    c.ctr = 1.0;
    c.horizon = 100;
    c.periods = 2;
    c.trials = 20;
    c.calibrate_f = 0.1;
    c.report_period = 2;
    c.seed = 1000 + i;
    for (const std::string& n : names) c.policies.push_back({n, {}});
    ValidateConfig(c);
    const ExperimentResult r = RunExperiment(c);
    for (size_t p = 0; p < names.size(); ++p) {
      mean[p] += r.summary[p].mean_ratio / suite.size();
    }
  }
  const double gpl = mean[0], lueker = mean[1], fps = mean[2], q = mean[3],
               smoothing = mean[4];
  const bool pass = gpl >= 0.90 && gpl > lueker && gpl > fps && lueker > q &&
                    fps > q && q > smoothing;
  return {pass, fmt::format("suite means GPL {:.4f}, LuekerLearn {:.4f}, FPS "
                            "{:.4f}, Q-learn {:.4f}, Smoothing {:.4f}",
                            gpl, lueker, fps, q, smoothing)};
}

Outcome FixedPriceHalfOfOptimum() {
  Rng rng(505);
  int held = 0;
  for (int i = 0; i < 1000; ++i) {
    const int horizon = static_cast<int>(rng.UniformInt(1, 50));
    const int budget = static_cast<int>(rng.UniformInt(1, 100));
    const int top = static_cast<int>(rng.UniformInt(1, 2 * budget));
    std::vector<AuctionOutcome> x(horizon);
    for (auto& o : x) o = {static_cast<int>(rng.UniformInt(1, top)), true};
    const int optimum = OfflineOptimal(x, budget);
    int best = 0;
    for (int bid = 1; bid <= budget; ++bid) {
      best = std::max(best, testing::FixedPriceClicks(x, bid, budget));
    }
    if (best >= (optimum + 1) / 2) ++held;
  }
  return {held == 1000, fmt::format("{}/1000 sequences", held)};
}

Outcome LuekerGap() {
  const PricePmf pmf =
      MakeFamily("bimodal_gap", {{"low", 2}, {"high", 20}, {"low_prob", 0.2}});
  const int horizon = 100, periods = 200;
  const int budget = CalibrateBudget(pmf, horizon, 0.1, 1.0).budget;
  const double value = Solve(pmf, budget, horizon).Value(budget, horizon);
  auto mean_clicks = [&](BidPolicy& policy) {
    StochasticMarket market(pmf, 1.0, 6006);
    double total = 0.0;
    for (const PeriodLog& log :
         RunSimulation(policy, market, budget, horizon, periods)) {
      total += log.clicks;
    }
    return total / periods;
  };
  GreedyProductLimitOptions dp_options;
  dp_options.frozen = pmf;
  GreedyProductLimit dp(budget, horizon, dp_options);
  LuekerLearnOptions lueker_options;
  lueker_options.frozen = pmf;
  LuekerLearn lueker(budget, lueker_options);
  const double dp_ratio = mean_clicks(dp) / value;
  const double lueker_ratio = mean_clicks(lueker) / value;
  return {lueker_ratio <= 0.95 && dp_ratio >= 0.99,
          fmt::format("B={} T={} V={:.4f}; DP {:.4f}, Lueker {:.4f}, gap {:.4f}",
                      budget, horizon, value, dp_ratio, lueker_ratio,
                      dp_ratio - lueker_ratio)};
}

Outcome ReplayConvergence() {
  const fs::path dir = Scratch("replay");
  const int sequences = 20, periods = 10;
  std::vector<double> curve(periods, 0.0);
  for (int k = 0; k < sequences; ++k) {
    BurstyProcess process;
    process.base = PricePmf::Uniform(1, 20);
    const fs::path path = dir / fmt::format("seq{}.csv", k);
    {
      std::ofstream out(path);
      WriteReplay(GenerateSequence(process, 1000, 500 + k), out);
    }
    ExperimentConfig c;
    c.mode = MarketMode::kReplay;
    c.replay_path = path.string();
    c.ctr.reset();
    c.horizon = 100;
    c.periods = periods;
    c.trials = 1;
    c.policies = {{"greedy_product_limit", {}}};
    ValidateConfig(c);
    const ExperimentResult r = RunExperiment(c);
    for (int p = 0; p < periods; ++p) {
      curve[p] += r.runs[0][0].ratios[p] / sequences;
    }
  }
  std::vector<double> increments;
  for (int p = 1; p < periods; ++p) increments.push_back(curve[p] - curve[p - 1]);
  const double mean = Mean(increments);
  double spread = 0.0;
  for (double d : increments) spread = std::max(spread, std::abs(d - mean));
  std::string incs;
  for (double d : increments) incs += fmt::format(" {:.3f}", d);
  return {curve.back() >= 0.85 && spread <= 0.03,
          fmt::format("A/O at p=10 {:.4f}; increments{} (max deviation {:.4f})",
                      curve.back(), incs, spread)};
}

int SequenceClicks(BidPolicy& policy,
                   const std::shared_ptr<const ReplaySequence>& sequence,
                   int budget) {
  ReplayMarket market(sequence);
  int clicks = 0;
  for (const PeriodLog& log : RunSimulation(policy, market, budget, 100, 10)) {
    clicks += log.clicks;
  }
  return clicks;
}

Outcome VarianceCorrelation() {
  std::vector<double> ratio, spread;
  for (int k = 0; k < 100; ++k) {
    BurstyProcess process;
    process.base = MakeFamily(
        "bimodal_gap", {{"low", 2}, {"high", 3 + k / 3}, {"low_prob", 0.3}});
    const auto sequence = std::make_shared<const ReplaySequence>(
        GenerateSequence(process, 1000, 9000 + k));
    const int budget =
        CalibrateBudget(EmpiricalPmf(*sequence), 100, 0.1, 1.0).budget;
    GreedyProductLimit gpl(budget, 100);
    LuekerLearn lueker(budget);
    const int g = SequenceClicks(gpl, sequence, budget);
    const int l = SequenceClicks(lueker, sequence, budget);
    ratio.push_back(static_cast<double>(g) / std::max(l, 1));
    spread.push_back(PriceStdDev(*sequence));
  }
  const Correlation c = Pearson(spread, ratio);
  return {c.r > 0.0 && c.p_greater < 0.05,
          fmt::format("100 sequences, r = {:.4f}, one-sided p = {:.4g}", c.r,
                      c.p_greater)};
}

Outcome Determinism() {
  const fs::path dir = Scratch("determinism");
  BurstyProcess process;
  process.base = PricePmf::Uniform(1, 15);
  process.ctr = 0.5;
  {
    std::ofstream out(dir / "seq.csv");
    WriteReplay(GenerateSequence(process, 500, 77), out);
  }
  const std::string stochastic =
      "horizon = 50\nperiods = 3\ntrials = 3\nseed = 42\nctr = 0.7\n"
      "market.family = geometric\nmarket.ratio = 0.8\nmarket.support_max = 20\n"
      "policies = gpl, lueker, fps, qlearn, smoothing, fixed\n";
  const std::string replay =
      "mode = replay\nmarket.replay = " + (dir / "seq.csv").string() +
      "\nhorizon = 50\nperiods = 10\ntrials = 2\nseed = 42\nctr = auto\n"
      "policies = gpl, lueker, fps, qlearn, smoothing\n";
  int compared = 0, identical = 0;
  for (const auto& [name, text] :
       {std::pair{"stochastic", stochastic}, std::pair{"replay", replay}}) {
    for (const char* run : {"a", "b"}) {
      std::istringstream in(text);
      const ExperimentConfig c = ParseConfig(in, name);
      ValidateConfig(c);
      EmitReports(RunExperiment(c), dir / name / run);
    }
    for (const auto& entry : fs::directory_iterator(dir / name / "a")) {
      ++compared;
      const fs::path other = dir / name / "b" / entry.path().filename();
      if (fs::exists(other) && Slurp(entry.path()) == Slurp(other)) ++identical;
    }
  }
  return {compared == 12 && identical == compared,
          fmt::format("{}/{} output files byte-identical across re-runs",
                      identical, compared)};
}

}  // namespace
}  // namespace budgetbid

int main() {
  using budgetbid::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"1 dp-oracle-equivalence", budgetbid::DpMatchesEnumeration},
      {"2 product-limit-mle", budgetbid::ProductLimitIsMle},
      {"3 turnbull-reduction-and-mle", budgetbid::TurnbullReducesAndIsMle},
      {"4 synthetic-suite-ordering", budgetbid::SyntheticSuiteOrdering},
      {"5 fixed-price-half-of-optimum", budgetbid::FixedPriceHalfOfOptimum},
      {"6 lueker-gap", budgetbid::LuekerGap},
      {"7 replay-convergence", budgetbid::ReplayConvergence},
      {"8 variance-correlation", budgetbid::VarianceCorrelation},
      {"9 determinism", budgetbid::Determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (!outcome.pass) ++failed;
    std::cout << fmt::format("{} {}: {} [{:.1f} s]\n",
                             outcome.pass ? "PASS" : "FAIL", name,
                             outcome.detail, seconds)
              << std::flush;
  }
  return failed == 0 ? 0 : 1;
}
