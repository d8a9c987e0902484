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

#include "budgetbid/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "budgetbid/market.h"
#include "budgetbid/random.h"
#include "budgetbid/stats.h"
#include "budgetbid/value_iteration.h"

namespace budgetbid {
namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ToDouble(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double x = std::stod(value, &used);
    if (used == value.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("'{}' must be a number, got '{}'", key, value));
}

long long ToInteger(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const long long x = std::stoll(value, &used);
    if (used == value.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(
      fmt::format("'{}' must be an integer, got '{}'", key, value));
}

int ToCount(const std::string& key, const std::string& value, int min_value) {
  const long long x = ToInteger(key, value);
  if (x < min_value || x > 1'000'000'000) {
    throw ConfigError(
        fmt::format("'{}' must be an integer >= {}, got {}", key, min_value, x));
  }
  return static_cast<int>(x);
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError(
      fmt::format("'{}' must be true or false, got '{}'", key, value));
}

}  // namespace

ExperimentConfig ParseConfig(std::istream& in, const std::string& source,
                             const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  std::map<std::string, std::map<std::string, std::string>> policy_params;
  std::set<std::string> seen;
  bool have_policies = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value', got '{}'",
                                    source, line_no, text));
    }
    const std::string key = Trim(text.substr(0, eq));
    const std::string value = Trim(text.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(fmt::format("{}:{}: empty key", source, line_no));
    }
    if (!seen.insert(key).second) {
      throw ConfigError(
          fmt::format("{}:{}: duplicate key '{}'", source, line_no, key));
    }
    try {
      if (key == "mode") {
        if (value == "stochastic") {
          config.mode = MarketMode::kStochastic;
        } else if (value == "replay") {
          config.mode = MarketMode::kReplay;
        } else {
          throw ConfigError(fmt::format(
              "'mode' must be stochastic or replay, got '{}'", value));
        }
      } else if (key == "budget") {
        config.budget = ToCount(key, value, 0);
      } else if (key == "calibrate_f") {
        config.calibrate_f = ToDouble(key, value);
      } else if (key == "horizon") {
        config.horizon = ToCount(key, value, 1);
      } else if (key == "periods") {
        config.periods = ToCount(key, value, 1);
      } else if (key == "trials") {
        config.trials = ToCount(key, value, 1);
      } else if (key == "seed") {
        const long long s = ToInteger(key, value);
        if (s < 0) throw ConfigError("'seed' must be >= 0");
        config.seed = static_cast<uint64_t>(s);
      } else if (key == "ctr") {
        if (value == "auto") {
          config.ctr.reset();
        } else {
          config.ctr = ToDouble(key, value);
        }
      } else if (key == "paired") {
        config.paired = ToBool(key, value);
      } else if (key == "report_period") {
        config.report_period = ToCount(key, value, 0);
      } else if (key == "threads") {
        config.threads = ToCount(key, value, 0);
      } else if (key == "market.family") {
        config.market_family = value;
      } else if (key == "market.replay") {
        std::filesystem::path p(value);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        config.replay_path = p.lexically_normal().string();
      } else if (key.starts_with("market.")) {
        config.market_params[key.substr(7)] = ToDouble(key, value);
      } else if (key == "policies") {
        have_policies = true;
        for (const std::string& name : SplitList(value)) {
          PolicySpec spec;
          try {
            spec.name = CanonicalPolicyName(name);
          } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
          }
          for (const PolicySpec& other : config.policies) {
            if (other.name == spec.name) {
              throw ConfigError(
                  fmt::format("policy '{}' listed twice", spec.name));
            }
          }
          config.policies.push_back(spec);
        }
      } else if (key.starts_with("policy.")) {
        const std::string rest = key.substr(7);
        const size_t dot = rest.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == rest.size()) {
          throw ConfigError(fmt::format(
              "expected 'policy.<name>.<param>', got '{}'", key));
        }
        std::string name;
        try {
          name = CanonicalPolicyName(rest.substr(0, dot));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
        policy_params[name][rest.substr(dot + 1)] = value;
      } else {
        throw ConfigError(fmt::format("unknown key '{}'", key));
      }
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
  }
  if (!have_policies) {
    throw ConfigError(fmt::format("{}: missing 'policies'", source));
  }
  for (auto& [name, params] : policy_params) {
    auto it = std::find_if(
        config.policies.begin(), config.policies.end(),
        [&](const PolicySpec& s) { return s.name == name; });
    if (it == config.policies.end()) {
      throw ConfigError(fmt::format(
          "{}: parameters given for policy '{}' which is not in 'policies'",
          source, name));
    }
    it->params = params;
    try {
      ResolvePolicyParams(*it);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("{}: {}", source, e.what()));
    }
  }
  ValidateConfig(config);
  return config;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  }
  return ParseConfig(in, path.string(), path.parent_path());
}

void ValidateConfig(const ExperimentConfig& config) {
  if (config.policies.empty()) throw ConfigError("no policies configured");
  if (config.horizon < 1 || config.periods < 1 || config.trials < 1) {
    throw ConfigError("'horizon', 'periods' and 'trials' must be >= 1");
  }
  if ((config.budget && *config.budget < 0) || config.report_period < 0 ||
      config.threads < 0) {
    throw ConfigError("'budget', 'report_period' and 'threads' must be >= 0");
  }
  if (!config.budget &&
      !(config.calibrate_f > 0.0 && config.calibrate_f < 1.0)) {
    throw ConfigError("'calibrate_f' must be in (0, 1)");
  }
  if (config.ctr && !(*config.ctr > 0.0 && *config.ctr <= 1.0)) {
    throw ConfigError("'ctr' must be in (0, 1]");
  }
  const bool has_family = !config.market_family.empty();
  const bool has_replay = !config.replay_path.empty();
  if (has_family == has_replay) {
    throw ConfigError(
        "exactly one market source is required: market.family or "
        "market.replay");
  }
  if (config.mode == MarketMode::kStochastic) {
    if (!has_family) {
      throw ConfigError("stochastic mode needs market.family");
    }
    if (!config.ctr) {
      throw ConfigError("stochastic mode needs a numeric 'ctr'");
    }
    try {
      MakeFamily(config.market_family, config.market_params);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (config.report_period > config.periods) {
      throw ConfigError("'report_period' exceeds 'periods'");
    }
  } else {
    if (!has_replay) throw ConfigError("replay mode needs market.replay");
    if (!config.market_params.empty()) {
      throw ConfigError("market.<param> keys only apply to market.family");
    }
  }
  PolicyContext probe;
  probe.budget = 1;
  probe.true_pmf = PricePmf::PointMass(1);
  for (const PolicySpec& spec : config.policies) {
    try {
      MakePolicy(spec, probe);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

std::string EchoConfig(const ExperimentConfig& config) {
  std::string out;
  auto put = [&](const std::string& key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  put("mode", config.mode == MarketMode::kStochastic ? "stochastic" : "replay");
  if (config.budget) put("budget", std::to_string(*config.budget));
  put("calibrate_f", fmt::format("{}", config.calibrate_f));
  put("horizon", std::to_string(config.horizon));
  put("periods", std::to_string(config.periods));
  put("trials", std::to_string(config.trials));
  put("seed", std::to_string(config.seed));
  put("ctr", config.ctr ? fmt::format("{}", *config.ctr) : "auto");
  put("paired", config.paired ? "true" : "false");
  put("report_period", std::to_string(config.report_period));
  put("threads", std::to_string(config.threads));
  if (!config.market_family.empty()) {
    put("market.family", config.market_family);
    for (const auto& [k, v] : config.market_params) {
      put("market." + k, fmt::format("{}", v));
    }
  }
  if (!config.replay_path.empty()) {
    put("market.replay",
        std::filesystem::absolute(config.replay_path).lexically_normal().string());
  }
  std::string names;
  for (const PolicySpec& spec : config.policies) {
    names += (names.empty() ? "" : ", ") + spec.name;
  }
  put("policies", names);
  for (const PolicySpec& spec : config.policies) {
    for (const auto& [k, v] : ResolvePolicyParams(spec)) {
      put(fmt::format("policy.{}.{}", spec.name, k), v);
    }
  }
  return out;
}

namespace {

struct MarketSetup {
  std::optional<PricePmf> pmf;                     // stochastic
  std::shared_ptr<const ReplaySequence> sequence;  // replay
  double ctr = 1.0;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers; results are
// written by index so the output order never depends on scheduling.
void ParallelFor(int n, int threads, const std::function<void(int)>& fn) {
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  ValidateConfig(config);
  ExperimentResult result;
  result.config = config;

  MarketSetup setup;
  PricePmf reference_pmf = PricePmf::PointMass(1);
  if (config.mode == MarketMode::kStochastic) {
    setup.pmf = MakeFamily(config.market_family, config.market_params);
    setup.ctr = *config.ctr;
    reference_pmf = *setup.pmf;
  } else {
    try {
      setup.sequence =
          std::make_shared<const ReplaySequence>(LoadReplay(config.replay_path));
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
    setup.ctr = config.ctr ? *config.ctr : EmpiricalCtr(*setup.sequence);
    if (!(setup.ctr > 0.0)) {
      throw ConfigError("replay sequence contains no clicks");
    }
    reference_pmf = EmpiricalPmf(*setup.sequence);
    const PeriodSplit split =
        SplitPeriods(setup.sequence->entries.size(), config.horizon);
    const long long needed =
        static_cast<long long>(config.periods) * config.horizon;
    if (static_cast<long long>(setup.sequence->entries.size()) < needed) {
      result.warnings.push_back(fmt::format(
          "replay has {} auctions: {} full period(s){} instead of {}",
          setup.sequence->entries.size(), split.full_periods,
          split.truncated() ? " plus a truncated one" : "", config.periods));
    }
  }
  result.ctr = setup.ctr;

  if (config.budget) {
    result.budget = *config.budget;
  } else {
    const BudgetCalibration cal = CalibrateBudget(
        reference_pmf, config.horizon, config.calibrate_f, setup.ctr);
    if (!cal.reachable) {
      throw ConfigError(fmt::format(
          "calibration target f*T = {} is unreachable (at most {} clicks)",
          config.calibrate_f * config.horizon, cal.value));
    }
    result.budget = cal.budget;
    result.budget_calibrated = true;
  }

  double value = 0.0;
  if (config.mode == MarketMode::kStochastic) {
    value = Solve(reference_pmf, result.budget, config.horizon, setup.ctr)
                .Value(result.budget, config.horizon);
    if (!(value > 0.0)) {
      throw ConfigError(
          "V_p(B, T) is zero for this budget; competitive ratios undefined");
    }
    result.reference = value;
  }

  const int n_policies = static_cast<int>(config.policies.size());
  for (const PolicySpec& spec : config.policies) {
    result.policy_names.push_back(spec.name);
  }
  result.runs.assign(n_policies, std::vector<PolicyRun>(config.trials));

  ParallelFor(n_policies * config.trials, config.threads, [&](int job) {
    const int pi = job / config.trials;
    const int trial = job % config.trials;
    PolicyRun& run = result.runs[pi][trial];
    run.trial = trial + 1;
    run.market_seed = DeriveSeed(config.seed, trial + 1,
                                 config.paired ? 0 : 1 + pi);
    run.policy_seed = DeriveSeed(config.seed ^ 0x5eedULL, trial + 1, 1 + pi);

    PolicyContext ctx;
    ctx.budget = result.budget;
    ctx.horizon = config.horizon;
    ctx.ctr = setup.ctr;
    ctx.seed = run.policy_seed;
    ctx.true_pmf = reference_pmf;
    std::unique_ptr<BidPolicy> policy;
    try {
      policy = MakePolicy(config.policies[pi], ctx);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }

    std::unique_ptr<Market> market;
    if (config.mode == MarketMode::kStochastic) {
      market = std::make_unique<StochasticMarket>(*setup.pmf, setup.ctr,
                                                  run.market_seed);
    } else {
      market = std::make_unique<ReplayMarket>(setup.sequence);
    }
    run.logs = RunSimulation(*policy, *market, result.budget, config.horizon,
                             config.periods);
    if (config.mode == MarketMode::kStochastic) {
      run.ratios = PeriodRatios(run.logs, value);
    } else {
      int offline = 0;
      for (int c : OfflineOptimalPerPeriod(run.logs, result.budget)) {
        offline += c;
      }
      if (offline > 0) {
        run.ratios = CumulativeOfflineRatios(run.logs, result.budget);
      } else {
        run.ratios.assign(run.logs.size(), 0.0);
      }
    }
  });

  if (config.mode == MarketMode::kReplay) {
    int offline = 0;
    for (int c : OfflineOptimalPerPeriod(result.runs[0][0].logs, result.budget)) {
      offline += c;
    }
    if (offline <= 0) {
      throw std::runtime_error(
          "offline optimum is zero on this replay; ratios undefined");
    }
    result.reference = offline;
  }

  for (int pi = 0; pi < n_policies; ++pi) {
    PolicySummary s;
    s.policy = result.policy_names[pi];
    for (const PolicyRun& run : result.runs[pi]) {
      double r = 0.0;
      if (config.mode == MarketMode::kReplay) {
        r = run.ratios.empty() ? 0.0 : run.ratios.back();
      } else if (config.report_period == 0) {
        r = Mean(run.ratios);
      } else if (static_cast<int>(run.ratios.size()) >= config.report_period) {
        r = run.ratios[config.report_period - 1];
      }
      s.trial_ratios.push_back(r);
    }
    s.mean_ratio = Mean(s.trial_ratios);
    s.std_ratio = StdDev(s.trial_ratios);
    result.summary.push_back(std::move(s));
  }
  return result;
}

namespace {

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(
        fmt::format("cannot write '{}'", path.string()));
  }
  out << text;
  if (!out) {
    throw std::runtime_error(
        fmt::format("error writing '{}'", path.string()));
  }
}

}  // namespace

void EmitReports(const ExperimentResult& result,
                 const std::filesystem::path& out_dir) {
  if (result.runs.empty() || result.summary.empty() ||
      result.runs.front().empty()) {
    throw std::runtime_error("EmitReports: empty result, nothing written");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw std::runtime_error(
        fmt::format("cannot create output directory '{}'", out_dir.string()));
  }
  const ExperimentConfig& config = result.config;
  const bool replay = config.mode == MarketMode::kReplay;

  std::string summary = "policy,mean_ratio,std\n";
  for (const PolicySummary& s : result.summary) {
    summary += fmt::format("{},{:.4f},{:.4f}\n", s.policy, s.mean_ratio,
                           s.std_ratio);
  }

  // Mean ratio per period across trials.
  std::string periods = "policy,period,mean_ratio,std\n";
  for (size_t pi = 0; pi < result.runs.size(); ++pi) {
    size_t n_periods = 0;
    for (const PolicyRun& run : result.runs[pi]) {
      n_periods = std::max(n_periods, run.ratios.size());
    }
    for (size_t p = 0; p < n_periods; ++p) {
      std::vector<double> xs;
      for (const PolicyRun& run : result.runs[pi]) {
        if (p < run.ratios.size()) xs.push_back(run.ratios[p]);
      }
      periods += fmt::format("{},{},{:.6f},{:.6f}\n", result.policy_names[pi],
                             p + 1, Mean(xs), StdDev(xs));
    }
  }

  // Per-auction cumulative clicks averaged over trials, plus the offline
  // reference taken from the first policy's market draws.
  std::string curves = "policy,period,auction,cumulative_clicks,normalized\n";
  auto emit_curve = [&](const std::string& name,
                        const std::vector<std::vector<CurvePoint>>& per_trial,
                        bool offline) {
    size_t len = 0;
    for (const auto& c : per_trial) len = std::max(len, c.size());
    for (size_t i = 0; i < len; ++i) {
      double sum = 0.0;
      int n = 0, period = 0, auction = 0;
      for (const auto& c : per_trial) {
        if (i >= c.size()) continue;
        sum += offline ? c[i].offline_clicks : c[i].clicks;
        period = c[i].period;
        auction = c[i].auction;
        ++n;
      }
      const double mean = sum / n;
      curves += fmt::format("{},{},{},{:.6f},{:.6f}\n", name, period, auction,
                            mean, mean / auction);
    }
  };
  std::vector<std::vector<CurvePoint>> first_policy;
  for (size_t pi = 0; pi < result.runs.size(); ++pi) {
    std::vector<std::vector<CurvePoint>> per_trial;
    for (const PolicyRun& run : result.runs[pi]) {
      per_trial.push_back(
          ConvergenceCurve(run.logs, result.budget, config.horizon));
    }
    emit_curve(result.policy_names[pi], per_trial, false);
    if (pi == 0) first_policy = std::move(per_trial);
  }
  emit_curve("offline_optimal", first_policy, true);

  std::string ttest = "policy_a,policy_b,t_statistic,dof,p_value\n";
  for (size_t a = 0; a < result.summary.size(); ++a) {
    for (size_t b = a + 1; b < result.summary.size(); ++b) {
      const auto& xa = result.summary[a].trial_ratios;
      const auto& xb = result.summary[b].trial_ratios;
      if (xa.size() < 2 || xb.size() < 2) continue;
      const TTestResult t = WelchTTest(xa, xb);
      ttest += fmt::format("{},{},{:.6f},{:.3f},{:.6g}\n",
                           result.summary[a].policy, result.summary[b].policy,
                           t.statistic, t.dof, t.p_value);
    }
  }

  std::string seeds = "policy,trial,market_seed,policy_seed\n";
  for (size_t pi = 0; pi < result.runs.size(); ++pi) {
    for (const PolicyRun& run : result.runs[pi]) {
      seeds += fmt::format("{},{},{},{}\n", result.policy_names[pi], run.trial,
                           run.market_seed, run.policy_seed);
    }
  }

  std::string echo;
  echo += fmt::format("# budget = {}{}\n", result.budget,
                      result.budget_calibrated ? " (calibrated)" : "");
  echo += fmt::format("# ctr = {}\n", result.ctr);
  echo += fmt::format("# reference = {:.6f} ({})\n", result.reference,
                      replay ? "offline optimum O_k, per-period budget"
                             : "V_p(B, T)");
  echo += "# offline curve: completed periods at budget B, running period "
          "prefix at floor(B * j / T)\n";
  for (const std::string& w : result.warnings) echo += "# warning: " + w + "\n";
  echo += EchoConfig(config);

  WriteFile(out_dir / "summary.csv", summary);
  WriteFile(out_dir / "periods.csv", periods);
  WriteFile(out_dir / "curves.csv", curves);
  WriteFile(out_dir / "ttest.csv", ttest);
  WriteFile(out_dir / "seeds.csv", seeds);
  WriteFile(out_dir / "config.echo", echo);
}

}  // namespace budgetbid
