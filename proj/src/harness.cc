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

#include "budgetbid/harness.h"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace budgetbid {

std::vector<PeriodLog> RunSimulation(BidPolicy& policy, Market& market,
                                     int budget, int horizon, int periods) {
  if (budget < 0) throw std::invalid_argument("RunSimulation: budget < 0");
  if (horizon < 1) throw std::invalid_argument("RunSimulation: horizon < 1");
  if (periods < 1) throw std::invalid_argument("RunSimulation: periods < 1");

  std::vector<PeriodLog> logs;
  for (int u = 1; u <= periods; ++u) {
    PeriodLog log;
    log.period_index = u;
    log.budget = budget;
    log.auctions.reserve(horizon);
    int remaining_budget = budget;
    policy.BeginPeriod(budget);
    for (int t = horizon; t >= 1; --t) {
      const std::optional<AuctionOutcome> outcome = market.Next();
      if (!outcome) {
        log.truncated = true;
        break;
      }
      const int bid = policy.NextBid(remaining_budget, t);
      if (bid < 0 || bid > remaining_budget) {
        throw std::logic_error(fmt::format(
            "policy {} bid {} with remaining budget {} (period {}, t={})",
            policy.name(), bid, remaining_budget, u, t));
      }
      const AuctionFeedback fb = ResolveAuction(*outcome, bid, remaining_budget);
      remaining_budget = fb.budget_after;
      log.spend += fb.price_paid;
      log.clicks += fb.click_won ? 1 : 0;
      log.auctions.push_back({t, bid, *outcome, fb});
      policy.Observe(fb);
    }
    policy.EndPeriod();
    const bool stop = log.truncated;
    if (!log.auctions.empty()) logs.push_back(std::move(log));
    if (stop) break;
  }
  return logs;
}

int OfflineOptimal(std::span<const AuctionOutcome> outcomes, int budget) {
  if (budget < 0) {
    throw std::invalid_argument(
        fmt::format("OfflineOptimal: budget must be >= 0, got {}", budget));
  }
  if (budget == 0) return 0;
  std::vector<int> prices;
  prices.reserve(outcomes.size());
  for (const AuctionOutcome& a : outcomes) {
    if (a.click_available) prices.push_back(a.market_price);
  }
  std::sort(prices.begin(), prices.end());
  long long spent = 0;
  int clicks = 0;
  for (int p : prices) {
    if (spent + p > budget) break;
    spent += p;
    ++clicks;
  }
  return clicks;
}

namespace {

std::vector<AuctionOutcome> Outcomes(const PeriodLog& log, size_t count) {
  std::vector<AuctionOutcome> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(log.auctions[i].outcome);
  return out;
}

}  // namespace

std::vector<int> OfflineOptimalPerPeriod(const std::vector<PeriodLog>& logs,
                                         int budget) {
  std::vector<int> result;
  result.reserve(logs.size());
  for (const PeriodLog& log : logs) {
    result.push_back(
        OfflineOptimal(Outcomes(log, log.auctions.size()), budget));
  }
  return result;
}

double CompetitiveRatio(double clicks, double reference) {
  if (!(reference > 0.0)) {
    throw std::invalid_argument(fmt::format(
        "CompetitiveRatio: reference must be positive, got {}", reference));
  }
  return clicks / reference;
}

std::vector<double> PeriodRatios(const std::vector<PeriodLog>& logs,
                                 double value) {
  std::vector<double> ratios;
  ratios.reserve(logs.size());
  for (const PeriodLog& log : logs) {
    ratios.push_back(CompetitiveRatio(log.clicks, value));
  }
  return ratios;
}

std::vector<double> CumulativeOfflineRatios(const std::vector<PeriodLog>& logs,
                                            int budget) {
  int offline = 0;
  for (int c : OfflineOptimalPerPeriod(logs, budget)) offline += c;
  std::vector<double> ratios;
  ratios.reserve(logs.size());
  int clicks = 0;
  for (const PeriodLog& log : logs) {
    clicks += log.clicks;
    ratios.push_back(CompetitiveRatio(clicks, offline));
  }
  return ratios;
}

std::vector<CurvePoint> ConvergenceCurve(const std::vector<PeriodLog>& logs,
                                         int budget, int horizon) {
  std::vector<CurvePoint> curve;
  int global = 0, clicks = 0, offline_done = 0;
  for (const PeriodLog& log : logs) {
    std::vector<AuctionOutcome> prefix;
    prefix.reserve(log.auctions.size());
    for (size_t j = 0; j < log.auctions.size(); ++j) {
      ++global;
      clicks += log.auctions[j].feedback.click_won ? 1 : 0;
      prefix.push_back(log.auctions[j].outcome);
      const int prorated = static_cast<int>(
          static_cast<long long>(budget) * static_cast<long long>(j + 1) /
          horizon);
      const int offline = offline_done + OfflineOptimal(prefix, prorated);
      curve.push_back({log.period_index, global, clicks,
                       static_cast<double>(clicks) / global, offline,
                       static_cast<double>(offline) / global});
    }
    offline_done += OfflineOptimal(prefix, budget);
  }
  return curve;
}

}  // namespace budgetbid
