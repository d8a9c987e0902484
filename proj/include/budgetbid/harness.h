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

#ifndef BUDGETBID_HARNESS_H_
#define BUDGETBID_HARNESS_H_

#include <span>
#include <vector>

#include "budgetbid/market.h"
#include "budgetbid/policies.h"

namespace budgetbid {

struct AuctionRecord {
  int remaining = 0;  // t: auctions left in the period, including this one
  int bid = 0;
  AuctionOutcome outcome;
  AuctionFeedback feedback;
};

struct PeriodLog {
  int period_index = 0;  // 1-based
  int budget = 0;
  std::vector<AuctionRecord> auctions;
  int clicks = 0;
  int spend = 0;
  bool truncated = false;  // the market ran out before T auctions
};

// Runs `periods` periods of `horizon` auctions. Each period starts with a
// fresh `budget`; per auction the policy bids, the market resolves, the
// budget drops by the price paid and the policy observes the feedback.
//
// A bid outside [0, remaining budget] is a contract breach and throws
// std::logic_error. If the market runs dry the current period is kept as a
// truncated log and the run stops early.
std::vector<PeriodLog> RunSimulation(BidPolicy& policy, Market& market,
                                     int budget, int horizon, int periods);

// Offline optimum C*(x, B): most clicks any bidder with foresight could buy,
// i.e. the cheapest click-available auctions that fit in the budget.
int OfflineOptimal(std::span<const AuctionOutcome> outcomes, int budget);

// C* of each period's auctions with the period budget B.
std::vector<int> OfflineOptimalPerPeriod(const std::vector<PeriodLog>& logs,
                                         int budget);

// clicks / reference; throws std::invalid_argument when reference <= 0.
double CompetitiveRatio(double clicks, double reference);

// Stochastic mode: each period's clicks divided by V_p(B, T).
std::vector<double> PeriodRatios(const std::vector<PeriodLog>& logs,
                                 double value);

// Replay mode: cumulative clicks after each period divided by the sum of the
// per-period offline optima over the whole run (A_{k,p} / O_k).
std::vector<double> CumulativeOfflineRatios(const std::vector<PeriodLog>& logs,
                                            int budget);

struct CurvePoint {
  int period = 0;
  int auction = 0;  // global auction index, 1-based
  int clicks = 0;   // cumulative clicks of the policy
  double normalized = 0.0;
  int offline_clicks = 0;
  double offline_normalized = 0.0;
};

// Cumulative clicks after every auction, normalized by the auction count,
// next to the offline reference: completed periods contribute their full
// offline optimum and the running period its prefix optimum with the
// prorated budget floor(B * j / T) after j of its auctions.
std::vector<CurvePoint> ConvergenceCurve(const std::vector<PeriodLog>& logs,
                                         int budget, int horizon);

}  // namespace budgetbid

#endif  // BUDGETBID_HARNESS_H_
