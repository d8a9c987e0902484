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

#ifndef BUDGETBID_VALUE_ITERATION_H_
#define BUDGETBID_VALUE_ITERATION_H_

#include <functional>
#include <vector>

#include "budgetbid/price_pmf.h"

namespace budgetbid {

// Optimal expected clicks V(b, t) and the optimal bid pi(b, t) for every
// remaining budget b in [0, B] and remaining auction count t in [0, T].
class ValueTable {
 public:
  int budget_cap() const { return budget_cap_; }
  int horizon() const { return horizon_; }
  double ctr() const { return ctr_; }

  // Both throw std::out_of_range outside [0, B] x [0, T].
  double Value(int b, int t) const;
  int BestBid(int b, int t) const;

 private:
  friend ValueTable Solve(const PricePmf& pmf, int budget, int horizon,
                          double ctr);

  size_t Index(int b, int t) const;

  int budget_cap_ = 0;
  int horizon_ = 0;
  double ctr_ = 1.0;
  std::vector<double> values_;  // row-major in t
  std::vector<int> policy_;
};

// Exact finite-horizon dynamic program. With click-through rate r, bidding a
// from (b, t) is worth
//
//   sum_{d <= a} r p(d) [1 + V(b - d, t - 1)]
//     + (1 - r sum_{d <= a} p(d)) V(b, t - 1)
//
// and V(b, t) is the maximum over a in [0, b]. The inner sum is accumulated
// incrementally in a, so the whole table costs O(B^2 T). Ties (within 1e-12
// relative) resolve to the smallest bid, except that a bid of 0 loses a tie
// to the smallest tied bid a with p(a) > 0.
//
// Requires budget >= 0, horizon >= 0 and 0 < ctr <= 1; otherwise throws
// std::invalid_argument.
ValueTable Solve(const PricePmf& pmf, int budget, int horizon,
                 double ctr = 1.0);

struct BudgetCalibration {
  int budget = 0;
  // False when no finite budget reaches the target; `budget` is then T * S.
  bool reachable = true;
  double value = 0.0;  // V(budget, T)
};

// Smallest B with V(B, T) >= fraction * T, by exponential then binary search
// over B (V is non-decreasing in B).
BudgetCalibration CalibrateBudget(const PricePmf& pmf, int horizon,
                                  double fraction, double ctr = 1.0);

// Largest v <= min(b, S) with sum_{a=1}^{v} a p(a) <= b / t: the bid whose
// expected per-auction spend fits the remaining budget smoothed over the
// remaining auctions. Zero when b == 0.
int LuekerThreshold(const PricePmf& pmf, int b, int t);

// Expected clicks collected from (budget, horizon) when bidding
// bid_rule(b, t) in every state. The rule must return a bid in [0, b].
double EvaluatePolicy(const PricePmf& pmf, int budget, int horizon, double ctr,
                      const std::function<int(int, int)>& bid_rule);

}  // namespace budgetbid

#endif  // BUDGETBID_VALUE_ITERATION_H_
