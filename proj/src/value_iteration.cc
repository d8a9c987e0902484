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

#include "budgetbid/value_iteration.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace budgetbid {

size_t ValueTable::Index(int b, int t) const {
  if (b < 0 || b > budget_cap_ || t < 0 || t > horizon_) {
    throw std::out_of_range(fmt::format(
        "ValueTable: state ({}, {}) outside [0, {}] x [0, {}]", b, t,
        budget_cap_, horizon_));
  }
  return static_cast<size_t>(t) * (budget_cap_ + 1) + b;
}

double ValueTable::Value(int b, int t) const { return values_[Index(b, t)]; }

int ValueTable::BestBid(int b, int t) const { return policy_[Index(b, t)]; }

ValueTable Solve(const PricePmf& pmf, int budget, int horizon, double ctr) {
  if (budget < 0) throw std::invalid_argument("Solve: budget must be >= 0");
  if (horizon < 0) throw std::invalid_argument("Solve: horizon must be >= 0");
  if (!(ctr > 0.0 && ctr <= 1.0)) {
    throw std::invalid_argument("Solve: ctr must be in (0, 1]");
  }
  ValueTable vt;
  vt.budget_cap_ = budget;
  vt.horizon_ = horizon;
  vt.ctr_ = ctr;
  const size_t width = static_cast<size_t>(budget) + 1;
  vt.values_.assign(width * (horizon + 1), 0.0);
  vt.policy_.assign(width * (horizon + 1), 0);

  // r * p(d) for d in [1, min(B, S)]; prices beyond that never change the
  // running sum.
  const int max_price = std::min(budget, pmf.support_max());
  std::vector<double> win(max_price + 1, 0.0);
  for (int d = 1; d <= max_price; ++d) win[d] = ctr * pmf.Mass(d);

  std::vector<double> by_bid(width);
  for (int t = 1; t <= horizon; ++t) {
    const double* prev = &vt.values_[(t - 1) * width];
    double* cur = &vt.values_[t * width];
    int* pol = &vt.policy_[t * width];
    for (int b = 0; b <= budget; ++b) {
      const double keep = prev[b];
      double value = keep;
      double best = keep;
      by_bid[0] = keep;
      const int top = std::min(b, max_price);
      for (int a = 1; a <= top; ++a) {
        value += win[a] * (1.0 + prev[b - a] - keep);
        by_bid[a] = value;
        best = std::max(best, value);
      }
      const double cutoff = best - 1e-12 * std::max(1.0, std::abs(best));
      // Smallest maximizer, but abstaining loses a tie to the smallest
      // maximizing bid that can actually win.
      int arg = 0;
      if (by_bid[0] < cutoff || top == 0) {
        while (by_bid[arg] < cutoff) ++arg;
      } else {
        for (int a = 1; a <= top; ++a) {
          if (win[a] > 0.0 && by_bid[a] >= cutoff) {
            arg = a;
            break;
          }
        }
      }
      cur[b] = best;
      pol[b] = arg;
    }
  }
  return vt;
}

BudgetCalibration CalibrateBudget(const PricePmf& pmf, int horizon,
                                  double fraction, double ctr) {
  if (horizon < 1) {
    throw std::invalid_argument("CalibrateBudget: horizon must be >= 1");
  }
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("CalibrateBudget: fraction must be in (0, 1)");
  }
  if (!(ctr > 0.0 && ctr <= 1.0)) {
    throw std::invalid_argument("CalibrateBudget: ctr must be in (0, 1]");
  }
  const double target = fraction * horizon;
  const double slack = 1e-9;
  auto value_at = [&](int b) {
    return Solve(pmf, b, horizon, ctr).Value(b, horizon);
  };

  // With B = T * S the bidder can always afford the top of the support, so
  // V(T * S, T) = r * T * P(price <= S) is the supremum over budgets.
  const long long ceiling_ll =
      static_cast<long long>(horizon) * pmf.support_max();
  const int ceiling = static_cast<int>(std::min<long long>(ceiling_ll, 1 << 30));
  const double supremum = ctr * horizon * (1.0 - pmf.above_mass());
  if (supremum < target - slack) {
    return {ceiling, false, supremum};
  }

  int lo = 0;  // V(lo) < target
  int hi = 1;
  double hi_value = value_at(hi);
  while (hi_value < target - slack) {
    lo = hi;
    if (hi >= ceiling) {
      return {ceiling, false, hi_value};
    }
    hi = static_cast<int>(std::min<long long>(2LL * hi, ceiling));
    hi_value = value_at(hi);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    const double v = value_at(mid);
    if (v >= target - slack) {
      hi = mid;
      hi_value = v;
    } else {
      lo = mid;
    }
  }
  return {hi, true, hi_value};
}

int LuekerThreshold(const PricePmf& pmf, int b, int t) {
  if (t < 1) throw std::invalid_argument("LuekerThreshold: t must be >= 1");
  if (b <= 0) return 0;
  const double allowance = static_cast<double>(b) / t;
  const double cutoff = allowance + 1e-12 * std::max(1.0, allowance);
  const int top = std::min(b, pmf.support_max());
  double spend = 0.0;
  for (int a = 1; a <= top; ++a) {
    spend += a * pmf.Mass(a);
    if (spend > cutoff) return a - 1;
  }
  return top;
}

double EvaluatePolicy(const PricePmf& pmf, int budget, int horizon, double ctr,
                      const std::function<int(int, int)>& bid_rule) {
  const size_t width = static_cast<size_t>(budget) + 1;
  std::vector<double> prev(width, 0.0), cur(width, 0.0);
  for (int t = 1; t <= horizon; ++t) {
    for (int b = 0; b <= budget; ++b) {
      const int a = bid_rule(b, t);
      if (a < 0 || a > b) {
        throw std::logic_error(
            fmt::format("EvaluatePolicy: bid {} infeasible at ({}, {})", a, b,
                        t));
      }
      double v = 0.0, won = 0.0;
      const int top = std::min(a, pmf.support_max());
      for (int d = 1; d <= top; ++d) {
        const double p = ctr * pmf.Mass(d);
        v += p * (1.0 + prev[b - d]);
        won += p;
      }
      cur[b] = v + (1.0 - won) * prev[b];
    }
    std::swap(prev, cur);
  }
  return prev[budget];
}

}  // namespace budgetbid
