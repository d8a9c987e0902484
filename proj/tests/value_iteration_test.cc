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

#include <stdexcept>

#include "gtest/gtest.h"
#include "budgetbid/random.h"
#include "oracles.h"

namespace budgetbid {
namespace {

using testing::EnumerateExpectedClicks;
using testing::ExpectimaxValue;
using testing::RandomPmf;

TEST(SolveTest, UniformTwoPricesOneAuction) {
  const ValueTable vt = Solve(PricePmf::Uniform(1, 2), 2, 1);
  EXPECT_NEAR(vt.Value(2, 1), 1.0, 1e-12);
  EXPECT_EQ(vt.BestBid(2, 1), 2);
  EXPECT_NEAR(vt.Value(1, 1), 0.5, 1e-12);
  EXPECT_NEAR(vt.Value(0, 1), 0.0, 1e-12);
}

TEST(SolveTest, UniformTwoPricesTwoAuctionsBreaksTieLow) {
  const ValueTable vt = Solve(PricePmf::Uniform(1, 2), 2, 2);
  EXPECT_NEAR(vt.Value(2, 2), 1.25, 1e-12);
  EXPECT_EQ(vt.BestBid(2, 2), 1);
}

TEST(SolveTest, ZeroHorizonIsZero) {
  const ValueTable vt = Solve(PricePmf::Uniform(1, 5), 7, 0);
  for (int b = 0; b <= 7; ++b) {
    EXPECT_EQ(vt.Value(b, 0), 0.0);
    EXPECT_EQ(vt.BestBid(b, 0), 0);
  }
}

TEST(SolveTest, PointMassAtOneBuysBudgetClicks) {
  const ValueTable vt = Solve(PricePmf::PointMass(1), 3, 5);
  EXPECT_NEAR(vt.Value(3, 5), 3.0, 1e-12);
  for (int b = 1; b <= 3; ++b) {
    for (int t = 1; t <= 5; ++t) EXPECT_EQ(vt.BestBid(b, t), 1);
  }
}

TEST(SolveTest, NoBudgetBidsZero) {
  const ValueTable vt = Solve(PricePmf::Uniform(1, 3), 4, 5);
  EXPECT_EQ(vt.BestBid(0, 5), 0);
}

TEST(SolveTest, AbstainsWhenNothingIsAffordable) {
  const ValueTable vt = Solve(PricePmf::PointMass(6), 5, 3);
  for (int b = 0; b <= 5; ++b) EXPECT_EQ(vt.BestBid(b, 3), 0);
  EXPECT_EQ(vt.Value(5, 3), 0.0);
}

TEST(SolveTest, OutOfRangeLookupsThrow) {
  const ValueTable vt = Solve(PricePmf::Uniform(1, 2), 2, 2);
  EXPECT_THROW(vt.Value(3, 1), std::out_of_range);
  EXPECT_THROW(vt.BestBid(1, 3), std::out_of_range);
  EXPECT_THROW(vt.BestBid(-1, 0), std::out_of_range);
}

TEST(SolveTest, RejectsBadArguments) {
  const PricePmf p = PricePmf::Uniform(1, 2);
  EXPECT_THROW(Solve(p, -1, 2), std::invalid_argument);
  EXPECT_THROW(Solve(p, 2, -1), std::invalid_argument);
  EXPECT_THROW(Solve(p, 2, 2, 0.0), std::invalid_argument);
  EXPECT_THROW(Solve(p, 2, 2, 1.5), std::invalid_argument);
}

TEST(SolveTest, AboveMassOnlyReducesWinChance) {
  const PricePmf p({0.5}, 0.5);
  const ValueTable vt = Solve(p, 3, 2);
  EXPECT_NEAR(vt.Value(3, 1), 0.5, 1e-12);
  EXPECT_NEAR(vt.Value(3, 2), 1.0, 1e-12);
}

TEST(SolveTest, MatchesEnumerationOnRandomInstances) {
  Rng rng(2024);
  for (int instance = 0; instance < 60; ++instance) {
    const int support = static_cast<int>(rng.UniformInt(1, 7));
    const PricePmf p = RandomPmf(rng, support, true);
    const int budget = static_cast<int>(rng.UniformInt(0, 6));
    const int horizon = static_cast<int>(rng.UniformInt(1, 4));
    const ValueTable vt = Solve(p, budget, horizon);
    const double enumerated = EnumerateExpectedClicks(
        p, budget, horizon, [&](int b, int t) { return vt.BestBid(b, t); });
    EXPECT_NEAR(enumerated, vt.Value(budget, horizon), 1e-9)
        << "instance " << instance;
  }
}

TEST(SolveTest, MatchesExpectimaxWithClickRate) {
  Rng rng(77);
  for (int instance = 0; instance < 40; ++instance) {
    const PricePmf p = RandomPmf(rng, static_cast<int>(rng.UniformInt(1, 9)),
                                 true);
    const int budget = static_cast<int>(rng.UniformInt(0, 12));
    const int horizon = static_cast<int>(rng.UniformInt(1, 8));
    const double ctr = 0.1 + 0.9 * rng.Uniform();
    const ValueTable vt = Solve(p, budget, horizon, ctr);
    for (int b = 0; b <= budget; ++b) {
      for (int t = 0; t <= horizon; ++t) {
        EXPECT_NEAR(vt.Value(b, t), ExpectimaxValue(p, b, t, ctr), 1e-9);
      }
    }
  }
}

TEST(SolveTest, BestBidAttainsValue) {
  Rng rng(5);
  const PricePmf p = RandomPmf(rng, 10, false);
  const ValueTable vt = Solve(p, 15, 10, 0.7);
  const double exact = EvaluatePolicy(
      p, 15, 10, 0.7, [&](int b, int t) { return vt.BestBid(b, t); });
  EXPECT_NEAR(exact, vt.Value(15, 10), 1e-9);
}

TEST(SolveTest, MonotoneBoundedAndFeasible) {
  Rng rng(99);
  for (int instance = 0; instance < 10; ++instance) {
    const PricePmf p = RandomPmf(rng, 12, true);
    const ValueTable vt = Solve(p, 25, 15, 0.8);
    for (int b = 0; b <= 25; ++b) {
      for (int t = 0; t <= 15; ++t) {
        const double v = vt.Value(b, t);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, t + 1e-12);
        EXPECT_LE(vt.BestBid(b, t), b);
        if (b < 25) EXPECT_LE(v, vt.Value(b + 1, t) + 1e-12);
        if (t < 15) EXPECT_LE(v, vt.Value(b, t + 1) + 1e-12);
      }
    }
  }
}

TEST(SolveTest, LowerClickRateNeverHelps) {
  Rng rng(8);
  const PricePmf p = RandomPmf(rng, 8, false);
  const ValueTable hi = Solve(p, 20, 12, 0.9);
  const ValueTable lo = Solve(p, 20, 12, 0.4);
  for (int b = 0; b <= 20; ++b) {
    for (int t = 0; t <= 12; ++t) {
      EXPECT_LE(lo.Value(b, t), hi.Value(b, t) + 1e-12);
    }
  }
}

TEST(CalibrateBudgetTest, PointMasses) {
  EXPECT_EQ(CalibrateBudget(PricePmf::PointMass(1), 100, 0.1).budget, 10);
  EXPECT_EQ(CalibrateBudget(PricePmf::PointMass(2), 100, 0.1).budget, 20);
  const BudgetCalibration full =
      CalibrateBudget(PricePmf::PointMass(1), 100, 0.999);
  EXPECT_EQ(full.budget, 100);
  EXPECT_TRUE(full.reachable);
}

TEST(CalibrateBudgetTest, SmallestSufficientBudget) {
  const PricePmf p = PricePmf::Uniform(1, 20);
  const BudgetCalibration cal = CalibrateBudget(p, 100, 0.1);
  ASSERT_TRUE(cal.reachable);
  EXPECT_GE(Solve(p, cal.budget, 100).Value(cal.budget, 100), 10.0 - 1e-9);
  EXPECT_LT(Solve(p, cal.budget - 1, 100).Value(cal.budget - 1, 100), 10.0);
}

TEST(CalibrateBudgetTest, UnreachableTargetIsFlagged) {
  const BudgetCalibration cal =
      CalibrateBudget(PricePmf::Uniform(1, 3), 10, 0.5, 0.2);
  EXPECT_FALSE(cal.reachable);
  EXPECT_EQ(cal.budget, 30);
  const BudgetCalibration above = CalibrateBudget(PricePmf({0.3}, 0.7), 10, 0.5);
  EXPECT_FALSE(above.reachable);
}

TEST(CalibrateBudgetTest, RejectsBadArguments) {
  const PricePmf p = PricePmf::PointMass(1);
  EXPECT_THROW(CalibrateBudget(p, 0, 0.1), std::invalid_argument);
  EXPECT_THROW(CalibrateBudget(p, 10, 0.0), std::invalid_argument);
  EXPECT_THROW(CalibrateBudget(p, 10, 1.0), std::invalid_argument);
}

TEST(LuekerThresholdTest, Examples) {
  const PricePmf u = PricePmf::Uniform(1, 4);
  EXPECT_EQ(LuekerThreshold(u, 100, 100), 2);
  EXPECT_EQ(LuekerThreshold(u, 0, 10), 0);
  EXPECT_EQ(LuekerThreshold(PricePmf::PointMass(3), 3, 1), 3);
  EXPECT_EQ(LuekerThreshold(PricePmf::PointMass(3), 30, 10), 3);
  EXPECT_EQ(LuekerThreshold(PricePmf::PointMass(1), 1, 2), 0);
}

TEST(LuekerThresholdTest, CappedAtBudget) {
  EXPECT_EQ(LuekerThreshold(PricePmf::Uniform(1, 4), 3, 1), 3);
  EXPECT_LE(LuekerThreshold(PricePmf({0.1}, 0.9), 5, 1), 5);
}

TEST(EvaluatePolicyTest, MatchesEnumeration) {
  Rng rng(31);
  for (int instance = 0; instance < 20; ++instance) {
    const PricePmf p = RandomPmf(rng, 6, true);
    auto rule = [&](int b, int t) {
      return std::min(b, LuekerThreshold(p, b, t));
    };
    EXPECT_NEAR(EvaluatePolicy(p, 6, 4, 1.0, rule),
                EnumerateExpectedClicks(p, 6, 4, rule), 1e-9);
  }
}

}  // namespace
}  // namespace budgetbid
