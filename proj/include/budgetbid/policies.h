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

#ifndef BUDGETBID_POLICIES_H_
#define BUDGETBID_POLICIES_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "budgetbid/censored_estimation.h"
#include "budgetbid/market.h"
#include "budgetbid/price_pmf.h"
#include "budgetbid/random.h"
#include "budgetbid/value_iteration.h"

namespace budgetbid {

// A bidding strategy driven by the period/auction protocol:
//
//   BeginPeriod(B)
//   repeat T times: bid = NextBid(b, t); Observe(feedback)
//   EndPeriod()
//
// NextBid must return a bid in [0, b]; Observe is called exactly once per
// auction with the feedback for the bid just issued.
class BidPolicy {
 public:
  virtual ~BidPolicy() = default;

  virtual std::string name() const = 0;
  virtual void BeginPeriod(int /*budget*/) {}
  virtual int NextBid(int budget, int remaining) = 0;
  virtual void Observe(const AuctionFeedback& feedback) = 0;
  virtual void EndPeriod() {}
};

// Converts feedback for `bid` into a censored sample with bound bid + 1:
// click -> direct, no impression -> right-censored, impression without
// click -> left-censored. Throws std::invalid_argument on inconsistent
// feedback (a charge above the bid, a charge without a click, or a click
// without an impression).
CensoredSample ToSample(const AuctionFeedback& feedback);

// Learns the price distribution from censored feedback. Before the first
// observation the estimate is uniform on [1, B]; afterwards it is the
// product-limit estimate, or Turnbull's once left-censored samples exist.
// The support is [1, B]: no affordable bid can tell prices above B apart.
class CensoredPriceLearner {
 public:
  CensoredPriceLearner(int budget_cap, TailPlacement tail);

  void Observe(const AuctionFeedback& feedback);
  const PricePmf& estimate() const { return estimate_; }
  const ObservationLog& log() const { return log_; }
  // Bumped whenever the estimate is replaced.
  uint64_t version() const { return version_; }

 private:
  int support_max_;
  TailPlacement tail_;
  ObservationLog log_;
  PricePmf estimate_;
  uint64_t version_ = 0;
};

enum class ResolveCadence { kEveryAuction, kEveryPeriod };

struct GreedyProductLimitOptions {
  double ctr = 1.0;  // click-through rate assumed by the dynamic program
  ResolveCadence cadence = ResolveCadence::kEveryAuction;
  TailPlacement tail = TailPlacement::kAtLargestBound;
  // When set, the estimate is frozen at this pmf and never updated.
  std::optional<PricePmf> frozen;
};

// Bids the optimal action of the dynamic program solved against the current
// price estimate, re-solving whenever the estimate changes.
class GreedyProductLimit : public BidPolicy {
 public:
  GreedyProductLimit(int budget_cap, int horizon,
                     GreedyProductLimitOptions options = {});

  std::string name() const override { return "greedy_product_limit"; }
  void BeginPeriod(int budget) override;
  int NextBid(int budget, int remaining) override;
  void Observe(const AuctionFeedback& feedback) override;

  const PricePmf& estimate() const;
  const ObservationLog& log() const { return learner_.log(); }
  int solve_count() const { return solve_count_; }

 private:
  int budget_cap_;
  int horizon_;
  GreedyProductLimitOptions options_;
  CensoredPriceLearner learner_;
  std::optional<ValueTable> table_;
  uint64_t table_version_ = 0;
  bool frozen_for_period_ = false;
  int solve_count_ = 0;
};

struct LuekerLearnOptions {
  TailPlacement tail = TailPlacement::kAtLargestBound;
  std::optional<PricePmf> frozen;
};

// Bids the smoothed-spend threshold v(b / t) of the current price estimate.
class LuekerLearn : public BidPolicy {
 public:
  LuekerLearn(int budget_cap, LuekerLearnOptions options = {});

  std::string name() const override { return "lueker_learn"; }
  int NextBid(int budget, int remaining) override;
  void Observe(const AuctionFeedback& feedback) override;

  const PricePmf& estimate() const;

 private:
  LuekerLearnOptions options_;
  CensoredPriceLearner learner_;
};

// Fixed(price): bids `price` every auction. With less budget left than the
// price it bids the remaining budget, or abstains when `strict`.
class FixedPrice : public BidPolicy {
 public:
  explicit FixedPrice(int price, bool strict = false);

  std::string name() const override { return "fixed_price"; }
  int NextBid(int budget, int remaining) override;
  void Observe(const AuctionFeedback&) override {}

  int price() const { return price_; }
  void set_price(int price) { price_ = price; }

 private:
  int price_;
  bool strict_;
};

// {1, ceil(g), ceil(g^2), ...} up to `max_price`, duplicates removed.
std::vector<int> GeometricPriceGrid(int max_price, double ratio);

// Exp3 over a fixed set of arms with rewards in [0, 1].
class Exp3 {
 public:
  Exp3(int arms, double gamma);

  int arms() const { return static_cast<int>(log_weights_.size()); }
  std::vector<double> Probabilities() const;
  std::vector<double> Weights() const;  // normalized so the largest is 1
  int Draw(Rng& rng) const;
  void Update(int arm, double reward);

 private:
  double gamma_;
  std::vector<double> log_weights_;
};

struct FixedPriceSearchOptions {
  double grid_ratio = 1.3;
  double gamma = 0.1;
  uint64_t seed = 0;
};

// Plays one fixed price per period, choosing it by Exp3 over a geometric
// price grid with reward clicks / T.
class FixedPriceSearch : public BidPolicy {
 public:
  FixedPriceSearch(int budget_cap, int horizon,
                   FixedPriceSearchOptions options = {});

  std::string name() const override { return "fixed_price_search"; }
  void BeginPeriod(int budget) override;
  int NextBid(int budget, int remaining) override;
  void Observe(const AuctionFeedback& feedback) override;
  void EndPeriod() override;

  const std::vector<int>& grid() const { return grid_; }
  const Exp3& bandit() const { return bandit_; }
  int current_price() const;

 private:
  int horizon_;
  std::vector<int> grid_;
  Exp3 bandit_;
  Rng rng_;
  int arm_ = -1;
  int clicks_ = 0;
};

struct QLearningOptions {
  double alpha = 0.1;
  double epsilon = 0.1;
  double epsilon_decay = 0.995;  // multiplied into epsilon after each period
  uint64_t seed = 0;
};

// Tabular Q-learning over states (b, t) and bids a <= b, epsilon-greedy,
// with Q initialized to zero and greedy ties broken toward the smaller bid.
class QLearning : public BidPolicy {
 public:
  QLearning(int budget_cap, int horizon, QLearningOptions options = {});

  std::string name() const override { return "q_learn"; }
  int NextBid(int budget, int remaining) override;
  void Observe(const AuctionFeedback& feedback) override;
  void EndPeriod() override;

  double q_value(int bid, int budget, int remaining) const;
  void set_q_value(int bid, int budget, int remaining, double value);
  double epsilon() const { return epsilon_; }

 private:
  std::vector<double>& Row(int budget, int remaining);
  double BestValue(int budget, int remaining) const;
  int GreedyBid(int budget, int remaining) const;

  int budget_cap_;
  int horizon_;
  QLearningOptions options_;
  double epsilon_;
  Rng rng_;
  std::unordered_map<int64_t, std::vector<double>> rows_;
  struct Pending {
    int bid, budget, remaining;
  };
  std::optional<Pending> pending_;
};

// Logistic budget smoothing: bids round(scale / (1 + exp(z - 1))) where z
// is the fraction of the period budget still available.
class BudgetSmoothing : public BidPolicy {
 public:
  // scale <= 0 selects the default max(1, B / 10).
  BudgetSmoothing(int budget_cap, int scale = 0);

  std::string name() const override { return "budget_smoothing"; }
  int NextBid(int budget, int remaining) override;
  void Observe(const AuctionFeedback&) override {}

  int scale() const { return scale_; }

 private:
  int budget_cap_;
  int scale_;
};

// ---------------------------------------------------------------------------
// Construction by name, for configuration-driven runs.

struct PolicySpec {
  std::string name;  // canonical name or alias
  std::map<std::string, std::string> params;
};

struct PolicyContext {
  int budget = 0;
  int horizon = 1;
  double ctr = 1.0;
  uint64_t seed = 0;
  // True market pmf, needed only by frozen (oracle) variants.
  std::optional<PricePmf> true_pmf;
};

// Canonical policy names, in reporting order.
std::vector<std::string> PolicyNames();

// Maps an alias (gpl, lueker, fixed, fps, qlearn, smoothing) to its
// canonical name; throws std::invalid_argument listing the available names.
std::string CanonicalPolicyName(const std::string& name);

// Every parameter of the policy with defaults filled in, for echoing.
// Throws std::invalid_argument on unknown parameters.
std::map<std::string, std::string> ResolvePolicyParams(const PolicySpec& spec);

std::unique_ptr<BidPolicy> MakePolicy(const PolicySpec& spec,
                                      const PolicyContext& context);

}  // namespace budgetbid

#endif  // BUDGETBID_POLICIES_H_
