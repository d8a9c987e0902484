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

#ifndef BUDGETBID_MARKET_H_
#define BUDGETBID_MARKET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "budgetbid/price_pmf.h"
#include "budgetbid/random.h"

namespace budgetbid {

// One auction as set by the market, before our bid is compared against it.
struct AuctionOutcome {
  int market_price = 1;          // >= 1
  bool click_available = true;   // a won impression converts to a click

  bool operator==(const AuctionOutcome&) const = default;
};

// What the bidder learns after one auction.
struct AuctionFeedback {
  int bid_placed = 0;
  bool impression_won = false;
  bool click_won = false;
  int price_paid = 0;  // zero unless click_won
  int budget_after = 0;

  bool operator==(const AuctionFeedback&) const = default;
};

// Second-price resolution: the bid wins the impression when bid >= price;
// the click (and the charge of the market price) happens only if the outcome
// allows a click. Requires 0 <= bid <= budget, else std::invalid_argument.
AuctionFeedback ResolveAuction(const AuctionOutcome& outcome, int bid,
                               int budget);

// Source of auction outcomes. Draws never depend on the bids placed, so two
// policies facing markets built from the same seed see identical auctions.
class Market {
 public:
  virtual ~Market() = default;
  // nullopt once the data is exhausted.
  virtual std::optional<AuctionOutcome> Next() = 0;
};

// I.i.d. prices from a pmf with independent Bernoulli(ctr) clicks.
class StochasticMarket : public Market {
 public:
  // Throws std::invalid_argument unless 0 < ctr <= 1, and if the pmf has
  // above-support mass without a surrogate price.
  StochasticMarket(PricePmf pmf, double ctr, uint64_t seed,
                   std::optional<int> above_surrogate = std::nullopt);

  std::optional<AuctionOutcome> Next() override;

 private:
  PricePmf pmf_;
  double ctr_;
  std::optional<int> above_surrogate_;
  Rng rng_;
};

// Recorded (price, click) sequence.
struct ReplaySequence {
  std::vector<AuctionOutcome> entries;
  std::string source;
};

// Replay text format: one auction per line as `price,click` with price a
// positive integer and click 0 or 1. An optional `price,click` header may
// appear as the first data line; lines starting with '#' and blank lines
// are ignored. Throws std::runtime_error naming the line on malformed input
// and when no auctions are present.
ReplaySequence ParseReplay(std::istream& in, const std::string& source);
ReplaySequence LoadReplay(const std::filesystem::path& path);
void WriteReplay(const ReplaySequence& sequence, std::ostream& out);

class ReplayMarket : public Market {
 public:
  explicit ReplayMarket(std::shared_ptr<const ReplaySequence> sequence);

  std::optional<AuctionOutcome> Next() override;
  size_t cursor() const { return cursor_; }

 private:
  std::shared_ptr<const ReplaySequence> sequence_;
  size_t cursor_ = 0;
};

// Period split of a replay of `length` auctions into periods of `horizon`.
struct PeriodSplit {
  int full_periods = 0;
  int remainder = 0;  // auctions in a trailing truncated period
  bool truncated() const { return remainder > 0; }
};
PeriodSplit SplitPeriods(size_t length, int horizon);

// Regime-switching generator for replay-style sequences: calm prices come
// from `base`; while a burst lasts, each price is multiplied by a factor
// drawn uniformly from [spike_factor_lo, spike_factor_hi].
struct BurstyProcess {
  PricePmf base = PricePmf::PointMass(1);
  double ctr = 1.0;
  double burst_start = 0.01;     // P(calm -> burst) per auction
  double burst_continue = 0.5;   // P(burst -> burst) per auction
  int spike_factor_lo = 50;
  int spike_factor_hi = 300;
};

ReplaySequence GenerateSequence(const BurstyProcess& process, int length,
                                uint64_t seed);

// Population standard deviation of the recorded prices.
double PriceStdDev(const ReplaySequence& sequence);

// Empirical price pmf and click rate of a sequence.
PricePmf EmpiricalPmf(const ReplaySequence& sequence);
double EmpiricalCtr(const ReplaySequence& sequence);

}  // namespace budgetbid

#endif  // BUDGETBID_MARKET_H_
