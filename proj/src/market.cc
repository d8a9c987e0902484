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

#include "budgetbid/market.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include <fmt/format.h>

namespace budgetbid {

AuctionFeedback ResolveAuction(const AuctionOutcome& outcome, int bid,
                               int budget) {
  if (bid < 0 || bid > budget) {
    throw std::invalid_argument(
        fmt::format("ResolveAuction: bid {} outside [0, {}]", bid, budget));
  }
  AuctionFeedback fb;
  fb.bid_placed = bid;
  fb.impression_won = bid >= outcome.market_price;
  fb.click_won = fb.impression_won && outcome.click_available;
  fb.price_paid = fb.click_won ? outcome.market_price : 0;
  fb.budget_after = budget - fb.price_paid;
  return fb;
}

StochasticMarket::StochasticMarket(PricePmf pmf, double ctr, uint64_t seed,
                                   std::optional<int> above_surrogate)
    : pmf_(std::move(pmf)),
      ctr_(ctr),
      above_surrogate_(above_surrogate),
      rng_(seed) {
  if (!(ctr_ > 0.0 && ctr_ <= 1.0)) {
    throw std::invalid_argument("StochasticMarket: ctr must be in (0, 1]");
  }
  if (pmf_.above_mass() > 0.0 && !above_surrogate_) {
    throw std::invalid_argument(
        "StochasticMarket: pmf has above-support mass; a surrogate price is "
        "required");
  }
}

std::optional<AuctionOutcome> StochasticMarket::Next() {
  AuctionOutcome out;
  out.market_price = pmf_.Sample(rng_, above_surrogate_);
  // Always consume the click draw so the price stream is ctr-independent.
  const double u = rng_.Uniform();
  out.click_available = ctr_ >= 1.0 || u < ctr_;
  return out;
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '\n';
  };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

bool ParseInt(std::string_view s, long long& value) {
  s = Trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

ReplaySequence ParseReplay(std::istream& in, const std::string& source) {
  ReplaySequence seq;
  seq.source = source;
  std::string line;
  int line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = Trim(line);
    if (line_no == 1 && text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    if (text.empty() || text.front() == '#') continue;
    if (!seen_data && text == "price,click") {
      seen_data = true;
      continue;
    }
    seen_data = true;
    const size_t comma = text.find(',');
    long long price = 0, click = 0;
    if (comma == std::string_view::npos ||
        !ParseInt(text.substr(0, comma), price) ||
        !ParseInt(text.substr(comma + 1), click)) {
      throw std::runtime_error(fmt::format(
          "{}:{}: expected 'price,click', got '{}'", source, line_no, text));
    }
    if (price < 1 || price > 1'000'000'000) {
      throw std::runtime_error(fmt::format(
          "{}:{}: price must be a positive integer, got {}", source, line_no,
          price));
    }
    if (click != 0 && click != 1) {
      throw std::runtime_error(fmt::format(
          "{}:{}: click must be 0 or 1, got {}", source, line_no, click));
    }
    seq.entries.push_back({static_cast<int>(price), click == 1});
  }
  if (seq.entries.empty()) {
    throw std::runtime_error(fmt::format("{}: no auctions", source));
  }
  return seq;
}

ReplaySequence LoadReplay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(
        fmt::format("cannot open replay file '{}'", path.string()));
  }
  return ParseReplay(in, path.string());
}

void WriteReplay(const ReplaySequence& sequence, std::ostream& out) {
  out << "price,click\n";
  for (const AuctionOutcome& a : sequence.entries) {
    out << a.market_price << ',' << (a.click_available ? 1 : 0) << '\n';
  }
}

ReplayMarket::ReplayMarket(std::shared_ptr<const ReplaySequence> sequence)
    : sequence_(std::move(sequence)) {
  if (!sequence_ || sequence_->entries.empty()) {
    throw std::invalid_argument("ReplayMarket: empty sequence");
  }
}

std::optional<AuctionOutcome> ReplayMarket::Next() {
  if (cursor_ >= sequence_->entries.size()) return std::nullopt;
  return sequence_->entries[cursor_++];
}

PeriodSplit SplitPeriods(size_t length, int horizon) {
  if (horizon < 1) throw std::invalid_argument("SplitPeriods: horizon < 1");
  return {static_cast<int>(length / horizon),
          static_cast<int>(length % horizon)};
}

ReplaySequence GenerateSequence(const BurstyProcess& process, int length,
                                uint64_t seed) {
  if (length < 1) throw std::invalid_argument("GenerateSequence: length < 1");
  if (process.spike_factor_lo < 1 ||
      process.spike_factor_hi < process.spike_factor_lo) {
    throw std::invalid_argument("GenerateSequence: bad spike factor range");
  }
  Rng rng(seed);
  ReplaySequence seq;
  seq.source = fmt::format("synthetic:{}", seed);
  seq.entries.reserve(length);
  bool burst = false;
  for (int i = 0; i < length; ++i) {
    burst = burst ? rng.Bernoulli(process.burst_continue)
                  : rng.Bernoulli(process.burst_start);
    int price = process.base.Sample(rng, process.base.support_max());
    const int factor = static_cast<int>(
        rng.UniformInt(process.spike_factor_lo, process.spike_factor_hi));
    if (burst) price *= factor;
    const bool click = rng.Uniform() < process.ctr;
    seq.entries.push_back({price, click});
  }
  return seq;
}

double PriceStdDev(const ReplaySequence& sequence) {
  const double n = static_cast<double>(sequence.entries.size());
  double mean = 0.0;
  for (const auto& a : sequence.entries) mean += a.market_price;
  mean /= n;
  double var = 0.0;
  for (const auto& a : sequence.entries) {
    const double d = a.market_price - mean;
    var += d * d;
  }
  return std::sqrt(var / n);
}

PricePmf EmpiricalPmf(const ReplaySequence& sequence) {
  int top = 1;
  for (const auto& a : sequence.entries) top = std::max(top, a.market_price);
  std::vector<double> counts(top, 0.0);
  for (const auto& a : sequence.entries) counts[a.market_price - 1] += 1.0;
  return PricePmf::FromWeights(std::move(counts));
}

double EmpiricalCtr(const ReplaySequence& sequence) {
  double clicks = 0.0;
  for (const auto& a : sequence.entries) clicks += a.click_available ? 1 : 0;
  return clicks / static_cast<double>(sequence.entries.size());
}

}  // namespace budgetbid
