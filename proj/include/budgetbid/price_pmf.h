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

#ifndef BUDGETBID_PRICE_PMF_H_
#define BUDGETBID_PRICE_PMF_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "budgetbid/random.h"

namespace budgetbid {

// Discrete market-price distribution over the integer prices 1..S.
//
// Prices are expressed in the smallest currency unit and are strictly
// positive. Probability that cannot be localized inside [1, S] (for example
// mass an estimator only knows lies beyond its largest censoring bound) is
// kept in a separate above-support bucket: it contributes to Tail() but is
// never assigned to a concrete price.
//
// Immutable after construction.
class PricePmf {
 public:
  // Tolerance on |sum(mass) + above_mass - 1|.
  static constexpr double kNormTolerance = 1e-12;

  // `mass[i]` is the probability of price i + 1. Throws std::invalid_argument
  // if any entry is negative or non-finite, if the support is empty, or if
  // the total differs from one by more than kNormTolerance.
  explicit PricePmf(std::vector<double> mass, double above_mass = 0.0);

  // Rescales non-negative weights (and the above bucket) to total one.
  static PricePmf FromWeights(std::vector<double> weights,
                              double above_weight = 0.0);
  static PricePmf PointMass(int price);
  static PricePmf Uniform(int lo, int hi);

  int support_max() const { return static_cast<int>(mass_.size()); }
  double above_mass() const { return above_mass_; }
  std::span<const double> masses() const { return mass_; }

  // p(price); zero outside [1, S].
  double Mass(int price) const {
    return price >= 1 && price <= support_max() ? mass_[price - 1] : 0.0;
  }

  // T_p(b): probability that the price exceeds b, above bucket included.
  // Tail(0) == 1 and Tail(b) == above_mass() for b >= S.
  double Tail(int b) const;

  // Probability that the price is at most b.
  double Cdf(int b) const { return b <= 0 ? 0.0 : 1.0 - Tail(b); }

  // Moments of the localized part, conditioned on price <= S.
  double Mean() const;
  double StdDev() const;

  // Draws a price by inversion. When the above bucket is non-empty a
  // surrogate price for it must be supplied; otherwise std::logic_error.
  int Sample(Rng& rng, std::optional<int> above_surrogate = std::nullopt) const;

  // Same masses on a different support: truncating moves the dropped mass to
  // the above bucket, extending pads with zeros.
  PricePmf WithSupport(int support_max) const;

  bool operator==(const PricePmf&) const = default;

 private:
  std::vector<double> mass_;
  double above_mass_ = 0.0;
  // tail_[b] = T_p(b) for b in [0, S].
  std::vector<double> tail_;
};

// Named synthetic families used in experiments.
//
//   uniform      lo (default 1), hi
//   geometric    ratio in (0, 1], support_max, lo (default 1);
//                p(lo + i) proportional to ratio^(i + 1)
//   bimodal_gap  low, high, low_prob: mass low_prob at `low`, the rest at
//                `high` (high > low)
//   bursty       lo, hi, spike_lo, spike_hi (default spike_lo), spike_prob:
//                uniform on [lo, hi] with rare uniform spikes on
//                [spike_lo, spike_hi]
//
// Throws std::invalid_argument naming the offending field.
using FamilyParams = std::map<std::string, double, std::less<>>;
PricePmf MakeFamily(std::string_view family, const FamilyParams& params);

std::vector<std::string> FamilyNames();

}  // namespace budgetbid

#endif  // BUDGETBID_PRICE_PMF_H_
