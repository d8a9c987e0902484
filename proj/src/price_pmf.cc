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

#include "budgetbid/price_pmf.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace budgetbid {

PricePmf::PricePmf(std::vector<double> mass, double above_mass)
    : mass_(std::move(mass)), above_mass_(above_mass) {
  if (mass_.empty()) {
    throw std::invalid_argument("PricePmf: support must contain price 1");
  }
  if (!std::isfinite(above_mass_) || above_mass_ < 0.0) {
    throw std::invalid_argument("PricePmf: above_mass must be >= 0");
  }
  double total = above_mass_;
  for (size_t i = 0; i < mass_.size(); ++i) {
    if (!std::isfinite(mass_[i]) || mass_[i] < 0.0) {
      throw std::invalid_argument(
          fmt::format("PricePmf: mass at price {} is {}", i + 1, mass_[i]));
    }
    total += mass_[i];
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw std::invalid_argument(
        fmt::format("PricePmf: total mass {:.17g} is not 1", total));
  }
  const int s = support_max();
  tail_.assign(s + 1, 0.0);
  tail_[s] = above_mass_;
  for (int b = s - 1; b >= 0; --b) {
    tail_[b] = std::min(1.0, tail_[b + 1] + mass_[b]);
  }
  tail_[0] = 1.0;
}

PricePmf PricePmf::FromWeights(std::vector<double> weights,
                               double above_weight) {
  double total = above_weight;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("PricePmf: weights must be non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("PricePmf: weights sum to zero");
  }
  for (double& w : weights) w /= total;
  above_weight /= total;
  // Re-normalize the largest entry so the sum lands within tolerance.
  double sum = above_weight;
  for (double w : weights) sum += w;
  if (!weights.empty()) {
    auto it = std::max_element(weights.begin(), weights.end());
    if (*it >= above_weight) {
      *it += 1.0 - sum;
    } else {
      above_weight += 1.0 - sum;
    }
  }
  return PricePmf(std::move(weights), above_weight);
}

PricePmf PricePmf::PointMass(int price) {
  if (price < 1) throw std::invalid_argument("PointMass: price must be >= 1");
  std::vector<double> mass(price, 0.0);
  mass[price - 1] = 1.0;
  return PricePmf(std::move(mass));
}

PricePmf PricePmf::Uniform(int lo, int hi) {
  if (lo < 1) throw std::invalid_argument("uniform: 'lo' must be >= 1");
  if (hi < lo) throw std::invalid_argument("uniform: 'hi' must be >= lo");
  std::vector<double> w(hi, 0.0);
  std::fill(w.begin() + (lo - 1), w.end(), 1.0);
  return FromWeights(std::move(w));
}

double PricePmf::Tail(int b) const {
  if (b <= 0) return 1.0;
  if (b >= support_max()) return above_mass_;
  return tail_[b];
}

double PricePmf::Mean() const {
  const double inside = 1.0 - above_mass_;
  if (inside <= 0.0) return 0.0;
  double m = 0.0;
  for (int i = 0; i < support_max(); ++i) m += (i + 1) * mass_[i];
  return m / inside;
}

double PricePmf::StdDev() const {
  const double inside = 1.0 - above_mass_;
  if (inside <= 0.0) return 0.0;
  const double mean = Mean();
  double v = 0.0;
  for (int i = 0; i < support_max(); ++i) {
    const double d = (i + 1) - mean;
    v += d * d * mass_[i];
  }
  return std::sqrt(v / inside);
}

int PricePmf::Sample(Rng& rng, std::optional<int> above_surrogate) const {
  if (above_mass_ > 0.0 && !above_surrogate) {
    throw std::logic_error(
        "PricePmf::Sample: distribution has unlocalized mass above the "
        "support and no surrogate price");
  }
  const double u = rng.Uniform();
  const int s = support_max();
  if (u >= 1.0 - tail_[s]) {
    if (above_mass_ > 0.0) return *above_surrogate;
    // Rounding left u just past the last atom.
    for (int p = s; p >= 1; --p) {
      if (mass_[p - 1] > 0.0) return p;
    }
  }
  // Smallest price b with u < Cdf(b).
  int lo = 1, hi = s;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (u < 1.0 - tail_[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

PricePmf PricePmf::WithSupport(int support_max) const {
  if (support_max < 1) {
    throw std::invalid_argument("WithSupport: support_max must be >= 1");
  }
  if (support_max == this->support_max()) return *this;
  std::vector<double> mass(support_max, 0.0);
  const int keep = std::min(support_max, this->support_max());
  std::copy(mass_.begin(), mass_.begin() + keep, mass.begin());
  double above = above_mass_;
  for (int i = keep; i < this->support_max(); ++i) above += mass_[i];
  return FromWeights(std::move(mass), above);
}

namespace {

double Require(const FamilyParams& params, std::string_view family,
               std::string_view key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument(
        fmt::format("{}: missing parameter '{}'", family, key));
  }
  return it->second;
}

double Optional(const FamilyParams& params, std::string_view key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int RequirePrice(double value, std::string_view family, std::string_view key) {
  if (!(value >= 1.0) || value != std::floor(value) || value > 1e7) {
    throw std::invalid_argument(fmt::format(
        "{}: '{}' must be a positive integer price, got {}", family, key,
        value));
  }
  return static_cast<int>(value);
}

double RequireProbability(double value, std::string_view family,
                          std::string_view key) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(fmt::format(
        "{}: '{}' must be a probability in [0, 1], got {}", family, key,
        value));
  }
  return value;
}

void RejectUnknown(const FamilyParams& params, std::string_view family,
                   std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : params) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument(
          fmt::format("{}: unknown parameter '{}'", family, key));
    }
  }
}

}  // namespace

PricePmf MakeFamily(std::string_view family, const FamilyParams& params) {
  if (family == "uniform") {
    RejectUnknown(params, family, {"lo", "hi"});
    const int lo = RequirePrice(Optional(params, "lo", 1), family, "lo");
    const int hi = RequirePrice(Require(params, family, "hi"), family, "hi");
    if (hi < lo) {
      throw std::invalid_argument("uniform: 'hi' must be >= 'lo'");
    }
    return PricePmf::Uniform(lo, hi);
  }
  if (family == "geometric") {
    RejectUnknown(params, family, {"ratio", "support_max", "lo"});
    const double ratio = Require(params, family, "ratio");
    if (!(ratio > 0.0 && ratio <= 1.0)) {
      throw std::invalid_argument(fmt::format(
          "geometric: 'ratio' must be in (0, 1], got {}", ratio));
    }
    const int s = RequirePrice(Require(params, family, "support_max"), family,
                               "support_max");
    const int lo = RequirePrice(Optional(params, "lo", 1), family, "lo");
    if (lo > s) {
      throw std::invalid_argument("geometric: 'lo' must be <= 'support_max'");
    }
    std::vector<double> w(s, 0.0);
    double x = ratio;
    for (int p = lo; p <= s; ++p, x *= ratio) w[p - 1] = x;
    return PricePmf::FromWeights(std::move(w));
  }
  if (family == "bimodal_gap") {
    RejectUnknown(params, family, {"low", "high", "low_prob"});
    const int low = RequirePrice(Require(params, family, "low"), family, "low");
    const int high =
        RequirePrice(Require(params, family, "high"), family, "high");
    if (high <= low) {
      throw std::invalid_argument("bimodal_gap: 'high' must exceed 'low'");
    }
    const double q = RequireProbability(Require(params, family, "low_prob"),
                                        family, "low_prob");
    std::vector<double> mass(high, 0.0);
    mass[low - 1] = q;
    mass[high - 1] = 1.0 - q;
    return PricePmf::FromWeights(std::move(mass));
  }
  if (family == "bursty") {
    RejectUnknown(params, family,
                  {"lo", "hi", "spike_lo", "spike_hi", "spike_prob"});
    const int lo = RequirePrice(Optional(params, "lo", 1), family, "lo");
    const int hi = RequirePrice(Require(params, family, "hi"), family, "hi");
    if (hi < lo) throw std::invalid_argument("bursty: 'hi' must be >= 'lo'");
    const int spike_lo =
        RequirePrice(Require(params, family, "spike_lo"), family, "spike_lo");
    const int spike_hi = RequirePrice(
        Optional(params, "spike_hi", spike_lo), family, "spike_hi");
    if (spike_hi < spike_lo) {
      throw std::invalid_argument("bursty: 'spike_hi' must be >= 'spike_lo'");
    }
    if (spike_lo <= hi) {
      throw std::invalid_argument("bursty: 'spike_lo' must exceed 'hi'");
    }
    const double q = RequireProbability(Require(params, family, "spike_prob"),
                                        family, "spike_prob");
    std::vector<double> w(spike_hi, 0.0);
    for (int p = lo; p <= hi; ++p) w[p - 1] = (1.0 - q) / (hi - lo + 1);
    for (int p = spike_lo; p <= spike_hi; ++p) {
      w[p - 1] += q / (spike_hi - spike_lo + 1);
    }
    return PricePmf::FromWeights(std::move(w));
  }
  throw std::invalid_argument(fmt::format(
      "unknown price family '{}' (available: uniform, geometric, bimodal_gap, "
      "bursty)",
      family));
}

std::vector<std::string> FamilyNames() {
  return {"uniform", "geometric", "bimodal_gap", "bursty"};
}

}  // namespace budgetbid
