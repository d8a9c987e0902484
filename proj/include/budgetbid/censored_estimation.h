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

#ifndef BUDGETBID_CENSORED_ESTIMATION_H_
#define BUDGETBID_CENSORED_ESTIMATION_H_

#include <vector>

#include "budgetbid/price_pmf.h"

namespace budgetbid {

enum class Censoring {
  kDirect,         // price observed exactly; observed < bound
  kRightCensored,  // price >= bound; observed == bound
  kLeftCensored,   // price < bound; observed unused
};

struct CensoredSample {
  int bound = 1;
  int observed = 1;
  Censoring kind = Censoring::kDirect;

  static CensoredSample Direct(int observed, int bound) {
    return {bound, observed, Censoring::kDirect};
  }
  static CensoredSample RightCensored(int bound) {
    return {bound, bound, Censoring::kRightCensored};
  }
  static CensoredSample LeftCensored(int bound) {
    return {bound, 0, Censoring::kLeftCensored};
  }

  bool operator==(const CensoredSample&) const = default;
};

// Append-only record of censored price observations.
class ObservationLog {
 public:
  // Throws std::invalid_argument if the sample violates its kind's
  // invariant (direct needs 1 <= observed < bound, right-censored needs
  // observed == bound >= 1, left-censored needs bound >= 2).
  void Append(const CensoredSample& sample);

  const std::vector<CensoredSample>& samples() const { return samples_; }
  size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  int direct_count() const { return direct_count_; }
  bool has_left_censored() const { return left_count_ > 0; }

 private:
  std::vector<CensoredSample> samples_;
  int direct_count_ = 0;
  int left_count_ = 0;
};

// Where mass goes that the data only locate beyond the largest censoring
// bound. kAboveSupport keeps it in the above-support bucket;
// kAtLargestBound places it on the largest bound itself when that bound is
// inside the support (the cheapest price consistent with the data).
enum class TailPlacement { kAboveSupport, kAtLargestBound };

// Product-limit (Kaplan-Meier) estimate from direct and right-censored
// samples, with
//
//   D(s) = #{i : o_i = s < k_i}
//   N(s) = #{i : s <= o_i, s < k_i}
//   S(t) = prod_{s < t} (1 - D(s) / N(s))
//
// read as S(t) = P(price >= t), so p(t) = S(t) - S(t + 1) on [1, S]. Factors
// with N(s) = 0 are skipped. Survival left at S + 1 becomes above-support
// mass (or moves per `tail`).
//
// Throws std::invalid_argument for an empty log, a left-censored sample, or
// support_max < 1.
PricePmf ProductLimit(const ObservationLog& log, int support_max,
                      TailPlacement tail = TailPlacement::kAboveSupport);

struct TurnbullOptions {
  double tolerance = 1e-9;  // max-norm change between iterates
  int max_iterations = 10000;
  TailPlacement tail = TailPlacement::kAboveSupport;
};

struct TurnbullResult {
  PricePmf pmf;
  int iterations = 0;
  bool converged = false;
};

// Nonparametric MLE for doubly-censored data by self-consistency (EM).
//
// Each sample constrains the price to an interval: a direct observation to
// {o}, a right-censored one to [k, inf), a left-censored one to [1, k - 1].
// The likelihood only depends on the mass of the innermost intervals of
// those constraints, so the iteration runs over them, starting uniform:
// every sample's unit mass is spread over the innermost intervals it
// contains in proportion to the current estimate, and the expected counts
// are renormalized. Mass of a finite innermost interval is spread evenly over
// its prices; the unbounded one follows `tail`, exactly as in ProductLimit.
//
// Non-convergence within max_iterations is reported through `converged`
// with the last iterate. Throws std::invalid_argument for an empty log.
TurnbullResult Turnbull(const ObservationLog& log, int support_max,
                        const TurnbullOptions& options = {});

// Log-likelihood of the log under pmf. Prices beyond the support count as
// above-support mass. Returns -inf when some sample has zero probability.
double LogLikelihood(const PricePmf& pmf, const ObservationLog& log);

}  // namespace budgetbid

#endif  // BUDGETBID_CENSORED_ESTIMATION_H_
