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

#include "budgetbid/censored_estimation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace budgetbid {

void ObservationLog::Append(const CensoredSample& sample) {
  switch (sample.kind) {
    case Censoring::kDirect:
      if (sample.observed < 1 || sample.observed >= sample.bound) {
        throw std::invalid_argument(fmt::format(
            "direct sample needs 1 <= observed < bound, got o={} k={}",
            sample.observed, sample.bound));
      }
      ++direct_count_;
      break;
    case Censoring::kRightCensored:
      if (sample.bound < 1 || sample.observed != sample.bound) {
        throw std::invalid_argument(fmt::format(
            "right-censored sample needs observed == bound >= 1, got o={} k={}",
            sample.observed, sample.bound));
      }
      break;
    case Censoring::kLeftCensored:
      if (sample.bound < 2) {
        throw std::invalid_argument(fmt::format(
            "left-censored sample needs bound >= 2, got k={}", sample.bound));
      }
      ++left_count_;
      break;
  }
  samples_.push_back(sample);
}

namespace {

// Moves the unbounded residual onto `price` when requested and possible.
PricePmf PlaceResidual(std::vector<double> mass, double residual,
                       TailPlacement tail, int largest_bound,
                       int largest_direct) {
  const int s = static_cast<int>(mass.size());
  if (tail == TailPlacement::kAtLargestBound && residual > 0.0 &&
      largest_bound > largest_direct && largest_bound <= s) {
    mass[largest_bound - 1] += residual;
    residual = 0.0;
  }
  return PricePmf::FromWeights(std::move(mass), residual);
}

}  // namespace

PricePmf ProductLimit(const ObservationLog& log, int support_max,
                      TailPlacement tail) {
  if (log.empty()) {
    throw std::invalid_argument("ProductLimit: empty observation log");
  }
  if (support_max < 1) {
    throw std::invalid_argument("ProductLimit: support_max must be >= 1");
  }
  if (log.has_left_censored()) {
    throw std::invalid_argument(
        "ProductLimit: left-censored samples need Turnbull");
  }
  const int s = support_max;
  // direct_at[v]: direct observations equal to v; at_risk_until[v]: samples
  // that stay at risk for every s <= v. Values beyond S are clamped to S + 1.
  std::vector<int> direct_at(s + 2, 0), at_risk_until(s + 2, 0);
  int largest_bound = 0, largest_direct = 0;
  for (const CensoredSample& x : log.samples()) {
    if (x.kind == Censoring::kDirect) {
      ++direct_at[std::min(x.observed, s + 1)];
      ++at_risk_until[std::min(x.observed, s + 1)];
      largest_direct = std::max(largest_direct, x.observed);
    } else {
      ++at_risk_until[std::min(x.bound - 1, s + 1)];
      largest_bound = std::max(largest_bound, x.bound);
    }
  }
  // N(v) = number at risk through v = suffix sum of at_risk_until.
  std::vector<int> at_risk(s + 2, 0);
  int running = 0;
  for (int v = s + 1; v >= 1; --v) {
    running += at_risk_until[v];
    at_risk[v] = running;
  }
  std::vector<double> mass(s, 0.0);
  double survival = 1.0;  // S(t)
  for (int t = 1; t <= s; ++t) {
    double next = survival;
    if (at_risk[t] > 0 && direct_at[t] > 0) {
      next = survival * (1.0 - static_cast<double>(direct_at[t]) / at_risk[t]);
    }
    mass[t - 1] = survival - next;
    survival = next;
  }
  return PlaceResidual(std::move(mass), survival, tail, largest_bound,
                       largest_direct);
}

TurnbullResult Turnbull(const ObservationLog& log, int support_max,
                        const TurnbullOptions& options) {
  if (log.empty()) {
    throw std::invalid_argument("Turnbull: empty observation log");
  }
  if (support_max < 1) {
    throw std::invalid_argument("Turnbull: support_max must be >= 1");
  }
  const int s = support_max;
  const int top = s + 1;  // cell index standing for "above the support"

  // Constraint interval of each sample over cells [1, S + 1], grouped.
  std::map<std::pair<int, int>, int> groups;
  for (const CensoredSample& x : log.samples()) {
    switch (x.kind) {
      case Censoring::kDirect: {
        const int c = std::min(x.observed, top);
        ++groups[{c, c}];
        break;
      }
      case Censoring::kRightCensored:
        ++groups[{std::min(x.bound, top), top}];
        break;
      case Censoring::kLeftCensored:
        ++groups[{1, std::min(x.bound - 1, top)}];
        break;
    }
  }

  // Innermost intervals: a left endpoint immediately followed by a right
  // endpoint in the merged order (lefts sort first on ties).
  std::vector<std::pair<int, int>> endpoints;  // (value, 0 = left / 1 = right)
  for (const auto& [iv, count] : groups) {
    endpoints.emplace_back(iv.first, 0);
    endpoints.emplace_back(iv.second, 1);
  }
  std::sort(endpoints.begin(), endpoints.end());
  std::vector<std::pair<int, int>> cells;
  for (size_t i = 0; i + 1 < endpoints.size(); ++i) {
    if (endpoints[i].second == 0 && endpoints[i + 1].second == 1) {
      cells.emplace_back(endpoints[i].first, endpoints[i + 1].first);
    }
  }
  const int m = static_cast<int>(cells.size());

  struct Group {
    int first, last;  // innermost-interval index range
    double count;
  };
  std::vector<Group> spans;
  double total = 0.0;
  for (const auto& [iv, count] : groups) {
    auto first = std::lower_bound(
        cells.begin(), cells.end(), iv.first,
        [](const std::pair<int, int>& c, int v) { return c.first < v; });
    auto last = std::upper_bound(
        cells.begin(), cells.end(), iv.second,
        [](int v, const std::pair<int, int>& c) { return v < c.second; });
    spans.push_back({static_cast<int>(first - cells.begin()),
                     static_cast<int>(last - cells.begin()) - 1,
                     static_cast<double>(count)});
    total += count;
  }

  std::vector<double> weight(m, 1.0 / m), prefix(m + 1), factor(m + 1);
  TurnbullResult result{PricePmf::PointMass(1), 0, false};
  while (result.iterations < options.max_iterations) {
    prefix[0] = 0.0;
    for (int j = 0; j < m; ++j) prefix[j + 1] = prefix[j] + weight[j];
    std::fill(factor.begin(), factor.end(), 0.0);
    for (const Group& g : spans) {
      const double covered = prefix[g.last + 1] - prefix[g.first];
      if (covered <= 0.0) continue;
      const double share = g.count / covered;
      factor[g.first] += share;
      factor[g.last + 1] -= share;
    }
    double change = 0.0, running = 0.0;
    for (int j = 0; j < m; ++j) {
      running += factor[j];
      const double updated = weight[j] * running / total;
      change = std::max(change, std::abs(updated - weight[j]));
      weight[j] = updated;
    }
    ++result.iterations;
    if (change < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  std::vector<double> mass(s, 0.0);
  double residual = 0.0;
  for (int j = 0; j < m; ++j) {
    const auto [lo, hi] = cells[j];
    if (hi == top) {
      if (lo == top) {
        residual += weight[j];
      } else {
        // Unbounded interval [lo, inf): same convention as ProductLimit.
        if (options.tail == TailPlacement::kAtLargestBound) {
          mass[lo - 1] += weight[j];
        } else {
          residual += weight[j];
        }
      }
    } else {
      const double each = weight[j] / (hi - lo + 1);
      for (int p = lo; p <= hi; ++p) mass[p - 1] += each;
    }
  }
  result.pmf = PricePmf::FromWeights(std::move(mass), residual);
  return result;
}

double LogLikelihood(const PricePmf& pmf, const ObservationLog& log) {
  const int s = pmf.support_max();
  double ll = 0.0;
  for (const CensoredSample& x : log.samples()) {
    double p = 0.0;
    switch (x.kind) {
      case Censoring::kDirect:
        p = x.observed <= s ? pmf.Mass(x.observed) : pmf.above_mass();
        break;
      case Censoring::kRightCensored:
        p = pmf.Tail(x.bound - 1);
        break;
      case Censoring::kLeftCensored:
        p = x.bound - 1 <= s ? pmf.Cdf(x.bound - 1) : 1.0;
        break;
    }
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += std::log(p);
  }
  return ll;
}

}  // namespace budgetbid
