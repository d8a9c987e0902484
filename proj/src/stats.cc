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

#include "budgetbid/stats.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace budgetbid {

double Mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double StdDev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = Mean(xs);
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return std::sqrt(v / static_cast<double>(xs.size() - 1));
}

TTestResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("WelchTTest: need two samples per group");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = std::pow(StdDev(a), 2) / na;
  const double vb = std::pow(StdDev(b), 2) / nb;
  TTestResult r;
  const double diff = Mean(a) - Mean(b);
  if (va + vb == 0.0) {
    r.statistic = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    r.dof = na + nb - 2.0;
    r.p_value = diff == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = diff / std::sqrt(va + vb);
  r.dof = (va + vb) * (va + vb) /
          (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  boost::math::students_t dist(r.dof);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(
                        dist, std::abs(r.statistic)));
  return r;
}

Correlation Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("Pearson: need equal-length samples, n >= 3");
  }
  const double mx = Mean(x), my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  Correlation c;
  if (sxx == 0.0 || syy == 0.0) return c;
  c.r = sxy / std::sqrt(sxx * syy);
  const double n = static_cast<double>(x.size());
  const double denom = std::max(1e-300, 1.0 - c.r * c.r);
  const double t = c.r * std::sqrt((n - 2.0) / denom);
  boost::math::students_t dist(n - 2.0);
  c.p_greater = boost::math::cdf(boost::math::complement(dist, t));
  return c;
}

}  // namespace budgetbid
