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

#ifndef BUDGETBID_STATS_H_
#define BUDGETBID_STATS_H_

#include <span>

namespace budgetbid {

double Mean(std::span<const double> xs);
// Sample standard deviation (n - 1 denominator); zero for fewer than two.
double StdDev(std::span<const double> xs);

struct TTestResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;  // two-sided
};

// Unpaired two-sample t-test with Welch's degrees of freedom.
TTestResult WelchTTest(std::span<const double> a, std::span<const double> b);

struct Correlation {
  double r = 0.0;
  double p_greater = 1.0;  // one-sided p-value for r > 0
};

// Pearson correlation with the t-distribution test on n - 2 degrees of
// freedom.
Correlation Pearson(std::span<const double> x, std::span<const double> y);

}  // namespace budgetbid

#endif  // BUDGETBID_STATS_H_
