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

#include "budgetbid/policies.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace budgetbid {

CensoredSample ToSample(const AuctionFeedback& fb) {
  const int bound = fb.bid_placed + 1;
  if (fb.click_won) {
    if (!fb.impression_won || fb.price_paid < 1 ||
        fb.price_paid > fb.bid_placed) {
      throw std::invalid_argument(fmt::format(
          "inconsistent feedback: click at price {} for bid {}", fb.price_paid,
          fb.bid_placed));
    }
    return CensoredSample::Direct(fb.price_paid, bound);
  }
  if (fb.price_paid != 0) {
    throw std::invalid_argument(fmt::format(
        "inconsistent feedback: charged {} without a click", fb.price_paid));
  }
  if (fb.impression_won) {
    if (fb.bid_placed < 1) {
      throw std::invalid_argument(
          "inconsistent feedback: impression won with a zero bid");
    }
    return CensoredSample::LeftCensored(bound);
  }
  return CensoredSample::RightCensored(bound);
}

namespace {

PricePmf UniformPrior(int budget_cap) {
  return PricePmf::Uniform(1, std::max(1, budget_cap));
}

}  // namespace

CensoredPriceLearner::CensoredPriceLearner(int budget_cap, TailPlacement tail)
    : support_max_(std::max(1, budget_cap)),
      tail_(tail),
      estimate_(UniformPrior(budget_cap)) {}

void CensoredPriceLearner::Observe(const AuctionFeedback& feedback) {
  log_.Append(ToSample(feedback));
  if (log_.has_left_censored()) {
    TurnbullOptions options;
    options.tail = tail_;
    estimate_ = Turnbull(log_, support_max_, options).pmf;
  } else {
    estimate_ = ProductLimit(log_, support_max_, tail_);
  }
  ++version_;
}

// --- Greedy Product-Limit ---------------------------------------------------

GreedyProductLimit::GreedyProductLimit(int budget_cap, int horizon,
                                       GreedyProductLimitOptions options)
    : budget_cap_(budget_cap),
      horizon_(horizon),
      options_(std::move(options)),
      learner_(budget_cap, options_.tail) {
  if (budget_cap < 0 || horizon < 1) {
    throw std::invalid_argument("GreedyProductLimit: need B >= 0 and T >= 1");
  }
}

const PricePmf& GreedyProductLimit::estimate() const {
  return options_.frozen ? *options_.frozen : learner_.estimate();
}

void GreedyProductLimit::BeginPeriod(int budget) {
  frozen_for_period_ = false;
  if (options_.cadence == ResolveCadence::kEveryPeriod && !options_.frozen) {
    table_ = Solve(estimate(), budget, horizon_, options_.ctr);
    table_version_ = learner_.version();
    ++solve_count_;
    frozen_for_period_ = true;
  }
}

int GreedyProductLimit::NextBid(int budget, int remaining) {
  if (budget <= 0 || remaining <= 0) return 0;
  const bool covers = table_ && budget <= table_->budget_cap() &&
                      remaining <= table_->horizon();
  const bool stale = !options_.frozen && !frozen_for_period_ &&
                     table_version_ != learner_.version();
  if (!covers || stale) {
    const int b = options_.frozen ? std::max(budget, budget_cap_) : budget;
    const int t = options_.frozen ? std::max(remaining, horizon_) : remaining;
    table_ = Solve(estimate(), b, t, options_.ctr);
    table_version_ = learner_.version();
    ++solve_count_;
  }
  return table_->BestBid(budget, remaining);
}

void GreedyProductLimit::Observe(const AuctionFeedback& feedback) {
  if (options_.frozen) {
    ToSample(feedback);  // validates
    return;
  }
  learner_.Observe(feedback);
}

// --- LuekerLearn -------------------------------------------------------------

LuekerLearn::LuekerLearn(int budget_cap, LuekerLearnOptions options)
    : options_(std::move(options)), learner_(budget_cap, options_.tail) {}

const PricePmf& LuekerLearn::estimate() const {
  return options_.frozen ? *options_.frozen : learner_.estimate();
}

int LuekerLearn::NextBid(int budget, int remaining) {
  if (budget <= 0 || remaining <= 0) return 0;
  return std::min(LuekerThreshold(estimate(), budget, remaining), budget);
}

void LuekerLearn::Observe(const AuctionFeedback& feedback) {
  if (options_.frozen) {
    ToSample(feedback);
    return;
  }
  learner_.Observe(feedback);
}

// --- Fixed price -------------------------------------------------------------

FixedPrice::FixedPrice(int price, bool strict) : price_(price), strict_(strict) {
  if (price < 0) throw std::invalid_argument("FixedPrice: price must be >= 0");
}

int FixedPrice::NextBid(int budget, int /*remaining*/) {
  if (budget < price_) return strict_ ? 0 : std::max(budget, 0);
  return price_;
}

// --- Fixed-Price Search --------------------------------------------------------

std::vector<int> GeometricPriceGrid(int max_price, double ratio) {
  if (!(ratio > 1.0)) {
    throw std::invalid_argument("GeometricPriceGrid: ratio must exceed 1");
  }
  std::vector<int> grid;
  double x = 1.0;
  while (true) {
    const double c = std::ceil(x - 1e-9);
    if (c > max_price) break;
    const int price = static_cast<int>(c);
    if (grid.empty() || grid.back() != price) grid.push_back(price);
    x *= ratio;
  }
  return grid;
}

Exp3::Exp3(int arms, double gamma) : gamma_(gamma), log_weights_(arms, 0.0) {
  if (arms < 1) throw std::invalid_argument("Exp3: need at least one arm");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("Exp3: gamma must be in (0, 1]");
  }
}

std::vector<double> Exp3::Weights() const {
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  std::vector<double> w(log_weights_.size());
  for (size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights_[i] - top);
  return w;
}

std::vector<double> Exp3::Probabilities() const {
  std::vector<double> w = Weights();
  double total = 0.0;
  for (double x : w) total += x;
  const double k = static_cast<double>(w.size());
  for (double& x : w) x = (1.0 - gamma_) * x / total + gamma_ / k;
  return w;
}

int Exp3::Draw(Rng& rng) const {
  const std::vector<double> p = Probabilities();
  const double u = rng.Uniform();
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

void Exp3::Update(int arm, double reward) {
  if (arm < 0 || arm >= arms()) throw std::out_of_range("Exp3: bad arm");
  const double p = Probabilities()[arm];
  const double estimate = reward / p;
  log_weights_[arm] += gamma_ * estimate / arms();
}

FixedPriceSearch::FixedPriceSearch(int budget_cap, int horizon,
                                   FixedPriceSearchOptions options)
    : horizon_(horizon),
      grid_(GeometricPriceGrid(std::max(1, budget_cap), options.grid_ratio)),
      bandit_(static_cast<int>(grid_.size()), options.gamma),
      rng_(options.seed) {
  if (horizon < 1) throw std::invalid_argument("FixedPriceSearch: T < 1");
}

int FixedPriceSearch::current_price() const {
  return arm_ < 0 ? 0 : grid_[arm_];
}

void FixedPriceSearch::BeginPeriod(int /*budget*/) {
  arm_ = bandit_.Draw(rng_);
  clicks_ = 0;
}

int FixedPriceSearch::NextBid(int budget, int /*remaining*/) {
  if (arm_ < 0) arm_ = bandit_.Draw(rng_);
  return std::min(grid_[arm_], std::max(budget, 0));
}

void FixedPriceSearch::Observe(const AuctionFeedback& feedback) {
  if (feedback.click_won) ++clicks_;
}

void FixedPriceSearch::EndPeriod() {
  if (arm_ < 0) return;
  bandit_.Update(arm_, std::min(1.0, static_cast<double>(clicks_) / horizon_));
  arm_ = -1;
  clicks_ = 0;
}

// --- Q-learning ----------------------------------------------------------------

QLearning::QLearning(int budget_cap, int horizon, QLearningOptions options)
    : budget_cap_(budget_cap),
      horizon_(horizon),
      options_(options),
      epsilon_(options.epsilon),
      rng_(options.seed) {
  if (!(options.alpha > 0.0 && options.alpha <= 1.0)) {
    throw std::invalid_argument("QLearning: alpha must be in (0, 1]");
  }
  if (!(options.epsilon >= 0.0 && options.epsilon <= 1.0)) {
    throw std::invalid_argument("QLearning: epsilon must be in [0, 1]");
  }
  if (!(options.epsilon_decay > 0.0 && options.epsilon_decay <= 1.0)) {
    throw std::invalid_argument("QLearning: epsilon_decay must be in (0, 1]");
  }
}

std::vector<double>& QLearning::Row(int budget, int remaining) {
  const int64_t key = static_cast<int64_t>(remaining) * (budget_cap_ + 1) + budget;
  auto it = rows_.find(key);
  if (it == rows_.end()) {
    it = rows_.emplace(key, std::vector<double>(budget + 1, 0.0)).first;
  }
  return it->second;
}

double QLearning::q_value(int bid, int budget, int remaining) const {
  const int64_t key = static_cast<int64_t>(remaining) * (budget_cap_ + 1) + budget;
  auto it = rows_.find(key);
  if (it == rows_.end() || bid < 0 || bid > budget) return 0.0;
  return it->second[bid];
}

void QLearning::set_q_value(int bid, int budget, int remaining, double value) {
  if (bid < 0 || bid > budget) throw std::out_of_range("QLearning: bad bid");
  Row(budget, remaining)[bid] = value;
}

double QLearning::BestValue(int budget, int remaining) const {
  const int64_t key = static_cast<int64_t>(remaining) * (budget_cap_ + 1) + budget;
  auto it = rows_.find(key);
  if (it == rows_.end()) return 0.0;
  return *std::max_element(it->second.begin(), it->second.end());
}

int QLearning::GreedyBid(int budget, int remaining) const {
  const int64_t key = static_cast<int64_t>(remaining) * (budget_cap_ + 1) + budget;
  auto it = rows_.find(key);
  if (it == rows_.end()) return 0;
  const auto& row = it->second;
  return static_cast<int>(std::max_element(row.begin(), row.end()) -
                          row.begin());
}

int QLearning::NextBid(int budget, int remaining) {
  budget = std::max(budget, 0);
  int bid;
  if (rng_.Uniform() < epsilon_) {
    bid = static_cast<int>(rng_.UniformInt(0, budget));
  } else {
    bid = GreedyBid(budget, remaining);
  }
  pending_ = Pending{bid, budget, remaining};
  return bid;
}

void QLearning::Observe(const AuctionFeedback& feedback) {
  if (!pending_) return;
  const Pending s = *pending_;
  pending_.reset();
  const double reward = feedback.click_won ? 1.0 : 0.0;
  const int next_t = s.remaining - 1;
  const double bootstrap =
      next_t <= 0 ? 0.0 : BestValue(feedback.budget_after, next_t);
  double& q = Row(s.budget, s.remaining)[s.bid];
  q = (1.0 - options_.alpha) * q + options_.alpha * (reward + bootstrap);
}

void QLearning::EndPeriod() { epsilon_ *= options_.epsilon_decay; }

// --- Budget smoothing ----------------------------------------------------------

BudgetSmoothing::BudgetSmoothing(int budget_cap, int scale)
    : budget_cap_(budget_cap),
      scale_(scale > 0 ? scale : std::max(1, budget_cap / 10)) {}

int BudgetSmoothing::NextBid(int budget, int /*remaining*/) {
  if (budget <= 0 || budget_cap_ <= 0) return 0;
  const double z = static_cast<double>(budget) / budget_cap_;
  const double level = 1.0 / (1.0 + std::exp(z - 1.0));
  const int bid = static_cast<int>(std::lround(scale_ * level));
  return std::min(budget, bid);
}

// --- Factory ---------------------------------------------------------------------

namespace {

struct PolicyInfo {
  const char* name;
  const char* alias;
  std::vector<std::pair<std::string, std::string>> defaults;
};

const std::vector<PolicyInfo>& Registry() {
  static const std::vector<PolicyInfo> registry = {
      {"greedy_product_limit",
       "gpl",
       {{"ctr", "auto"},
        {"frozen", "false"},
        {"resolve", "auction"},
        {"tail", "bound"}}},
      {"lueker_learn", "lueker", {{"frozen", "false"}, {"tail", "bound"}}},
      {"fixed_price_search",
       "fps",
       {{"gamma", "0.1"}, {"grid_ratio", "1.3"}}},
      {"q_learn",
       "qlearn",
       {{"alpha", "0.1"}, {"epsilon", "0.1"}, {"epsilon_decay", "0.995"}}},
      {"budget_smoothing", "smoothing", {{"scale", "auto"}}},
      {"fixed_price", "fixed", {{"price", "1"}, {"strict", "false"}}},
  };
  return registry;
}

const PolicyInfo& Lookup(const std::string& name) {
  for (const PolicyInfo& info : Registry()) {
    if (name == info.name || name == info.alias) return info;
  }
  std::string available;
  for (const PolicyInfo& info : Registry()) {
    available += fmt::format("{}{} ({})", available.empty() ? "" : ", ",
                             info.name, info.alias);
  }
  throw std::invalid_argument(
      fmt::format("unknown policy '{}'; available: {}", name, available));
}

double ParseDouble(const std::string& policy, const std::string& key,
                   const std::string& value) {
  try {
    size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format(
        "policy {}: parameter '{}' must be a number, got '{}'", policy, key,
        value));
  }
}

int ParseInt(const std::string& policy, const std::string& key,
             const std::string& value) {
  const double x = ParseDouble(policy, key, value);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw std::invalid_argument(fmt::format(
        "policy {}: parameter '{}' must be an integer, got '{}'", policy, key,
        value));
  }
  return static_cast<int>(x);
}

bool ParseBool(const std::string& policy, const std::string& key,
               const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument(fmt::format(
      "policy {}: parameter '{}' must be true or false, got '{}'", policy, key,
      value));
}

TailPlacement ParseTail(const std::string& policy, const std::string& value) {
  if (value == "bound") return TailPlacement::kAtLargestBound;
  if (value == "above") return TailPlacement::kAboveSupport;
  throw std::invalid_argument(fmt::format(
      "policy {}: parameter 'tail' must be bound or above, got '{}'", policy,
      value));
}

}  // namespace

std::vector<std::string> PolicyNames() {
  std::vector<std::string> names;
  for (const PolicyInfo& info : Registry()) names.push_back(info.name);
  return names;
}

std::string CanonicalPolicyName(const std::string& name) {
  return Lookup(name).name;
}

std::map<std::string, std::string> ResolvePolicyParams(const PolicySpec& spec) {
  const PolicyInfo& info = Lookup(spec.name);
  std::map<std::string, std::string> resolved(info.defaults.begin(),
                                              info.defaults.end());
  for (const auto& [key, value] : spec.params) {
    if (!resolved.contains(key)) {
      throw std::invalid_argument(fmt::format(
          "policy {}: unknown parameter '{}'", info.name, key));
    }
    resolved[key] = value;
  }
  return resolved;
}

std::unique_ptr<BidPolicy> MakePolicy(const PolicySpec& spec,
                                      const PolicyContext& context) {
  const std::string name = CanonicalPolicyName(spec.name);
  const auto p = ResolvePolicyParams(spec);
  const int budget = context.budget;
  const int horizon = context.horizon;

  auto frozen_pmf = [&](bool frozen) -> std::optional<PricePmf> {
    if (!frozen) return std::nullopt;
    if (!context.true_pmf) {
      throw std::invalid_argument(fmt::format(
          "policy {}: frozen=true needs a known market distribution", name));
    }
    return context.true_pmf;
  };

  if (name == "greedy_product_limit") {
    GreedyProductLimitOptions o;
    o.ctr = p.at("ctr") == "auto" ? context.ctr
                                  : ParseDouble(name, "ctr", p.at("ctr"));
    if (!(o.ctr > 0.0 && o.ctr <= 1.0)) {
      throw std::invalid_argument(
          fmt::format("policy {}: ctr must be in (0, 1]", name));
    }
    const std::string& resolve = p.at("resolve");
    if (resolve == "auction") {
      o.cadence = ResolveCadence::kEveryAuction;
    } else if (resolve == "period") {
      o.cadence = ResolveCadence::kEveryPeriod;
    } else {
      throw std::invalid_argument(fmt::format(
          "policy {}: resolve must be auction or period, got '{}'", name,
          resolve));
    }
    o.tail = ParseTail(name, p.at("tail"));
    o.frozen = frozen_pmf(ParseBool(name, "frozen", p.at("frozen")));
    return std::make_unique<GreedyProductLimit>(budget, horizon, std::move(o));
  }
  if (name == "lueker_learn") {
    LuekerLearnOptions o;
    o.tail = ParseTail(name, p.at("tail"));
    o.frozen = frozen_pmf(ParseBool(name, "frozen", p.at("frozen")));
    return std::make_unique<LuekerLearn>(budget, std::move(o));
  }
  if (name == "fixed_price_search") {
    FixedPriceSearchOptions o;
    o.gamma = ParseDouble(name, "gamma", p.at("gamma"));
    o.grid_ratio = ParseDouble(name, "grid_ratio", p.at("grid_ratio"));
    o.seed = context.seed;
    return std::make_unique<FixedPriceSearch>(budget, horizon, o);
  }
  if (name == "q_learn") {
    QLearningOptions o;
    o.alpha = ParseDouble(name, "alpha", p.at("alpha"));
    o.epsilon = ParseDouble(name, "epsilon", p.at("epsilon"));
    o.epsilon_decay = ParseDouble(name, "epsilon_decay", p.at("epsilon_decay"));
    o.seed = context.seed;
    return std::make_unique<QLearning>(budget, horizon, o);
  }
  if (name == "budget_smoothing") {
    const int scale =
        p.at("scale") == "auto" ? 0 : ParseInt(name, "scale", p.at("scale"));
    if (p.at("scale") != "auto" && scale < 1) {
      throw std::invalid_argument(
          fmt::format("policy {}: scale must be >= 1", name));
    }
    return std::make_unique<BudgetSmoothing>(budget, scale);
  }
  // fixed_price
  const int price = ParseInt(name, "price", p.at("price"));
  if (price < 0) {
    throw std::invalid_argument(
        fmt::format("policy {}: price must be >= 0", name));
  }
  return std::make_unique<FixedPrice>(price,
                                      ParseBool(name, "strict", p.at("strict")));
}

}  // namespace budgetbid
