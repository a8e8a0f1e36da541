// Copyright 2026 The storemkt Authors. All rights reserved.
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

#include "storemkt/store.hpp"

#include <cmath>

#include "storemkt/errors.hpp"

namespace storemkt {

void StoreSpec::validate() const {
  if (!(capacity > 0.0)) throw DomainError("StoreSpec: capacity must be > 0");
  if (!(rate_in > 0.0)) throw DomainError("StoreSpec: rate_in must be > 0");
  if (!(rate_out > 0.0)) throw DomainError("StoreSpec: rate_out must be > 0");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw DomainError("StoreSpec: efficiency must be in (0, 1]");
  if (level_start < 0.0 || level_start > capacity)
    throw DomainError("StoreSpec: level_start outside [0, capacity]");
  if (level_end < 0.0 || level_end > capacity)
    throw DomainError("StoreSpec: level_end outside [0, capacity]");
}

FlowVector flows(const Schedule& s) {
  FlowVector x;
  if (s.levels.size() < 2) return x;
  x.reserve(s.levels.size() - 1);
  for (std::size_t t = 1; t < s.levels.size(); ++t)
    x.push_back(s.levels[t] - s.levels[t - 1]);
  return x;
}

Schedule schedule_from_flows(double s0, std::span<const double> x) {
  Schedule s;
  s.levels.reserve(x.size() + 1);
  s.levels.push_back(s0);
  double level = s0;
  for (double xt : x) {
    level += xt;
    s.levels.push_back(level);
  }
  return s;
}

Feasibility feasible(const StoreSpec& spec, const Schedule& s, double tol) {
  Feasibility f{true, {}};
  auto flag = [&](const std::string& msg) {
    f.ok = false;
    f.violations.push_back(msg);
  };
  if (s.levels.size() < 2) {
    flag("schedule has fewer than two levels");
    return f;
  }
  const std::size_t T = s.periods();
  for (double v : s.levels)
    if (!std::isfinite(v)) {
      flag("non-finite level");
      return f;
    }
  if (std::abs(s.levels.front() - spec.level_start) > tol)
    flag("starting level " + std::to_string(s.levels.front()) +
         " != " + std::to_string(spec.level_start));
  if (std::abs(s.levels.back() - spec.level_end) > tol)
    flag("terminal level " + std::to_string(s.levels.back()) +
         " != " + std::to_string(spec.level_end));
  for (std::size_t t = 1; t < T; ++t) {
    if (s.levels[t] < -tol)
      flag("level below 0 at t = " + std::to_string(t));
    if (s.levels[t] > spec.capacity + tol)
      flag("level above capacity at t = " + std::to_string(t));
  }
  for (std::size_t t = 1; t <= T; ++t) {
    const double xt = s.levels[t] - s.levels[t - 1];
    if (xt > spec.rate_in + tol)
      flag("input rate violated at t = " + std::to_string(t));
    if (xt < -spec.rate_out - tol)
      flag("output rate violated at t = " + std::to_string(t));
  }
  return f;
}

double store_cost(std::span<const double> j_flows,
                  std::span<const double> others_flows,
                  std::span<const PriceFunction> prices, double eps) {
  if (j_flows.size() != prices.size() ||
      others_flows.size() != prices.size())
    throw DomainError("store_cost: flow/price lengths disagree");
  double cost = 0.0;
  for (std::size_t t = 0; t < prices.size(); ++t) {
    const double h = eff_map(eps, j_flows[t]);
    cost += h * prices[t](h + others_flows[t]);
  }
  return cost;
}

std::vector<double> clearing_prices(std::span<const PriceFunction> prices,
                                    std::span<const Schedule> schedules,
                                    std::span<const double> efficiencies) {
  if (schedules.size() != efficiencies.size())
    throw DomainError("clearing_prices: schedule/efficiency counts disagree");
  const std::size_t T = prices.size();
  for (const Schedule& s : schedules)
    if (s.periods() != T)
      throw DomainError("clearing_prices: schedule length != horizon");
  std::vector<double> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    double agg = 0.0;
    for (std::size_t j = 0; j < schedules.size(); ++j)
      agg += eff_map(efficiencies[j],
                     schedules[j].levels[t + 1] - schedules[j].levels[t]);
    out[t] = prices[t](agg);
  }
  return out;
}

}  // namespace storemkt
