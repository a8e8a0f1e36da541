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

#ifndef STOREMKT_STORE_HPP_
#define STOREMKT_STORE_HPP_

#include <span>
#include <string>
#include <vector>

#include "storemkt/market.hpp"

namespace storemkt {

// Physical parameters of one store. Rates bound the level change per period;
// losses are taken at discharge, so both rate constraints apply to the volume
// moved in or out of the store itself.
struct StoreSpec {
  double capacity;     // E
  double rate_in;      // P_I, per period
  double rate_out;     // P_O, per period
  double efficiency;   // in (0, 1]
  double level_start;  // fixed S_0
  double level_end;    // fixed S_T

  void validate() const;  // throws DomainError on a bad field
};

// Level trajectory S_0..S_T.
struct Schedule {
  std::vector<double> levels;

  std::size_t periods() const { return levels.empty() ? 0 : levels.size() - 1; }
};

using FlowVector = std::vector<double>;

// Market-side quantity of a level change: identity on purchases, scaled by
// the round-trip efficiency on sales.
inline double eff_map(double eps, double x) { return x >= 0.0 ? x : eps * x; }

// x_t = S_t - S_{t-1}
FlowVector flows(const Schedule& s);
Schedule schedule_from_flows(double s0, std::span<const double> x);

struct Feasibility {
  bool ok;
  std::vector<std::string> violations;
};

// Boundary levels, level box, and rate box, all within tol.
Feasibility feasible(const StoreSpec& spec, const Schedule& s,
                     double tol = 1e-9);

// Sum over periods of h(x_t) * p_t(h(x_t) + others_t). others holds the
// companions' aggregate market-side quantity per period. Profit is the
// negative of this.
double store_cost(std::span<const double> j_flows,
                  std::span<const double> others_flows,
                  std::span<const PriceFunction> prices, double eps);

// Market clearing price per period, p_t(sum_i h_i(x_t(S_i))).
std::vector<double> clearing_prices(std::span<const PriceFunction> prices,
                                    std::span<const Schedule> schedules,
                                    std::span<const double> efficiencies);

}  // namespace storemkt

#endif  // STOREMKT_STORE_HPP_
