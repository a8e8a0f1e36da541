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

#ifndef STOREMKT_WELFARE_HPP_
#define STOREMKT_WELFARE_HPP_

#include <span>
#include <utility>
#include <vector>

#include "storemkt/curves.hpp"
#include "storemkt/market.hpp"
#include "storemkt/piecewise.hpp"
#include "storemkt/store.hpp"

namespace storemkt {

// Consumer demand as a function of price: nonincreasing, nonnegative.
// Absolute surplus diverges for the inelastic form, so only surplus
// differences are exposed anywhere in this module.
class DemandModel {
 public:
  static DemandModel inelastic(double d_star);
  // d(p) = max(a - b*p, 0), b > 0
  static DemandModel linear(double a, double b);
  // Nonincreasing breakpoints (p, quantity); flat beyond the ends.
  static DemandModel tabulated(std::vector<std::pair<double, double>> pts);

  double quantity(double p) const;
  // \int_{p0}^{p1} d(p) dp, exact.
  double integral(double p0, double p1) const;

  bool is_inelastic() const { return kind_ == Kind::kInelastic; }
  bool is_linear() const { return kind_ == Kind::kLinear; }
  double d_star() const;  // inelastic only
  double lin_a() const;   // linear only
  double lin_b() const;
  // Prices where the demand curve kinks; empty for the inelastic form.
  std::vector<double> price_breakpoints() const;

 private:
  enum class Kind { kInelastic, kLinear, kTabulated };
  DemandModel(Kind k, Polyline c, double a, double b)
      : kind_(k), curve_(std::move(c)), a_(a), b_(b) {}
  Kind kind_;
  Polyline curve_;
  double a_ = 0.0, b_ = 0.0;
};

// Generator with a nondecreasing marginal production cost and a hard
// capacity on output.
struct GeneratorModel {
  Polyline marginal_cost;
  double capacity;

  static GeneratorModel linear(double mc0, double mc_slope, double capacity);
  void validate() const;
};

// Sum over periods of the consumer-surplus change when prices move from
// prices_without to prices_with; positive means consumers gained.
double surplus_delta_exact(std::span<const DemandModel> demand,
                           std::span<const double> prices_with,
                           std::span<const double> prices_without);

// Linearized change: -sum_t h_t * pslope_t * base_demand_t.
double surplus_delta_approx(std::span<const double> flows_marketside,
                            std::span<const double> slopes,
                            std::span<const double> base_demand);

// Ownership-variant per-period cost functions, each anchored to zero cost at
// zero flow and ready for optimize_with_costs. All three assemble the cost's
// marginal in the market-side quantity and integrate it exactly; a marginal
// that decreases anywhere on the store's range is rejected with
// NonConvexError.

// Store owned by the consumers: payment for the stored energy plus the
// surplus lost to the price move. Linear prices only.
std::vector<PiecewiseQuadratic> consumer_owned_costs(
    const StoreSpec& spec, std::span<const PriceFunction> prices,
    std::span<const DemandModel> demand);

// Store owned by the generator: production cost of the extra output after
// the generator re-optimizes its sales against the period demand.
std::vector<PiecewiseQuadratic> generator_owned_costs(
    const StoreSpec& spec, std::span<const GeneratorModel> gen,
    std::span<const DemandModel> demand);

// Store and generator owned by society: production cost net of gross
// consumer benefit after clearing the cost curve against demand.
std::vector<PiecewiseQuadratic> social_costs(
    const StoreSpec& spec, std::span<const GeneratorModel> gen,
    std::span<const DemandModel> demand);

}  // namespace storemkt

#endif  // STOREMKT_WELFARE_HPP_
