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

#ifndef STOREMKT_EQUILIBRIUM_HPP_
#define STOREMKT_EQUILIBRIUM_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storemkt/dispatch.hpp"
#include "storemkt/market.hpp"
#include "storemkt/store.hpp"

namespace storemkt {

enum class EquilibriumMode { kNash, kCooperative };

struct EquilibriumResult {
  std::vector<Schedule> schedules;
  std::vector<double> profits;
  std::vector<double> clearing;  // market price per period at the outcome
  std::size_t iterations;        // full sweeps used
  double br_residual;  // best unilateral profit improvement still available
  EquilibriumMode mode;
  bool converged;
  std::string warning;  // set on sweep-cap exits and zero-slope fallbacks
};

struct EquilibriumOptions {
  SolveOptions solve;
  // Stopping tolerance; negative means the scale-free default
  // max(1e-9, 1e-7 * |total profit|) for the profit rule. A bitwise
  // repetition of the flow vectors always stops the sweep loop.
  double tol = -1.0;
  std::size_t max_sweeps = 500;
  // When set and prices are linear, the potential is appended after every
  // single-store update.
  std::vector<double>* potential_trace = nullptr;
};

// Joint cost minimization by cyclic single-store solves whose period costs
// carry the externality on the companions, so each inner step minimizes the
// combined cost exactly. Stops when a full sweep improves the joint
// objective by less than tol. The limit is a local optimum of the joint
// problem, not guaranteed global.
EquilibriumResult cooperative(std::span<const StoreSpec> specs,
                              std::span<const PriceFunction> prices,
                              const EquilibriumOptions& opts = {});

// Sums capacities and rates into one store (equal efficiencies required),
// solves it, and splits flows in proportion to capacity. Returns nullopt
// when the split is infeasible for some member.
std::optional<EquilibriumResult> aggregate_shortcut(
    std::span<const StoreSpec> specs, std::span<const PriceFunction> prices,
    const EquilibriumOptions& opts = {});

// Cyclic best responses in fixed store order until the largest single-store
// profit improvement over a sweep drops below tol. Non-convergence within
// max_sweeps returns the trajectory with a warning. Default init ramps each
// store linearly from its start to its end level.
EquilibriumResult nash_best_response(std::span<const StoreSpec> specs,
                                     std::span<const PriceFunction> prices,
                                     std::span<const Schedule> init = {},
                                     const EquilibriumOptions& opts = {});

// Exact potential for linear prices:
// sum_t [ pbar_t sum_i h_i + (pslope_t / 2) (sum_i h_i^2 + (sum_i h_i)^2) ].
// Throws DomainError when a price function is not linear.
double potential_value(std::span<const StoreSpec> specs,
                       std::span<const PriceFunction> prices,
                       std::span<const Schedule> schedules);

// Unique Nash equilibrium for strictly increasing linear prices, found by
// block coordinate descent on the potential. Zero-slope periods fall back
// to nash_best_response with a nonuniqueness warning.
EquilibriumResult nash_linear(std::span<const StoreSpec> specs,
                              std::span<const PriceFunction> prices,
                              const EquilibriumOptions& opts = {});

struct SymmetricNashResult {
  FlowVector per_store_flows;
  double lambda_star;  // multiplier balancing total traded volume to zero
  double per_store_profit;
  std::size_t n;
};

// Closed-form symmetric equilibrium of n identical unconstrained stores with
// common start level s0 deep enough that the level never empties; throws
// DomainError (naming the period) when it would.
SymmetricNashResult unconstrained_symmetric_nash(
    std::size_t n, std::span<const PriceFunction> prices, double eps,
    double s0);

struct ScalingReport {
  std::vector<std::size_t> n;
  std::vector<double> discrepancy;  // max_t |h(x^(n)) - 2 h(x^(1)) / (n+1)|
};

// Rebuilds n identical stores with dimensions scaled by 2/(n+1), solves each
// equilibrium, and compares traded quantities against the scaling law.
ScalingReport scaling_check(const StoreSpec& base,
                            std::span<const PriceFunction> prices,
                            std::span<const std::size_t> n_list,
                            const EquilibriumOptions& opts = {});

struct OrderingCheck {
  bool applicable;  // identical rates/efficiencies, ordered boundary levels
  bool ordered;
  std::string first_violation;
};

// Capacity ordering of levels at every time, tolerance 1e-8.
OrderingCheck ordering_check(const EquilibriumResult& result,
                             std::span<const StoreSpec> specs);

}  // namespace storemkt

#endif  // STOREMKT_EQUILIBRIUM_HPP_
