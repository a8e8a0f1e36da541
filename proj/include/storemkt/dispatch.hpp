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

#ifndef STOREMKT_DISPATCH_HPP_
#define STOREMKT_DISPATCH_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "storemkt/kernels.hpp"
#include "storemkt/market.hpp"
#include "storemkt/piecewise.hpp"
#include "storemkt/store.hpp"

namespace storemkt {

// Cumulative Lagrange multipliers paired with an optimal schedule. mu[t-1]
// prices period t's flow; the vector is constant between times the level
// touches a bound.
struct Multipliers {
  std::vector<double> mu;
};

struct CertifiedSolution {
  Schedule schedule;
  Multipliers multipliers;
  double objective;     // total cost; profit is the negative
  double kkt_residual;  // worst violation across the certificate conditions
  bool unique;          // false when flat costs allowed ties (min-norm chosen)
};

struct SolveOptions {
  kernels::Exec exec = kernels::Exec::kParallel;
  double feas_tol = 1e-9;
  int bisect_iters = 120;
};

// Single-store scheduling problem over per-period convex costs, with flow
// boxes, level boxes, a fixed starting level, and a terminal level interval.
// level_lo/level_hi cover the interior times 1..T-1.
struct CumulativeProblem {
  std::vector<PiecewiseQuadratic> costs;
  std::vector<double> flow_lo, flow_hi;
  std::vector<double> level_lo, level_hi;
  double level_start = 0.0;
  double terminal_lo = 0.0, terminal_hi = 0.0;
};

struct CumulativeSolution {
  std::vector<double> x;
  std::vector<double> mu;
  double objective;
  bool tie_broken;
  double sum_residual;  // |terminal defect| after the dual solve
};

// Exact solve by dual decomposition: a scalar multiplier equalizes tilted
// per-period minimizers on each segment, and the segment with the largest
// level-bound breach is pinned at that bound and split. Throws
// InfeasibleError when the boundary levels are unreachable.
CumulativeSolution solve_cumulative(const CumulativeProblem& prob,
                                    const SolveOptions& opts = {});

// Per-period trading costs h(x) p_t(h(x) + others_t) for one store, exact
// piecewise-quadratic assembly. Throws DomainError when the reachable
// aggregate leaves a price function's valid range.
std::vector<PiecewiseQuadratic> trading_costs(
    const StoreSpec& spec, std::span<const PriceFunction> prices,
    std::span<const double> others);

CertifiedSolution optimize_single(const StoreSpec& spec,
                                  std::span<const PriceFunction> prices,
                                  std::span<const double> others = {},
                                  const SolveOptions& opts = {});

// Same solve with externally built per-period costs (ownership adapters).
CertifiedSolution optimize_with_costs(const StoreSpec& spec,
                                      std::span<const PiecewiseQuadratic> costs,
                                      const SolveOptions& opts = {});

struct CertificateReport {
  double max_residual;
  double feasibility;     // worst constraint violation
  double subproblem_gap;  // worst per-period tilted optimality gap
  double slackness;       // worst multiplier-pattern violation
};

// Independent audit of a (schedule, multipliers) pair: feasibility, a
// grid_n-point scan of each tilted subproblem, and the multiplier jump
// pattern against the level trajectory.
CertificateReport verify_certificate(const StoreSpec& spec,
                                     std::span<const PriceFunction> prices,
                                     std::span<const double> others,
                                     const CertifiedSolution& sol,
                                     double tol = 1e-8, int grid_n = 10001,
                                     kernels::Exec exec = kernels::Exec::kParallel);
CertificateReport verify_certificate_costs(
    const StoreSpec& spec, std::span<const PiecewiseQuadratic> costs,
    const CertifiedSolution& sol, double tol = 1e-8, int grid_n = 10001,
    kernels::Exec exec = kernels::Exec::kParallel);

// Closed-form optimal purchase for an unconstrained two-period store that
// starts and ends empty: 0 if eps * pbar2 / pbar1 < 1, else
// (eps*pbar2 - pbar1) / (2 (ps1 + eps^2 ps2)).
double two_period_unconstrained(double pbar1, double pbar2, double ps1,
                                double ps2, double eps);

struct SensitivityReport {
  std::size_t t0;
  double delta;
  bool changed;
  // Maximal runs of changed flows (t1, t0] and (t0, t2], 1-based periods.
  std::size_t t1, t2;
  std::vector<double> flow_deltas;
  double objective_delta;
};

// Re-solves with the capacity raised by delta at time t0 only (0 < t0 < T)
// and reports the difference against the base solution.
SensitivityReport sensitivity_capacity(const StoreSpec& spec,
                                       std::span<const PriceFunction> prices,
                                       std::span<const double> others,
                                       std::size_t t0, double delta,
                                       const SolveOptions& opts = {});

enum class RateSide { kIn, kOut };

SensitivityReport sensitivity_rate(const StoreSpec& spec,
                                   std::span<const PriceFunction> prices,
                                   std::span<const double> others,
                                   std::size_t t0, RateSide side, double delta,
                                   const SolveOptions& opts = {});

struct LambdaMaxResult {
  bool found;
  double lambda_max;
  std::string note;
};

// Smallest market impact factor at which the optimum of the Eq.-style family
// p_t(x) = pbar_t (1 + lambda x) leaves every rate bound and the capacity
// slack. Interior touches of level 0 do not count as binding; they are
// invariant under the 1/lambda flow scaling. Bisection to 1e-4 relative.
LambdaMaxResult find_lambda_max(const StoreSpec& spec,
                                std::span<const double> pbar, double lambda_lo,
                                double lambda_hi,
                                const SolveOptions& opts = {});

}  // namespace storemkt

#endif  // STOREMKT_DISPATCH_HPP_
