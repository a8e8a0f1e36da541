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

#ifndef STOREMKT_KERNELS_HPP_
#define STOREMKT_KERNELS_HPP_

#include <cstddef>
#include <span>

#include "storemkt/piecewise.hpp"

// Data-parallel inner loops of the solvers. Each kernel has a serial
// reference implementation and an OpenMP implementation; the parallel sums
// use fixed-size chunks combined in index order, so results do not depend on
// the thread count. tools/bench_kernels compares the two.
namespace storemkt::kernels {

enum class Exec { kSerial, kParallel };

double sum(std::span<const double> x, Exec exec = Exec::kParallel);

struct TiltedSums {
  double lo_sum;
  double hi_sum;
};

// For each period t, the minimizer interval of costs[t](x) - mu*x over
// [l[t], u[t]] is written to (xlo[t], xhi[t]); returns the two sums.
TiltedSums tilted_argmin(std::span<const PiecewiseQuadratic> costs, double mu,
                         std::span<const double> l, std::span<const double> u,
                         std::span<double> xlo, std::span<double> xhi,
                         Exec exec = Exec::kParallel);

struct Bracket {
  double lo;
  double hi;
};

// Tilt range that pins every period at its box ends: lo <= min_t f'(l_t+),
// hi >= max_t f'(u_t-).
Bracket tilt_bracket(std::span<const PiecewiseQuadratic> costs,
                     std::span<const double> l, std::span<const double> u,
                     Exec exec = Exec::kParallel);

double total_cost(std::span<const PiecewiseQuadratic> costs,
                  std::span<const double> x, Exec exec = Exec::kParallel);

// Certificate audit: max over t of  (costs[t](x_t) - mu_t x_t)  minus the
// minimum of the same tilted cost over a uniform grid of grid_n points on
// [l_t, u_t]. Negative gaps clamp to zero.
double max_grid_gap(std::span<const PiecewiseQuadratic> costs,
                    std::span<const double> x, std::span<const double> mu,
                    std::span<const double> l, std::span<const double> u,
                    int grid_n, Exec exec = Exec::kParallel);

// Same gap against the exact per-piece minimizer instead of a grid.
double max_exact_gap(std::span<const PiecewiseQuadratic> costs,
                     std::span<const double> x, std::span<const double> mu,
                     std::span<const double> l, std::span<const double> u,
                     Exec exec = Exec::kParallel);

}  // namespace storemkt::kernels

#endif  // STOREMKT_KERNELS_HPP_
