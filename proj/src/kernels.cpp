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

#include "storemkt/kernels.hpp"

#include <algorithm>
#include <vector>

namespace storemkt::kernels {

namespace {
constexpr std::size_t kChunk = 1024;
// Below this size the parallel entry points fall through to the serial loop.
constexpr std::size_t kParallelCutoff = 2048;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }
}  // namespace

double sum(std::span<const double> x, Exec exec) {
  const std::size_t n = x.size();
  if (exec == Exec::kSerial || n < kParallelCutoff) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t nc = chunk_count(n);
  std::vector<double> partial(nc, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = std::min(b + kChunk, n);
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i];
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

TiltedSums tilted_argmin(std::span<const PiecewiseQuadratic> costs, double mu,
                         std::span<const double> l, std::span<const double> u,
                         std::span<double> xlo, std::span<double> xhi,
                         Exec exec) {
  const std::size_t n = costs.size();
  if (exec == Exec::kSerial || n < kParallelCutoff) {
    double slo = 0.0, shi = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const auto r = costs[t].argmin_tilted(mu, l[t], u[t]);
      xlo[t] = r.lo;
      xhi[t] = r.hi;
      slo += r.lo;
      shi += r.hi;
    }
    return {slo, shi};
  }
  const std::size_t nc = chunk_count(n);
  std::vector<double> plo(nc, 0.0), phi(nc, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = std::min(b + kChunk, n);
    double slo = 0.0, shi = 0.0;
    for (std::size_t t = b; t < e; ++t) {
      const auto r = costs[t].argmin_tilted(mu, l[t], u[t]);
      xlo[t] = r.lo;
      xhi[t] = r.hi;
      slo += r.lo;
      shi += r.hi;
    }
    plo[static_cast<std::size_t>(c)] = slo;
    phi[static_cast<std::size_t>(c)] = shi;
  }
  double slo = 0.0, shi = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    slo += plo[c];
    shi += phi[c];
  }
  return {slo, shi};
}

Bracket tilt_bracket(std::span<const PiecewiseQuadratic> costs,
                     std::span<const double> l, std::span<const double> u,
                     Exec exec) {
  const std::size_t n = costs.size();
  double lo = 0.0, hi = 0.0;
  bool any = false;
  if (exec == Exec::kSerial || n < kParallelCutoff) {
    for (std::size_t t = 0; t < n; ++t) {
      const double dl = costs[t].deriv_plus(l[t]);
      const double dh = costs[t].deriv_minus(u[t]);
      lo = any ? std::min(lo, dl) : dl;
      hi = any ? std::max(hi, dh) : dh;
      any = true;
    }
  } else {
    lo = costs[0].deriv_plus(l[0]);
    hi = costs[0].deriv_minus(u[0]);
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
      const std::size_t i = static_cast<std::size_t>(t);
      lo = std::min(lo, costs[i].deriv_plus(l[i]));
      hi = std::max(hi, costs[i].deriv_minus(u[i]));
    }
  }
  return {lo - 1.0, hi + 1.0};
}

double total_cost(std::span<const PiecewiseQuadratic> costs,
                  std::span<const double> x, Exec exec) {
  const std::size_t n = costs.size();
  if (exec == Exec::kSerial || n < kParallelCutoff) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += costs[t].value(x[t]);
    return s;
  }
  const std::size_t nc = chunk_count(n);
  std::vector<double> partial(nc, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = std::min(b + kChunk, n);
    double s = 0.0;
    for (std::size_t t = b; t < e; ++t) s += costs[t].value(x[t]);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

namespace {
double grid_gap_one(const PiecewiseQuadratic& f, double x, double mu, double l,
                    double u, int grid_n) {
  const double fx = f.value(x) - mu * x;
  double best = fx;
  const double step = (u - l) / static_cast<double>(grid_n - 1);
  for (int i = 0; i < grid_n; ++i) {
    const double g = (i + 1 == grid_n) ? u : l + step * i;
    best = std::min(best, f.value(g) - mu * g);
  }
  return std::max(0.0, fx - best);
}
}  // namespace

double max_grid_gap(std::span<const PiecewiseQuadratic> costs,
                    std::span<const double> x, std::span<const double> mu,
                    std::span<const double> l, std::span<const double> u,
                    int grid_n, Exec exec) {
  const std::size_t n = costs.size();
  double worst = 0.0;
  if (exec == Exec::kSerial || n < 64) {
    for (std::size_t t = 0; t < n; ++t)
      worst = std::max(worst, grid_gap_one(costs[t], x[t], mu[t], l[t], u[t],
                                           grid_n));
    return worst;
  }
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    worst = std::max(worst,
                     grid_gap_one(costs[i], x[i], mu[i], l[i], u[i], grid_n));
  }
  return worst;
}

double max_exact_gap(std::span<const PiecewiseQuadratic> costs,
                     std::span<const double> x, std::span<const double> mu,
                     std::span<const double> l, std::span<const double> u,
                     Exec exec) {
  const std::size_t n = costs.size();
  auto gap_one = [&](std::size_t t) {
    const auto r = costs[t].argmin_tilted(mu[t], l[t], u[t]);
    const double best = costs[t].value(r.lo) - mu[t] * r.lo;
    return std::max(0.0, costs[t].value(x[t]) - mu[t] * x[t] - best);
  };
  double worst = 0.0;
  if (exec == Exec::kSerial || n < kParallelCutoff) {
    for (std::size_t t = 0; t < n; ++t) worst = std::max(worst, gap_one(t));
    return worst;
  }
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t)
    worst = std::max(worst, gap_one(static_cast<std::size_t>(t)));
  return worst;
}

}  // namespace storemkt::kernels
