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

// Times the serial reference kernels against the OpenMP ones, then a full
// year-horizon single-store solve in both modes.

#include <chrono>
#include <cstdio>
#include <vector>

#include "storemkt/data.hpp"
#include "storemkt/dispatch.hpp"
#include "storemkt/kernels.hpp"
#include "storemkt/rng.hpp"

using namespace storemkt;
using kernels::Exec;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_ms(int reps, F&& f) {
  const double t0 = now_ms();
  for (int i = 0; i < reps; ++i) f();
  return (now_ms() - t0) / reps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.3f %10.3f %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
  const std::size_t n = 17520;  // one year of half hours
  Rng rng(12);
  std::vector<PiecewiseQuadratic> costs;
  std::vector<double> l(n), u(n), x(n), mu(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double pbar = rng.uniform(20.0, 70.0);
    costs.push_back(
        PiecewiseQuadratic::quadratic(pbar, pbar, 0.0).compose_h(0.75));
    l[t] = -1.0;
    u[t] = 1.0;
    x[t] = rng.uniform(-1.0, 1.0);
    mu[t] = rng.uniform(10.0, 90.0);
  }
  std::vector<double> scratch_lo(n), scratch_hi(n);

  std::printf("%-28s %10s %10s %8s\n", "kernel (T = 17520)", "serial ms",
              "omp ms", "speedup");
  row("sum",
      time_ms(200, [&] { kernels::sum(x, Exec::kSerial); }),
      time_ms(200, [&] { kernels::sum(x, Exec::kParallel); }));
  row("tilted_argmin",
      time_ms(50, [&] {
        kernels::tilted_argmin(costs, 40.0, l, u, scratch_lo, scratch_hi,
                               Exec::kSerial);
      }),
      time_ms(50, [&] {
        kernels::tilted_argmin(costs, 40.0, l, u, scratch_lo, scratch_hi,
                               Exec::kParallel);
      }));
  row("total_cost",
      time_ms(100, [&] { kernels::total_cost(costs, x, Exec::kSerial); }),
      time_ms(100, [&] { kernels::total_cost(costs, x, Exec::kParallel); }));
  row("max_grid_gap (1001)",
      time_ms(3, [&] {
        kernels::max_grid_gap(costs, x, mu, l, u, 1001, Exec::kSerial);
      }),
      time_ms(3, [&] {
        kernels::max_grid_gap(costs, x, mu, l, u, 1001, Exec::kParallel);
      }));

  // Full solve over a synthetic year.
  SynthParams sp;
  const auto series = synth_prices(2014, 365, sp);
  StoreSpec spec{10.0, 1.0, 1.0, 0.75, 0.0, 0.0};
  const auto prices = to_price_functions(series, 0.2, {-0.76, 1.01});
  SolveOptions so;
  so.exec = Exec::kSerial;
  const double t_serial =
      time_ms(1, [&] { optimize_single(spec, prices, {}, so); });
  so.exec = Exec::kParallel;
  const double t_par =
      time_ms(1, [&] { optimize_single(spec, prices, {}, so); });
  row("optimize_single (1 year)", t_serial, t_par);
  const auto sol = optimize_single(spec, prices, {}, so);
  std::printf("\nyear solve: objective %.6f, kkt residual %.3e\n",
              sol.objective, sol.kkt_residual);
  return 0;
}
