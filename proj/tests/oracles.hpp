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

// Test-only oracles, independent of the solver path: a level-lattice dynamic
// program for small instances, random instance generators, and a feasible
// schedule sampler. Costs here are evaluated straight through the price
// functions, never through the solver's piecewise assembly.

#ifndef STOREMKT_TESTS_ORACLES_HPP_
#define STOREMKT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "storemkt/market.hpp"
#include "storemkt/rng.hpp"
#include "storemkt/store.hpp"

namespace storemkt::testing {

inline double period_cost(const PriceFunction& pf, double eps, double x,
                          double others) {
  const double h = eff_map(eps, x);
  return h * pf(h + others);
}

// Exact minimum over schedules whose levels sit on the step lattice inside
// [0, E], with flows inside the rate box. Requires E, rates, and boundary
// levels to be lattice multiples.
inline double lattice_optimum(const StoreSpec& spec,
                              const std::vector<PriceFunction>& prices,
                              double step) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t T = prices.size();
  const auto idx = [&](double level) {
    return static_cast<long>(std::llround(level / step));
  };
  const long m = idx(spec.capacity);
  const long in_steps = idx(spec.rate_in);
  const long out_steps = idx(spec.rate_out);
  std::vector<double> dp(static_cast<std::size_t>(m) + 1, inf);
  dp[static_cast<std::size_t>(idx(spec.level_start))] = 0.0;
  std::vector<double> ndp(dp.size());
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(ndp.begin(), ndp.end(), inf);
    for (long j = 0; j <= m; ++j) {
      const double base = dp[static_cast<std::size_t>(j)];
      if (base == inf) continue;
      const long klo = std::max<long>(0, j - out_steps);
      const long khi = std::min<long>(m, j + in_steps);
      for (long k = klo; k <= khi; ++k) {
        const double x = static_cast<double>(k - j) * step;
        const double c = base + period_cost(prices[t], spec.efficiency, x, 0.0);
        double& cell = ndp[static_cast<std::size_t>(k)];
        if (c < cell) cell = c;
      }
    }
    dp.swap(ndp);
  }
  return dp[static_cast<std::size_t>(idx(spec.level_end))];
}

struct RandomInstance {
  StoreSpec spec;
  std::vector<PriceFunction> prices;
};

// Strictly convex linear-price instance with positive prices over the
// store's own flow range. agg_factor widens the valid range for multi-store
// use (n identical copies trading at once).
inline RandomInstance random_instance(Rng& rng, std::size_t t_lo,
                                      std::size_t t_hi,
                                      double agg_factor = 1.0) {
  const std::size_t T = t_lo + static_cast<std::size_t>(rng.next_u64() %
                                                        (t_hi - t_lo + 1));
  StoreSpec spec;
  spec.capacity = rng.uniform(0.5, 8.0);
  spec.rate_in = rng.uniform(0.2, 2.0);
  spec.rate_out = rng.uniform(0.2, 2.0);
  spec.efficiency = rng.uniform(0.6, 1.0);
  spec.level_start = rng.uniform(0.0, spec.capacity);
  // Keep the terminal level reachable under the rate bounds.
  const double up = spec.level_start + 0.8 * spec.rate_in * T;
  const double dn = spec.level_start - 0.8 * spec.rate_out * T;
  spec.level_end = std::clamp(rng.uniform(0.0, spec.capacity), std::max(0.0, dn),
                              std::min(spec.capacity, up));
  const double span =
      agg_factor * (std::max(spec.rate_in, spec.rate_out) + 1.0);
  RandomInstance inst;
  inst.spec = spec;
  for (std::size_t t = 0; t < T; ++t) {
    const double pbar = rng.uniform(10.0, 60.0);
    const double ps = rng.uniform(0.05, 0.8 * pbar / span);
    inst.prices.push_back(PriceFunction::linear(pbar, ps, -span, span));
  }
  return inst;
}

// Same but with every quantity on the 0.01 lattice, sized for the DP oracle.
inline RandomInstance random_lattice_instance(Rng& rng, std::size_t t_max) {
  const double step = 0.01;
  auto snap = [&](double v) { return std::round(v / step) * step; };
  const std::size_t T = 2 + static_cast<std::size_t>(rng.next_u64() %
                                                     (t_max - 1));
  StoreSpec spec;
  spec.capacity = snap(rng.uniform(0.5, 3.0));
  spec.rate_in = snap(rng.uniform(0.2, 1.5));
  spec.rate_out = snap(rng.uniform(0.2, 1.5));
  spec.efficiency = rng.uniform(0.6, 1.0);
  spec.level_start = snap(rng.uniform(0.0, spec.capacity));
  const double up = spec.level_start + spec.rate_in * T;
  const double dn = spec.level_start - spec.rate_out * T;
  spec.level_end = snap(std::clamp(rng.uniform(0.0, spec.capacity),
                                   std::max(0.0, dn),
                                   std::min(spec.capacity, up)));
  const double span = std::max(spec.rate_in, spec.rate_out) + 1.0;
  RandomInstance inst;
  inst.spec = spec;
  for (std::size_t t = 0; t < T; ++t) {
    const double pbar = rng.uniform(10.0, 60.0);
    const double ps = rng.uniform(0.05, 0.8 * pbar / span);
    inst.prices.push_back(PriceFunction::linear(pbar, ps, -span, span));
  }
  return inst;
}

// Uniformly wandering feasible schedule; terminal reachability maintained.
inline Schedule random_feasible_schedule(Rng& rng, const StoreSpec& spec,
                                         std::size_t T) {
  Schedule s;
  s.levels.push_back(spec.level_start);
  double level = spec.level_start;
  for (std::size_t t = 1; t <= T; ++t) {
    const double remain = static_cast<double>(T - t);
    double lo = std::max(level - spec.rate_out,
                         spec.level_end - spec.rate_in * remain);
    double hi = std::min(level + spec.rate_in,
                         spec.level_end + spec.rate_out * remain);
    lo = std::max(lo, 0.0);
    hi = std::min(hi, spec.capacity);
    level = (t == T) ? spec.level_end : rng.uniform(lo, hi);
    s.levels.push_back(level);
  }
  return s;
}

}  // namespace storemkt::testing

#endif  // STOREMKT_TESTS_ORACLES_HPP_
