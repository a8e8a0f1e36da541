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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "storemkt/equilibrium.hpp"
#include "storemkt/errors.hpp"

using namespace storemkt;
using namespace storemkt::testing;

namespace {
std::vector<PriceFunction> linear_series(std::vector<double> pbar,
                                         std::vector<double> ps, double lo,
                                         double hi) {
  std::vector<PriceFunction> out;
  for (std::size_t t = 0; t < pbar.size(); ++t)
    out.push_back(PriceFunction::linear(pbar[t], ps[t], lo, hi));
  return out;
}
}  // namespace

TEST_CASE("cooperative with one store equals the single-store solve") {
  StoreSpec spec{10.0, 1.0, 1.0, 0.8, 0.0, 0.0};
  auto prices = linear_series({10, 10, 30, 30}, {1, 1, 1, 1}, -2, 2);
  const auto coop = cooperative(std::vector{spec}, prices);
  const auto single = optimize_single(spec, prices);
  CHECK(coop.profits[0] == doctest::Approx(-single.objective).epsilon(1e-9));
  const auto xc = flows(coop.schedules[0]);
  const auto xs = flows(single.schedule);
  for (std::size_t t = 0; t < xc.size(); ++t)
    CHECK(xc[t] == doctest::Approx(xs[t]).epsilon(1e-9));
}

TEST_CASE("constant prices leave every solution at zero profit") {
  auto prices = linear_series({20, 20, 20, 20}, {0.5, 0.5, 0.5, 0.5}, -4, 4);
  std::vector<StoreSpec> specs{{5.0, 1.0, 1.0, 0.9, 0.0, 0.0},
                               {3.0, 1.0, 1.0, 0.7, 0.0, 0.0}};
  const auto nash = nash_best_response(specs, prices);
  CHECK(nash.converged);
  for (double p : nash.profits) CHECK(std::abs(p) < 1e-9);
  const auto coop = cooperative(specs, prices);
  for (double p : coop.profits) CHECK(std::abs(p) < 1e-9);
}

TEST_CASE("aggregate shortcut splits equal-ratio stores by capacity") {
  std::vector<StoreSpec> specs{{4.0, 1.0, 1.0, 0.8, 0.0, 0.0},
                               {8.0, 2.0, 2.0, 0.8, 0.0, 0.0}};
  auto prices = linear_series({10, 12, 30, 28}, {1, 1, 1, 1}, -4, 4);
  const auto cut = aggregate_shortcut(specs, prices);
  REQUIRE(cut.has_value());
  // One third and two thirds of the summed store.
  StoreSpec total{12.0, 3.0, 3.0, 0.8, 0.0, 0.0};
  const auto agg = optimize_single(total, prices);
  const auto x0 = flows(cut->schedules[0]);
  const auto xa = flows(agg.schedule);
  for (std::size_t t = 0; t < x0.size(); ++t)
    CHECK(x0[t] == doctest::Approx(xa[t] / 3.0).epsilon(1e-9));
  // The cyclic cooperative solve lands on the same joint profit.
  const auto coop = cooperative(specs, prices);
  const double tot_cut = cut->profits[0] + cut->profits[1];
  const double tot_coop = coop.profits[0] + coop.profits[1];
  CHECK(tot_cut == doctest::Approx(tot_coop).epsilon(1e-6));
}

TEST_CASE("aggregate shortcut declines an infeasible split") {
  std::vector<StoreSpec> specs{{9.0, 0.1, 0.1, 1.0, 0.0, 0.0},
                               {1.0, 2.0, 2.0, 1.0, 0.0, 0.0}};
  auto prices = linear_series({10, 30}, {1, 1}, -4, 4);
  CHECK(!aggregate_shortcut(specs, prices).has_value());
}

TEST_CASE("aggregate shortcut on a single store is trivially applicable") {
  std::vector<StoreSpec> specs{{4.0, 1.0, 1.0, 0.9, 0.0, 0.0}};
  auto prices = linear_series({10, 30}, {1, 1}, -2, 2);
  const auto cut = aggregate_shortcut(specs, prices);
  REQUIRE(cut.has_value());
  CHECK(cut->br_residual < 1e-8);
}

TEST_CASE("potential value") {
  std::vector<StoreSpec> specs{{10.0, 5.0, 5.0, 1.0, 0.0, 0.0}};
  auto prices = linear_series({10, 20}, {1, 1}, -6, 6);
  SUBCASE("zero schedules give zero") {
    std::vector<Schedule> ss{Schedule{{0.0, 0.0, 0.0}}};
    CHECK(potential_value(specs, prices, ss) == doctest::Approx(0.0));
  }
  SUBCASE("single store potential equals its cost") {
    std::vector<Schedule> ss{Schedule{{0.0, 1.0, 0.0}}};
    CHECK(potential_value(specs, prices, ss) == doctest::Approx(-8.0));
    std::vector<double> zeros(2, 0.0);
    CHECK(potential_value(specs, prices, ss) ==
          doctest::Approx(store_cost(flows(ss[0]), zeros, prices, 1.0)));
  }
  SUBCASE("label swap is symmetric") {
    std::vector<StoreSpec> two{{10.0, 5.0, 5.0, 1.0, 0.0, 0.0},
                               {10.0, 5.0, 5.0, 1.0, 0.0, 0.0}};
    std::vector<Schedule> ss{Schedule{{0.0, 1.0, 0.0}},
                             Schedule{{0.0, 2.0, 0.0}}};
    const double a = potential_value(two, prices, ss);
    std::swap(ss[0], ss[1]);
    CHECK(potential_value(two, prices, ss) == doctest::Approx(a));
  }
  SUBCASE("tabulated prices are rejected") {
    std::vector<PriceFunction> tab{
        PriceFunction::tabulated({{-6.0, 5.0}, {6.0, 15.0}}),
        PriceFunction::tabulated({{-6.0, 15.0}, {6.0, 25.0}})};
    std::vector<Schedule> ss{Schedule{{0.0, 1.0, 0.0}}};
    CHECK_THROWS_AS(potential_value(specs, tab, ss), DomainError);
  }
}

TEST_CASE("best response: zero trade is a fixed point under constant prices") {
  std::vector<StoreSpec> specs{{5.0, 1.0, 1.0, 0.9, 0.0, 0.0},
                               {5.0, 1.0, 1.0, 0.9, 0.0, 0.0}};
  auto prices = linear_series({15, 15, 15}, {0.2, 0.2, 0.2}, -3, 3);
  const auto res = nash_best_response(specs, prices);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  for (const auto& s : res.schedules)
    for (double xt : flows(s)) CHECK(std::abs(xt) < 1e-9);
}

TEST_CASE("no profitable unilateral deviation on a fine lattice") {
  std::vector<StoreSpec> specs{{2.0, 2.0, 2.0, 1.0, 0.0, 0.0},
                               {2.0, 2.0, 2.0, 1.0, 0.0, 0.0}};
  auto prices = linear_series({10, 20}, {1, 1}, -5, 5);
  EquilibriumOptions opts;
  opts.tol = 1e-12;
  const auto res = nash_best_response(specs, prices, {}, opts);
  REQUIRE(res.converged);
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<double> others(2, 0.0);
    const auto& other = res.schedules[1 - j];
    for (std::size_t t = 0; t < 2; ++t)
      others[t] = eff_map(1.0, other.levels[t + 1] - other.levels[t]);
    const double mine = res.profits[j];
    for (int i = 0; i <= 200; ++i) {
      const double s1 = 2.0 * i / 200.0;
      FlowVector dev{s1, -s1};
      const double p = -store_cost(dev, others, prices, 1.0);
      CHECK(p <= mine + 1e-7);
    }
  }
}

TEST_CASE("potential never increases along best-response steps") {
  Rng rng(404);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = random_instance(rng, 3, 6, 3.0);
    std::vector<StoreSpec> specs{inst.spec, inst.spec, inst.spec};
    std::vector<double> trace;
    EquilibriumOptions opts;
    opts.potential_trace = &trace;
    nash_best_response(specs, inst.prices, {}, opts);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] <= trace[i - 1] + 1e-10);
  }
}

TEST_CASE("potential descent and best response find the same flows") {
  Rng rng(606);
  for (int trial = 0; trial < 8; ++trial) {
    const auto inst = random_instance(rng, 2, 6, 2.0);
    std::vector<StoreSpec> specs{inst.spec, inst.spec};
    EquilibriumOptions tight;
    tight.tol = 0.0;
    tight.max_sweeps = 3000;
    const auto a = nash_linear(specs, inst.prices, tight);
    EquilibriumOptions br = tight;
    const auto b = nash_best_response(specs, inst.prices, {}, br);
    for (std::size_t j = 0; j < specs.size(); ++j) {
      const auto xa = flows(a.schedules[j]);
      const auto xb = flows(b.schedules[j]);
      for (std::size_t t = 0; t < xa.size(); ++t)
        CHECK(std::abs(xa[t] - xb[t]) < 1e-6);
    }
  }
}

TEST_CASE("closed-form symmetric equilibrium") {
  auto prices = linear_series({10, 20, 14, 24}, {1, 1, 1, 1}, -60, 60);
  SUBCASE("per-store flows shrink as 1/(n+1), profits as 1/(n+1)^2") {
    const auto one = unconstrained_symmetric_nash(1, prices, 0.8, 10.0);
    const auto three = unconstrained_symmetric_nash(3, prices, 0.8, 10.0);
    for (std::size_t t = 0; t < 4; ++t)
      CHECK(one.per_store_flows[t] ==
            doctest::Approx(2.0 * three.per_store_flows[t]).epsilon(1e-10));
    CHECK(one.per_store_profit ==
          doctest::Approx(4.0 * three.per_store_profit).epsilon(1e-10));
  }
  SUBCASE("total profit falls as 4n/(n+1)^2 of the single store's") {
    const auto one = unconstrained_symmetric_nash(1, prices, 0.8, 10.0);
    for (std::size_t n : {2u, 3u, 5u}) {
      const auto res = unconstrained_symmetric_nash(n, prices, 0.8, 10.0);
      const double ratio =
          (n * res.per_store_profit) / one.per_store_profit;
      const double law = 4.0 * n / ((n + 1.0) * (n + 1.0));
      CHECK(ratio == doctest::Approx(law).epsilon(1e-8));
    }
  }
  SUBCASE("marginal-balance identity holds at every period") {
    for (std::size_t n : {1u, 2u, 4u}) {
      const auto res = unconstrained_symmetric_nash(n, prices, 0.8, 10.0);
      for (std::size_t t = 0; t < 4; ++t) {
        const double x = res.per_store_flows[t];
        const double h = eff_map(0.8, x);
        const double lhs =
            h * (prices[t].pbar() + (n + 1.0) * prices[t].pslope() * h);
        CHECK(std::abs(lhs - res.lambda_star * x) < 1e-10);
      }
    }
  }
  SUBCASE("flat series trades nothing") {
    auto flat = linear_series({20, 20, 20}, {1, 1, 1}, -60, 60);
    const auto res = unconstrained_symmetric_nash(2, flat, 0.9, 5.0);
    for (double x : res.per_store_flows) CHECK(std::abs(x) < 1e-10);
    CHECK(res.per_store_profit == doctest::Approx(0.0));
  }
  SUBCASE("an emptying store is rejected") {
    // Selling first drives a shallow store below zero.
    auto sell_first = linear_series({24, 10, 20, 14}, {1, 1, 1, 1}, -60, 60);
    CHECK_THROWS_AS(unconstrained_symmetric_nash(1, sell_first, 0.8, 0.1),
                    DomainError);
  }
}

TEST_CASE("symmetric closed form agrees with the equilibrium solver") {
  auto prices = linear_series({10, 20, 14, 24}, {1, 1, 1, 1}, -60, 60);
  for (std::size_t n : {1u, 2u, 3u}) {
    const auto cf = unconstrained_symmetric_nash(n, prices, 0.8, 10.0);
    StoreSpec spec{100.0, 50.0, 50.0, 0.8, 10.0, 10.0};
    std::vector<StoreSpec> specs(n, spec);
    EquilibriumOptions opts;
    opts.tol = 0.0;
    opts.max_sweeps = 3000;
    const auto res = nash_linear(specs, prices, opts);
    for (std::size_t j = 0; j < n; ++j) {
      const auto x = flows(res.schedules[j]);
      for (std::size_t t = 0; t < x.size(); ++t)
        CHECK(x[t] == doctest::Approx(cf.per_store_flows[t]).epsilon(1e-8));
    }
  }
}

TEST_CASE("scaling law for redimensioned identical stores") {
  StoreSpec base{4.0, 1.0, 1.0, 0.75, 0.0, 0.0};
  auto prices = linear_series({12, 28, 10, 30, 16, 22}, {1, 1, 1, 1, 1, 1},
                              -8, 8);
  std::vector<std::size_t> ns{1, 2, 5};
  const auto rep = scaling_check(base, prices, ns);
  CHECK(rep.discrepancy[0] == doctest::Approx(0.0));
  CHECK(rep.discrepancy[1] < 1e-6);
  CHECK(rep.discrepancy[2] < 1e-6);
}

TEST_CASE("levels stay ordered by capacity") {
  std::vector<StoreSpec> specs{{5.0, 1.0, 1.0, 0.9, 0.0, 0.0},
                               {10.0, 1.0, 1.0, 0.9, 0.0, 0.0}};
  auto prices = linear_series({10, 25, 12, 30, 11, 26}, {1, 1, 1, 1, 1, 1},
                              -4, 4);
  const auto res = nash_linear(specs, prices);
  const auto check = ordering_check(res, specs);
  CHECK(check.applicable);
  CHECK(check.ordered);

  std::vector<StoreSpec> mixed{{5.0, 1.0, 1.0, 0.5, 0.0, 0.0},
                               {10.0, 1.0, 1.0, 0.9, 0.0, 0.0}};
  const auto na = ordering_check(res, mixed);
  CHECK(!na.applicable);
}

TEST_CASE("competition erodes total profit") {
  // Total capacity and rate held fixed while the store count grows.
  // Slopes steep enough that trades settle inside the rate bounds.
  auto prices = linear_series({10, 10, 30, 30, 12, 12, 28, 28},
                              {8, 8, 8, 8, 8, 8, 8, 8}, -3, 3);
  const double E = 2.0, P = 1.0;
  std::vector<double> totals;
  for (std::size_t n : {1u, 2u, 3u}) {
    StoreSpec s{E / n, P / n, P / n, 0.75, 0.0, 0.0};
    std::vector<StoreSpec> specs(n, s);
    const auto res = nash_linear(specs, prices);
    double total = 0.0;
    for (double p : res.profits) total += p;
    totals.push_back(total);
  }
  CHECK(totals[0] > totals[1]);
  CHECK(totals[1] > totals[2]);
  // Cooperation restores the single-store profit for the split fleet.
  StoreSpec s{E / 2, P / 2, P / 2, 0.75, 0.0, 0.0};
  std::vector<StoreSpec> pair(2, s);
  const auto coop = cooperative(pair, prices);
  CHECK(coop.profits[0] + coop.profits[1] ==
        doctest::Approx(totals[0]).epsilon(1e-6));
  CHECK(totals[1] <= totals[0] + 1e-9);
}

TEST_CASE("sweep cap surfaces as a warning") {
  std::vector<StoreSpec> specs{{2.0, 1.0, 1.0, 1.0, 0.0, 0.0},
                               {2.0, 1.0, 1.0, 1.0, 0.0, 0.0}};
  auto prices = linear_series({10, 30}, {1, 1}, -5, 5);
  EquilibriumOptions opts;
  opts.max_sweeps = 1;
  opts.tol = 0.0;
  const auto res = nash_best_response(specs, prices, {}, opts);
  CHECK(!res.converged);
  CHECK(!res.warning.empty());
}
