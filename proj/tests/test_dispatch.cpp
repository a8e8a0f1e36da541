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
#include "storemkt/dispatch.hpp"
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

TEST_CASE("constant prices leave the store idle") {
  StoreSpec spec{5.0, 1.0, 1.0, 0.9, 0.0, 0.0};
  auto prices = linear_series({10, 10, 10, 10}, {1, 1, 1, 1}, -12, 12);
  const auto sol = optimize_single(spec, prices);
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-12));
  for (double xt : flows(sol.schedule)) CHECK(std::abs(xt) < 1e-9);
  CHECK(sol.kkt_residual < 1e-8);
}

TEST_CASE("two-period instance solves in closed form") {
  StoreSpec spec{10.0, 10.0, 10.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 20}, {1, 1}, -25, 25);
  const auto sol = optimize_single(spec, prices);
  const auto x = flows(sol.schedule);
  CHECK(x[0] == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(x[1] == doctest::Approx(-2.5).epsilon(1e-9));
  CHECK(-sol.objective == doctest::Approx(12.5).epsilon(1e-9));
  CHECK(sol.kkt_residual < 1e-8);

  // Dense scan over the single free level S_1.
  double best = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double s1 = 10.0 * i / 10000.0;
    const double c = period_cost(prices[0], 1.0, s1, 0.0) +
                     period_cost(prices[1], 1.0, -s1, 0.0);
    best = std::min(best, c);
  }
  CHECK(sol.objective <= best + 1e-6);
}

TEST_CASE("tight rates saturate on a step price profile") {
  StoreSpec spec{10.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 10, 30, 30}, {1, 1, 1, 1}, -12, 12);
  const auto sol = optimize_single(spec, prices);
  const auto x = flows(sol.schedule);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(x[2] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(x[3] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("infeasible boundary levels are rejected") {
  StoreSpec spec{10.0, 1.0, 1.0, 1.0, 0.0, 8.0};  // 8 units in 2 periods
  auto prices = linear_series({10, 20}, {1, 1}, -12, 12);
  CHECK_THROWS_AS(optimize_single(spec, prices), InfeasibleError);
}

TEST_CASE("two_period_unconstrained closed form") {
  CHECK(two_period_unconstrained(10, 15, 1, 1, 0.5) == 0.0);
  CHECK(two_period_unconstrained(10, 20, 1, 1, 1.0) == doctest::Approx(2.5));
  CHECK(two_period_unconstrained(10, 20, 1, 1, 0.75) ==
        doctest::Approx(1.6));
  CHECK_THROWS_AS(two_period_unconstrained(10, 20, 0, 0, 1.0), DomainError);
}

TEST_CASE("unconstrained two-period solves match the closed form") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const double p1 = rng.uniform(5.0, 40.0);
    const double p2 = rng.uniform(5.0, 40.0);
    const double eps = rng.uniform(0.6, 1.0);
    const double s1 = rng.uniform(0.02, 1.5);
    const double s2 = rng.uniform(0.02, 1.5);
    const double xstar = two_period_unconstrained(p1, p2, s1, s2, eps);
    // Box sized off the closed form so nothing binds.
    const double P = std::max(1.0, 2.0 * xstar);
    const double span = P + 1.0;
    StoreSpec spec{2.0 * P, P, P, eps, 0.0, 0.0};
    auto prices = linear_series({p1, p2}, {s1, s2}, -span, span);
    const auto sol = optimize_single(spec, prices);
    CHECK(flows(sol.schedule)[0] ==
          doctest::Approx(xstar).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("certificate holds on random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(rng, 2, 12);
    const auto sol = optimize_single(inst.spec, inst.prices);
    CHECK(sol.kkt_residual < 1e-8);
    const auto rep =
        verify_certificate(inst.spec, inst.prices, {}, sol, 1e-8, 2001);
    CHECK(rep.max_residual < 1e-8);
  }
}

TEST_CASE("hand-built suboptimal pairs are flagged by the verifier") {
  StoreSpec spec{10.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 10, 30, 30}, {1, 1, 1, 1}, -12, 12);
  CertifiedSolution fake;
  fake.schedule = Schedule{{0.0, 0.0, 0.0, 0.0, 0.0}};  // idle is suboptimal
  fake.multipliers.mu = {0.0, 0.0, 0.0, 0.0};
  fake.objective = 0.0;
  const auto rep = verify_certificate(spec, prices, {}, fake);
  CHECK(rep.subproblem_gap > 1.0);

  // Interior level with a multiplier jump breaks the slackness pattern.
  const auto good = optimize_single(spec, prices);
  CertifiedSolution bent = good;
  bent.schedule.levels[2] = 1.5;  // interior; was 2 at the capacity-free peak
  bent.multipliers.mu = {12.0, 20.0, 28.0, 28.0};
  const auto rep2 = verify_certificate(spec, prices, {}, bent);
  CHECK(rep2.slackness > 1e-3);
}

TEST_CASE("solver beats the lattice oracle on small instances") {
  Rng rng(555);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_lattice_instance(rng, 6);
    const auto sol = optimize_single(inst.spec, inst.prices);
    const double lat = lattice_optimum(inst.spec, inst.prices, 0.01);
    CHECK(sol.objective <= lat + 0.05);
  }
}

TEST_CASE("solver dominates random feasible schedules") {
  Rng rng(777);
  for (int trial = 0; trial < 3; ++trial) {
    const auto inst = random_instance(rng, 3, 8);
    const auto sol = optimize_single(inst.spec, inst.prices);
    const std::size_t T = inst.prices.size();
    std::vector<double> zeros(T, 0.0);
    for (int k = 0; k < 2000; ++k) {
      const auto s = random_feasible_schedule(rng, inst.spec, T);
      const double c =
          store_cost(flows(s), zeros, inst.prices, inst.spec.efficiency);
      CHECK(sol.objective <= c + 1e-9);
    }
  }
}

TEST_CASE("boundary levels are conserved") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(rng, 2, 10);
    const auto sol = optimize_single(inst.spec, inst.prices);
    CHECK(std::abs(sol.schedule.levels.front() - inst.spec.level_start) <=
          1e-9);
    CHECK(std::abs(sol.schedule.levels.back() - inst.spec.level_end) <= 1e-9);
  }
}

TEST_CASE("zero-flow schedule is never beaten when prices are constant") {
  Rng rng(13);
  for (double eps : {0.6, 0.8, 1.0}) {
    StoreSpec spec{4.0, 1.0, 1.0, eps, 2.0, 2.0};
    auto prices = linear_series({25, 25, 25, 25, 25}, {0.3, 0.3, 0.3, 0.3, 0.3},
                                -3, 3);
    const auto sol = optimize_single(spec, prices);
    CHECK(std::abs(sol.objective) < 1e-9);
  }
  (void)rng;
}

TEST_CASE("profit is nonnegative whenever the idle schedule is feasible") {
  Rng rng(234);
  for (int trial = 0; trial < 10; ++trial) {
    // Nondecreasing base prices, perfect efficiency, equal boundaries.
    std::vector<double> pbar(6);
    pbar[0] = rng.uniform(10.0, 20.0);
    for (int t = 1; t < 6; ++t) pbar[t] = pbar[t - 1] + rng.uniform(0.0, 5.0);
    std::vector<PriceFunction> prices;
    for (double pb : pbar)
      prices.push_back(PriceFunction::linear(pb, rng.uniform(0.1, 1.0),
                                             -3.0, 3.0));
    StoreSpec spec{5.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    const auto sol = optimize_single(spec, prices);
    CHECK(sol.objective <= 1e-10);  // profit = -objective >= 0
  }
}

TEST_CASE("sensitivity: null perturbation changes nothing") {
  StoreSpec spec{1.0, 10.0, 10.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 30, 10, 30}, {1, 1, 1, 1}, -12, 12);
  const auto rep = sensitivity_capacity(spec, prices, {}, 1, 0.0);
  CHECK(!rep.changed);
  CHECK(rep.objective_delta == doctest::Approx(0.0));
}

TEST_CASE("sensitivity: interior level ignores a capacity bump") {
  StoreSpec spec{50.0, 1.0, 1.0, 1.0, 0.0, 0.0};  // capacity never binds
  auto prices = linear_series({10, 30, 10, 30}, {1, 1, 1, 1}, -12, 12);
  const auto rep = sensitivity_capacity(spec, prices, {}, 2, 0.5);
  CHECK(!rep.changed);
}

TEST_CASE("sensitivity: binding capacity bump shifts two intervals") {
  StoreSpec spec{1.0, 10.0, 10.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 30, 10, 30}, {1, 1, 1, 1}, -25, 25);
  // Base solution fills to E before each sale; mu rises across t0 = 1.
  const auto rep = sensitivity_capacity(spec, prices, {}, 1, 0.01);
  CHECK(rep.changed);
  CHECK(rep.t1 < 1);
  CHECK(rep.t2 > 1);
  double before = 0.0, after = 0.0;
  for (std::size_t t = rep.t1; t < 1; ++t) before += rep.flow_deltas[t];
  for (std::size_t t = 1; t < rep.t2; ++t) after += rep.flow_deltas[t];
  CHECK(before > 0.0);
  CHECK(after < 0.0);
  // Deltas outside the two runs stay negligible.
  for (std::size_t t = 0; t < rep.flow_deltas.size(); ++t)
    if (t >= rep.t2)
      CHECK(std::abs(rep.flow_deltas[t]) < 1e-6);
  CHECK(rep.objective_delta < 0.0);  // extra capacity only helps
}

TEST_CASE("sensitivity: rate bound") {
  StoreSpec spec{10.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 10, 30, 30}, {1, 1, 1, 1}, -12, 12);
  SUBCASE("nonbinding rate change has no effect") {
    StoreSpec loose = spec;
    loose.rate_in = 8.0;
    loose.rate_out = 8.0;
    auto wide = linear_series({10, 10, 30, 30}, {1, 1, 1, 1}, -20, 20);
    const auto rep = sensitivity_rate(loose, wide, {}, 1, RateSide::kIn, 0.01);
    CHECK(!rep.changed);
  }
  SUBCASE("binding input rate change moves flows near t0") {
    // Sell side keeps slack here, so the extra input is monetizable.
    auto skew = linear_series({10, 30, 28, 26}, {1, 1, 1, 1}, -12, 12);
    const auto rep = sensitivity_rate(spec, skew, {}, 1, RateSide::kIn, 0.01);
    CHECK(rep.changed);
    CHECK(rep.flow_deltas[0] == doctest::Approx(0.01).epsilon(1e-4));
    CHECK(rep.objective_delta < 0.0);
  }
  SUBCASE("zero delta is the identity") {
    const auto rep = sensitivity_rate(spec, prices, {}, 2, RateSide::kOut, 0.0);
    CHECK(!rep.changed);
  }
}

TEST_CASE("find_lambda_max on the synthetic two-period series") {
  StoreSpec spec{10.0, 10.0, 10.0, 1.0, 0.0, 0.0};
  std::vector<double> pbar{10.0, 20.0};
  const auto res = find_lambda_max(spec, pbar, 1e-3, 1.0);
  REQUIRE(res.found);
  // Unconstrained trade is 10/(60 lambda); it meets the bound 10 at 1/60.
  CHECK(res.lambda_max == doctest::Approx(1.0 / 60.0).epsilon(2e-3));
}

TEST_CASE("find_lambda_max conventions") {
  StoreSpec spec{10.0, 1.0, 1.0, 0.75, 0.0, 0.0};
  std::vector<double> flat{20.0, 20.0, 20.0, 20.0};
  const auto res = find_lambda_max(spec, flat, 1e-3, 10.0);
  CHECK(res.found);
  CHECK(res.lambda_max == 0.0);
}

TEST_CASE("flows scale as 1/lambda beyond lambda_max") {
  StoreSpec spec{10.0, 1.0, 1.0, 0.75, 0.0, 0.0};
  std::vector<double> pbar{10, 10, 30, 30, 10, 10, 30, 30};
  const auto res = find_lambda_max(spec, pbar, 1e-3, 50.0);
  REQUIRE(res.found);
  const double lam = std::max(2.0 * res.lambda_max, 1e-2);
  auto solve_at = [&](double l) {
    std::vector<PriceFunction> prices;
    for (double pb : pbar)
      prices.push_back(PriceFunction::linear(pb, l * pb, -1.1, 1.1));
    return flows(optimize_single(spec, prices).schedule);
  };
  const auto x1 = solve_at(lam);
  const auto x2 = solve_at(2.0 * lam);
  for (std::size_t t = 0; t < x1.size(); ++t)
    CHECK(x2[t] == doctest::Approx(0.5 * x1[t]).epsilon(1e-8));
}

TEST_CASE("price differential can rise with efficiency") {
  // Two periods, equal unit slopes: the literal differential
  // p2(eps*x) - p1(x) increases toward eps = 1.
  StoreSpec spec{500.0, 400.0, 400.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 20}, {1, 1}, -450, 450);
  double prev = -1e300;
  for (double eps : {0.98, 0.99, 1.0}) {
    spec.efficiency = eps;
    const auto sol = optimize_single(spec, prices);
    const double x = flows(sol.schedule)[0];
    const double diff = prices[1](eps * x) - prices[0](x);
    CHECK(diff > prev);
    prev = diff;
  }
}

TEST_CASE("mu is constant between boundary touches") {
  StoreSpec spec{1.0, 10.0, 10.0, 1.0, 0.0, 0.0};
  auto prices = linear_series({10, 30, 12, 28}, {1, 1, 1, 1}, -25, 25);
  const auto sol = optimize_single(spec, prices);
  const auto& mu = sol.multipliers.mu;
  const auto& s = sol.schedule.levels;
  for (std::size_t t = 1; t + 1 < s.size(); ++t) {
    const bool at_bound = s[t] < 1e-9 || s[t] > spec.capacity - 1e-9;
    if (!at_bound) CHECK(std::abs(mu[t] - mu[t - 1]) < 1e-9);
  }
}
