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

#include "storemkt/rng.hpp"
#include "storemkt/store.hpp"

using namespace storemkt;

TEST_CASE("eff_map") {
  CHECK(eff_map(0.75, 4.0) == 4.0);
  CHECK(eff_map(0.75, -4.0) == -3.0);
  CHECK(eff_map(1.0, -4.0) == -4.0);
}

TEST_CASE("flows") {
  CHECK(flows(Schedule{{0.0, 1.0, 0.0}}) == FlowVector{1.0, -1.0});
  CHECK(flows(Schedule{{5.0, 5.0, 5.0}}) == FlowVector{0.0, 0.0});
  CHECK(flows(Schedule{{0.0, 1.0, 3.0, 2.0}}) == FlowVector{1.0, 2.0, -1.0});
}

TEST_CASE("levels-flows round trip") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    Schedule s;
    s.levels.push_back(rng.uniform(0.0, 10.0));
    for (int t = 0; t < 20; ++t)
      s.levels.push_back(rng.uniform(0.0, 10.0));
    const auto x = flows(s);
    const auto back = schedule_from_flows(s.levels.front(), x);
    for (std::size_t t = 0; t < s.levels.size(); ++t)
      CHECK(back.levels[t] == doctest::Approx(s.levels[t]).epsilon(1e-12));
  }
}

TEST_CASE("feasible") {
  StoreSpec spec{10.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  CHECK(feasible(spec, Schedule{{0.0, 1.0, 0.0}}).ok);
  const auto rate = feasible(spec, Schedule{{0.0, 2.0, 0.0}});
  CHECK(!rate.ok);
  CHECK(rate.violations.size() >= 1);
  const auto term = feasible(spec, Schedule{{0.0, 1.0, 1.0}});
  CHECK(!term.ok);
}

TEST_CASE("store_cost") {
  std::vector<PriceFunction> prices{PriceFunction::linear(10, 1, -5, 5),
                                    PriceFunction::linear(20, 1, -5, 5)};
  std::vector<double> zero{0.0, 0.0};
  CHECK(store_cost(zero, zero, prices, 1.0) == doctest::Approx(0.0));
  std::vector<double> x{1.0, -1.0};
  CHECK(store_cost(x, zero, prices, 1.0) == doctest::Approx(-8.0));
  CHECK(store_cost(x, zero, prices, 0.5) == doctest::Approx(1.25));
}

TEST_CASE("store_cost is midpoint-convex in the store's own flows") {
  Rng rng(99);
  std::vector<PriceFunction> prices;
  std::vector<double> others;
  for (int t = 0; t < 6; ++t) {
    prices.push_back(
        PriceFunction::linear(rng.uniform(10.0, 40.0),
                              rng.uniform(0.0, 1.5), -6.0, 6.0));
    others.push_back(rng.uniform(-1.0, 1.0));
  }
  for (double eps : {0.6, 0.85, 1.0}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> a(6), b(6), mid(6);
      for (int t = 0; t < 6; ++t) {
        a[t] = rng.uniform(-2.0, 2.0);
        b[t] = rng.uniform(-2.0, 2.0);
        mid[t] = 0.5 * (a[t] + b[t]);
      }
      const double lhs = store_cost(mid, others, prices, eps);
      const double rhs = 0.5 * (store_cost(a, others, prices, eps) +
                                store_cost(b, others, prices, eps));
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("clearing_prices") {
  std::vector<PriceFunction> prices{PriceFunction::linear(10, 1, -5, 5),
                                    PriceFunction::linear(20, 1, -5, 5)};
  SUBCASE("flat schedules give the no-storage prices") {
    std::vector<Schedule> s{Schedule{{1.0, 1.0, 1.0}}};
    std::vector<double> eps{0.9};
    const auto p = clearing_prices(prices, s, eps);
    CHECK(p[0] == doctest::Approx(10.0));
    CHECK(p[1] == doctest::Approx(20.0));
  }
  SUBCASE("single store moves the price") {
    std::vector<Schedule> s{Schedule{{0.0, 2.0, 0.0}}};
    std::vector<double> eps{1.0};
    const auto p = clearing_prices(prices, s, eps);
    CHECK(p[0] == doctest::Approx(12.0));
    CHECK(p[1] == doctest::Approx(18.0));
  }
  SUBCASE("opposite flows cancel and order does not matter") {
    std::vector<Schedule> s{Schedule{{0.0, 1.0, 0.0}},
                            Schedule{{1.0, 0.0, 1.0}}};
    std::vector<double> eps{1.0, 1.0};
    const auto p = clearing_prices(prices, s, eps);
    CHECK(p[0] == doctest::Approx(10.0));
    CHECK(p[1] == doctest::Approx(20.0));
    std::swap(s[0], s[1]);
    const auto q = clearing_prices(prices, s, eps);
    CHECK(q[0] == doctest::Approx(p[0]));
    CHECK(q[1] == doctest::Approx(p[1]));
  }
}
