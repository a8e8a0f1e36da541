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

#include "storemkt/errors.hpp"
#include "storemkt/piecewise.hpp"
#include "storemkt/rng.hpp"

using namespace storemkt;

TEST_CASE("global quadratic eval and tilted argmin") {
  auto f = PiecewiseQuadratic::quadratic(1.0, 10.0, 0.0);  // x^2 + 10x
  CHECK(f.value(2.0) == doctest::Approx(24.0));
  auto r = f.argmin_tilted(0.0, -20.0, 20.0);
  CHECK(r.lo == doctest::Approx(-5.0));
  CHECK(r.hi == doctest::Approx(-5.0));
  r = f.argmin_tilted(14.0, -20.0, 20.0);  // x^2 + 10x - 14x, min at 2
  CHECK(r.lo == doctest::Approx(2.0));
  // Clamped at the box.
  r = f.argmin_tilted(0.0, -1.0, 20.0);
  CHECK(r.lo == doctest::Approx(-1.0));
  r = f.argmin_tilted(100.0, -1.0, 3.0);
  CHECK(r.lo == doctest::Approx(3.0));
}

TEST_CASE("from_marginal integrates a flat stretch into a plateau") {
  // marginal: x below 0, 0 on [0,1], x-1 above 1
  auto m = Polyline::points({{0.0, 0.0}, {1.0, 0.0}}, 1.0, 1.0);
  auto f = PiecewiseQuadratic::from_marginal(m);
  CHECK(f.value(0.0) == doctest::Approx(0.0));
  CHECK(f.value(-2.0) == doctest::Approx(2.0));
  CHECK(f.value(1.0) == doctest::Approx(0.0));
  CHECK(f.value(3.0) == doctest::Approx(2.0));
  auto r = f.argmin_tilted(0.0, -5.0, 5.0);
  CHECK(r.lo == doctest::Approx(0.0));
  CHECK(r.hi == doctest::Approx(1.0));
  r = f.argmin_tilted(0.5, 0.0, 5.0);
  CHECK(r.lo == doctest::Approx(1.5));
  CHECK(r.hi == doctest::Approx(1.5));
}

TEST_CASE("from_marginal rejects a decreasing marginal") {
  auto m = Polyline::points({{0.0, 1.0}, {1.0, 0.0}}, 0.0, 0.0);
  CHECK_THROWS_AS(PiecewiseQuadratic::from_marginal(m), NonConvexError);
}

TEST_CASE("compose_h maps the sell branch through the efficiency") {
  // Psi(z) = z * (10 + z)
  auto psi = PiecewiseQuadratic::quadratic(1.0, 10.0, 0.0);
  auto c = psi.compose_h(0.5);
  CHECK(c.value(4.0) == doctest::Approx(4.0 * 14.0));
  // h(-4) = -2, cost -2 * (10 - 2) = -16
  CHECK(c.value(-4.0) == doctest::Approx(-16.0));
  CHECK(c.value(0.0) == doctest::Approx(0.0));
  CHECK(c.deriv_plus(0.0) == doctest::Approx(10.0));
  CHECK(c.deriv_minus(0.0) == doctest::Approx(5.0));
}

TEST_CASE("compose_h rejects a kink that bends the wrong way") {
  // Psi'(0) = -10 < 0 makes eps * Psi'(0-) > Psi'(0+).
  auto psi = PiecewiseQuadratic::quadratic(1.0, -10.0, 0.0);
  CHECK_THROWS_AS(psi.compose_h(0.5), NonConvexError);
}

TEST_CASE("plus merges breakpoints") {
  auto m = Polyline::points({{0.0, 0.0}, {1.0, 0.0}}, 1.0, 1.0);
  auto f = PiecewiseQuadratic::from_marginal(m);
  auto g = f.plus(PiecewiseQuadratic::quadratic(0.5, 0.0, 1.0));
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-4.0, 4.0);
    CHECK(g.value(x) ==
          doctest::Approx(f.value(x) + 0.5 * x * x + 1.0).epsilon(1e-12));
  }
}

TEST_CASE("argmin_tilted agrees with a dense scan on random convex functions") {
  Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    // Random nondecreasing marginal with a possible flat stretch.
    std::vector<std::pair<double, double>> pts;
    double x = -3.0, y = rng.uniform(-8.0, -2.0);
    for (int i = 0; i < 5; ++i) {
      pts.push_back({x, y});
      x += rng.uniform(0.3, 1.5);
      y += (rng.uniform(0.0, 1.0) < 0.3) ? 0.0 : rng.uniform(0.0, 4.0);
    }
    auto f = PiecewiseQuadratic::from_marginal(
        Polyline::points(pts, rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0)));
    const double mu = rng.uniform(-6.0, 6.0);
    const double lo = rng.uniform(-4.0, -1.0);
    const double hi = rng.uniform(0.0, 5.0);
    const auto r = f.argmin_tilted(mu, lo, hi);
    REQUIRE(r.lo <= r.hi + 1e-12);
    const double vstar = f.value(r.lo) - mu * r.lo;
    CHECK(std::abs(vstar - (f.value(r.hi) - mu * r.hi)) < 1e-9);
    for (int i = 0; i <= 400; ++i) {
      const double z = lo + (hi - lo) * i / 400.0;
      CHECK(f.value(z) - mu * z >= vstar - 1e-9);
    }
  }
}
