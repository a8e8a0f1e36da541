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

#include "storemkt/market.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "storemkt/errors.hpp"

namespace storemkt {

namespace {
// Slack for solver-produced quantities that sit on the range edge.
double range_slack(double lo, double hi) {
  return 1e-9 * (1.0 + std::abs(hi - lo));
}
}  // namespace

PriceFunction PriceFunction::linear(double pbar, double pslope, double lo,
                                    double hi) {
  if (!(hi > lo)) throw DomainError("PriceFunction: empty valid_range");
  if (pslope < 0.0)
    throw DomainError("PriceFunction: negative price slope");
  return PriceFunction(Polyline::linear(pbar, pslope), lo, hi, true);
}

PriceFunction PriceFunction::tabulated(
    std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2)
    throw DomainError("PriceFunction: tabulated form needs >= 2 breakpoints");
  const double lo = pts.front().first;
  const double hi = pts.back().first;
  return PriceFunction(Polyline::points(std::move(pts)), lo, hi, false);
}

double PriceFunction::operator()(double x) const {
  const double slack = range_slack(lo_, hi_);
  if (x < lo_ - slack || x > hi_ + slack)
    throw DomainError("price function evaluated at x = " + std::to_string(x) +
                      " outside valid range [" + std::to_string(lo_) + ", " +
                      std::to_string(hi_) + "]");
  return curve_(std::clamp(x, lo_, hi_));
}

double PriceFunction::pbar() const {
  if (!linear_) throw DomainError("pbar: price function is not linear");
  return curve_(0.0);
}

double PriceFunction::pslope() const {
  if (!linear_) throw DomainError("pslope: price function is not linear");
  return curve_.slope_at(0.0);
}

double price_at(const PriceFunction& pf, double x) { return pf(x); }

std::string ValidationIssue::describe() const {
  std::string name;
  switch (kind) {
    case Kind::kPositivity: name = "positivity"; break;
    case Kind::kMonotonicity: name = "monotonicity"; break;
    case Kind::kConvexity: name = "convexity"; break;
    case Kind::kIncreasingCost: name = "increasing-cost"; break;
  }
  return name + " violated at x = " + std::to_string(x) +
         (kind == Kind::kConvexity || kind == Kind::kIncreasingCost
              ? ", k = " + std::to_string(k)
              : std::string()) +
         " (value " + std::to_string(value) + ")";
}

namespace {
std::vector<double> sample_grid(const PriceFunction& pf, double lo, double hi,
                                int grid_n) {
  std::set<double> g;
  for (int i = 0; i < grid_n; ++i)
    g.insert(lo + (hi - lo) * i / static_cast<double>(grid_n - 1));
  // Tabulated breakpoints and their midpoints sharpen the kink checks.
  const auto& xs = pf.curve().xs();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= lo && xs[i] <= hi) g.insert(xs[i]);
    if (i + 1 < xs.size()) {
      const double mid = 0.5 * (xs[i] + xs[i + 1]);
      if (mid >= lo && mid <= hi) g.insert(mid);
    }
  }
  return {g.begin(), g.end()};
}
}  // namespace

ValidationReport validate_price_function(const PriceFunction& pf,
                                         std::pair<double, double> k_range,
                                         int grid_n) {
  if (grid_n < 3) throw DomainError("validate_price_function: grid_n < 3");
  constexpr double kTol = 1e-9;
  ValidationReport rep;
  const auto grid = sample_grid(pf, pf.lo(), pf.hi(), grid_n);
  for (double x : grid) {
    const double p = pf(x);
    if (!(p > 0.0))
      rep.issues.push_back(
          {ValidationIssue::Kind::kPositivity, x, 0.0, p});
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dp = pf(grid[i]) - pf(grid[i - 1]);
    if (dp < -kTol)
      rep.issues.push_back(
          {ValidationIssue::Kind::kMonotonicity, grid[i], 0.0, dp});
  }
  // Cost-shape checks on x * p(x + k) for sampled companion quantities k.
  std::vector<double> ks;
  for (int i = 0; i < grid_n; ++i)
    ks.push_back(k_range.first +
                 (k_range.second - k_range.first) * i /
                     static_cast<double>(grid_n - 1));
  const auto base = sample_grid(pf, pf.lo(), pf.hi(), grid_n);
  for (double k : ks) {
    // x restricted so x + k stays in the valid range.
    std::vector<double> xs;
    xs.reserve(base.size());
    for (double z : base) xs.push_back(z - k);
    auto cost = [&](double x) { return x * pf(x + k); };
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double d1 = cost(xs[i]) - cost(xs[i - 1]);
      if (d1 < -kTol * (1.0 + std::abs(cost(xs[i]))))
        rep.issues.push_back(
            {ValidationIssue::Kind::kIncreasingCost, xs[i], k, d1});
    }
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
      // Nonuniform grid second difference, scaled back to curvature form.
      const double h1 = xs[i] - xs[i - 1];
      const double h2 = xs[i + 1] - xs[i];
      const double d2 =
          2.0 * (h1 * cost(xs[i + 1]) - (h1 + h2) * cost(xs[i]) +
                 h2 * cost(xs[i - 1])) /
          (h1 * h2 * (h1 + h2));
      if (d2 < -kTol)
        rep.issues.push_back(
            {ValidationIssue::Kind::kConvexity, xs[i], k, d2});
    }
  }
  return rep;
}

double slope_from_elasticity(double pbar, double e_s, double s, double e_d,
                             double d) {
  const double denom = e_s * s - e_d * d;
  if (!(denom > 0.0))
    throw DegenerateMarketError(
        "slope_from_elasticity: nonpositive denominator e_s*s - e_d*d = " +
        std::to_string(denom));
  return pbar / denom;
}

ResidualSupply ResidualSupply::linear(double intercept, double slope,
                                      double plo, double phi) {
  if (!(slope > 0.0))
    throw DomainError("ResidualSupply: slope must be strictly positive");
  if (!(phi > plo)) throw DomainError("ResidualSupply: empty price range");
  return ResidualSupply(Polyline::linear(intercept, slope), plo, phi);
}

ResidualSupply ResidualSupply::tabulated(
    std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2)
    throw DomainError("ResidualSupply: tabulated form needs >= 2 breakpoints");
  const double plo = pts.front().first;
  const double phi = pts.back().first;
  auto curve = Polyline::points(std::move(pts));
  if (!curve.strictly_increasing())
    throw DomainError("ResidualSupply: curve must be strictly increasing");
  return ResidualSupply(std::move(curve), plo, phi);
}

namespace {
// Root of the strictly increasing g on a widening bracket around [lo, hi].
double increasing_root(const std::function<double(double)>& g, double lo,
                       double hi, const ClearingOptions& opts,
                       const char* what) {
  double a = lo, b = hi;
  double ga = g(a), gb = g(b);
  for (int w = 0; w < opts.max_widenings && (ga > 0.0 || gb < 0.0); ++w) {
    const double width = std::max(b - a, 1.0);
    a -= width;
    b += width;
    ga = g(a);
    gb = g(b);
  }
  if (ga > 0.0 || gb < 0.0)
    throw NoClearingError(std::string(what) +
                          ": no sign change on the widened bracket");
  for (int it = 0; it < opts.max_iters; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if (std::abs(gm) <= opts.tol) return m;
    if (gm < 0.0)
      a = m;
    else
      b = m;
    if (b - a <= 1e-15 * (1.0 + std::abs(a) + std::abs(b))) break;
  }
  return 0.5 * (a + b);
}
}  // namespace

TwoPeriodClearing clear_two_period(const ResidualSupply& r1,
                                   const ResidualSupply& r2,
                                   const Polyline& s_agg,
                                   const ClearingOptions& opts) {
  if (!s_agg.nondecreasing(1e-12))
    throw DomainError("clear_two_period: s_agg must be nondecreasing");
  const double plo = std::min(r1.plo(), r2.plo());
  const double phi = std::max(r1.phi(), r2.phi());

  // Inner solve: p1 such that R2(p1 + p) = -R1(p1); G is strictly increasing.
  auto p1_of = [&](double p) {
    auto g = [&](double p1) { return r1(p1) + r2(p1 + p); };
    return increasing_root(g, plo, phi, opts, "clear_two_period (inner)");
  };

  // Outer solve on the differential p: as p grows, s_agg(p) rises while
  // R1(p1(p)) falls, so the defect is increasing in p.
  const double bracket = phi - plo;
  auto defect = [&](double p) { return s_agg(p) - r1(p1_of(p)); };
  const double p = increasing_root(defect, -bracket, bracket, opts,
                                   "clear_two_period");
  const double p1 = p1_of(p);
  const double q = r1(p1);
  return TwoPeriodClearing{p1, p1 + p, p, q};
}

}  // namespace storemkt
