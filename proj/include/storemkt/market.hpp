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

#ifndef STOREMKT_MARKET_HPP_
#define STOREMKT_MARKET_HPP_

#include <string>
#include <utility>
#include <vector>

#include "storemkt/curves.hpp"

namespace storemkt {

// Per-period market price as a function of the stores' aggregate net
// purchases. Linear form is pbar + pslope * x; tabulated form interpolates
// linearly between breakpoints. Valid only on [lo, hi].
class PriceFunction {
 public:
  static PriceFunction linear(double pbar, double pslope, double lo,
                              double hi);
  // valid_range is the breakpoint span.
  static PriceFunction tabulated(std::vector<std::pair<double, double>> pts);

  // Price at net purchase quantity x. Throws DomainError outside valid_range.
  double operator()(double x) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool is_linear() const { return linear_; }
  double pbar() const;    // linear form only
  double pslope() const;  // linear form only
  const Polyline& curve() const { return curve_; }

 private:
  PriceFunction(Polyline c, double lo, double hi, bool lin)
      : curve_(std::move(c)), lo_(lo), hi_(hi), linear_(lin) {}
  Polyline curve_;
  double lo_, hi_;
  bool linear_;
};

double price_at(const PriceFunction& pf, double x);

// One violated standing assumption, with the witnessing grid point.
struct ValidationIssue {
  enum class Kind {
    kPositivity,     // p(x) <= 0
    kMonotonicity,   // p decreasing in x
    kConvexity,      // x * p(x+k) has a negative second difference
    kIncreasingCost  // x * p(x+k) has a negative first difference
  };
  Kind kind;
  double x;
  double k;  // companion quantity for the cost checks, 0 otherwise
  double value;
  std::string describe() const;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Samples positivity and monotonicity of p over valid_range, and convexity
// and monotone increase of x * p(x+k) for k sampled over k_range. Grid is
// grid_n uniform points merged with breakpoints and their midpoints.
ValidationReport validate_price_function(const PriceFunction& pf,
                                         std::pair<double, double> k_range,
                                         int grid_n);

// Eq. slope from point elasticities: pbar / (e_s * s - e_d * d).
double slope_from_elasticity(double pbar, double e_s, double s, double e_d,
                             double d);

// External supply minus external demand as a function of price, strictly
// increasing over the declared price range.
class ResidualSupply {
 public:
  static ResidualSupply linear(double intercept, double slope, double plo,
                               double phi);
  static ResidualSupply tabulated(std::vector<std::pair<double, double>> pts);

  double operator()(double p) const { return curve_(p); }
  double plo() const { return plo_; }
  double phi() const { return phi_; }

 private:
  ResidualSupply(Polyline c, double plo, double phi)
      : curve_(std::move(c)), plo_(plo), phi_(phi) {}
  Polyline curve_;
  double plo_, phi_;
};

struct TwoPeriodClearing {
  double p1;
  double p2;
  double pdiff;  // p2 - p1, exact
  double q;      // quantity bought at time 1 and sold at time 2
};

struct ClearingOptions {
  double tol = 1e-10;
  int max_iters = 200;
  int max_widenings = 10;
};

// Clears the two-period supply-function auction: finds the price
// differential p with R1(p1) = s_agg(p), R2(p2) = -R1(p1), p2 - p1 = p.
// s_agg must be nondecreasing. Throws NoClearingError if the defect
// function has no sign change on the widened bracket.
TwoPeriodClearing clear_two_period(const ResidualSupply& r1,
                                   const ResidualSupply& r2,
                                   const Polyline& s_agg,
                                   const ClearingOptions& opts = {});

}  // namespace storemkt

#endif  // STOREMKT_MARKET_HPP_
