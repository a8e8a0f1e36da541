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

#ifndef STOREMKT_CURVES_HPP_
#define STOREMKT_CURVES_HPP_

#include <utility>
#include <vector>

namespace storemkt {

// Continuous piecewise-linear scalar function. Outside the breakpoint span it
// extrapolates with the declared end slopes, so a plain linear function is a
// single anchor point with equal end slopes.
class Polyline {
 public:
  // y = intercept + slope * x
  static Polyline linear(double intercept, double slope);
  // Breakpoints (x strictly increasing); end slopes continue the end segments
  // unless overridden.
  static Polyline points(std::vector<std::pair<double, double>> pts);
  static Polyline points(std::vector<std::pair<double, double>> pts,
                         double slope_below, double slope_above);

  double operator()(double x) const;
  // Slope of the segment containing x (right segment at a breakpoint).
  double slope_at(double x) const;

  // Inverse for strictly increasing polylines.
  double inverse(double y) const;

  // \int_{x0}^{x1} f(s) ds, exact.
  double integral(double x0, double x1) const;

  bool nondecreasing(double tol = 0.0) const;
  bool nonincreasing(double tol = 0.0) const;
  bool strictly_increasing(double tol = 0.0) const;

  // f(x + shift)
  Polyline shifted(double shift) const;
  // f(x) + g(x); breakpoints merged.
  Polyline plus(const Polyline& g) const;
  Polyline scaled(double factor) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double slope_below() const { return slope_lo_; }
  double slope_above() const { return slope_hi_; }

 private:
  Polyline() = default;
  std::vector<double> xs_, ys_;
  double slope_lo_ = 0.0, slope_hi_ = 0.0;
};

}  // namespace storemkt

#endif  // STOREMKT_CURVES_HPP_
