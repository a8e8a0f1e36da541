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

#include "storemkt/curves.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "storemkt/errors.hpp"

namespace storemkt {

Polyline Polyline::linear(double intercept, double slope) {
  Polyline p;
  p.xs_ = {0.0};
  p.ys_ = {intercept};
  p.slope_lo_ = p.slope_hi_ = slope;
  return p;
}

Polyline Polyline::points(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2)
    throw DomainError("Polyline::points needs at least 2 breakpoints");
  const std::size_t n = pts.size();
  const double s_lo =
      (pts[1].second - pts[0].second) / (pts[1].first - pts[0].first);
  const double s_hi = (pts[n - 1].second - pts[n - 2].second) /
                      (pts[n - 1].first - pts[n - 2].first);
  return points(std::move(pts), s_lo, s_hi);
}

Polyline Polyline::points(std::vector<std::pair<double, double>> pts,
                          double slope_below, double slope_above) {
  if (pts.empty()) throw DomainError("Polyline::points: empty breakpoint list");
  Polyline p;
  p.xs_.reserve(pts.size());
  p.ys_.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && !(pts[i].first > pts[i - 1].first))
      throw DomainError("Polyline breakpoints must be strictly increasing in x");
    p.xs_.push_back(pts[i].first);
    p.ys_.push_back(pts[i].second);
  }
  p.slope_lo_ = slope_below;
  p.slope_hi_ = slope_above;
  return p;
}

double Polyline::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front() + slope_lo_ * (x - xs_.front());
  if (x >= xs_.back()) return ys_.back() + slope_hi_ * (x - xs_.back());
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return ys_[i] + w * (ys_[i + 1] - ys_[i]);
}

double Polyline::slope_at(double x) const {
  if (x < xs_.front()) return slope_lo_;
  if (x >= xs_.back()) return slope_hi_;
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
}

double Polyline::inverse(double y) const {
  if (!strictly_increasing())
    throw DomainError("Polyline::inverse requires a strictly increasing curve");
  if (y <= ys_.front()) {
    if (slope_lo_ <= 0.0)
      throw DomainError("Polyline::inverse: value below range, flat tail");
    return xs_.front() + (y - ys_.front()) / slope_lo_;
  }
  if (y >= ys_.back()) {
    if (slope_hi_ <= 0.0)
      throw DomainError("Polyline::inverse: value above range, flat tail");
    return xs_.back() + (y - ys_.back()) / slope_hi_;
  }
  const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  const std::size_t i = static_cast<std::size_t>(it - ys_.begin()) - 1;
  const double w = (y - ys_[i]) / (ys_[i + 1] - ys_[i]);
  return xs_[i] + w * (xs_[i + 1] - xs_[i]);
}

double Polyline::integral(double x0, double x1) const {
  if (x1 < x0) return -integral(x1, x0);
  // Trapezoid over each linear segment of [x0, x1].
  double acc = 0.0;
  double a = x0;
  // Segment end candidates are interior breakpoints.
  for (std::size_t i = 0; i < xs_.size() && a < x1; ++i) {
    if (xs_[i] <= a) continue;
    const double b = std::min(xs_[i], x1);
    acc += 0.5 * ((*this)(a) + (*this)(b)) * (b - a);
    a = b;
  }
  if (a < x1) acc += 0.5 * ((*this)(a) + (*this)(x1)) * (x1 - a);
  return acc;
}

bool Polyline::nondecreasing(double tol) const {
  if (slope_lo_ < -tol || slope_hi_ < -tol) return false;
  for (std::size_t i = 1; i < ys_.size(); ++i)
    if (ys_[i] < ys_[i - 1] - tol) return false;
  return true;
}

bool Polyline::nonincreasing(double tol) const {
  if (slope_lo_ > tol || slope_hi_ > tol) return false;
  for (std::size_t i = 1; i < ys_.size(); ++i)
    if (ys_[i] > ys_[i - 1] + tol) return false;
  return true;
}

bool Polyline::strictly_increasing(double tol) const {
  for (std::size_t i = 1; i < ys_.size(); ++i)
    if (ys_[i] <= ys_[i - 1] + tol) return false;
  return true;
}

Polyline Polyline::shifted(double shift) const {
  Polyline p = *this;
  for (double& x : p.xs_) x -= shift;
  return p;
}

Polyline Polyline::plus(const Polyline& g) const {
  std::set<double> grid(xs_.begin(), xs_.end());
  grid.insert(g.xs_.begin(), g.xs_.end());
  std::vector<std::pair<double, double>> pts;
  pts.reserve(grid.size());
  for (double x : grid) pts.emplace_back(x, (*this)(x) + g(x));
  if (pts.size() == 1) {
    Polyline p;
    p.xs_ = {pts[0].first};
    p.ys_ = {pts[0].second};
    p.slope_lo_ = slope_lo_ + g.slope_lo_;
    p.slope_hi_ = slope_hi_ + g.slope_hi_;
    return p;
  }
  return points(std::move(pts), slope_lo_ + g.slope_lo_,
                slope_hi_ + g.slope_hi_);
}

Polyline Polyline::scaled(double factor) const {
  Polyline p = *this;
  for (double& y : p.ys_) y *= factor;
  p.slope_lo_ *= factor;
  p.slope_hi_ *= factor;
  return p;
}

}  // namespace storemkt
