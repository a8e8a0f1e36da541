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

#ifndef STOREMKT_PIECEWISE_HPP_
#define STOREMKT_PIECEWISE_HPP_

#include <vector>

#include "storemkt/curves.hpp"

namespace storemkt {

// One quadratic piece a*x^2 + b*x + c, valid on [lo, next piece's lo).
struct QuadPiece {
  double lo;
  double a, b, c;
};

// Convex, continuous, piecewise-quadratic function on the whole real line.
// This is the single cost representation the cumulative solver works on:
// trading costs h(x) p(h(x)+k), potential blocks, and the ownership-variant
// adapters all assemble into it exactly.
class PiecewiseQuadratic {
 public:
  // Pieces must start at lo = -inf, have ascending lo, be continuous, and
  // have a nondecreasing derivative. Violations throw DomainError.
  static PiecewiseQuadratic from_pieces(std::vector<QuadPiece> pieces);
  // Single global quadratic.
  static PiecewiseQuadratic quadratic(double a, double b, double c);
  // Antiderivative of a nondecreasing piecewise-linear marginal, anchored to
  // value 0 at x = 0. Throws NonConvexError if the marginal decreases.
  static PiecewiseQuadratic from_marginal(const Polyline& marginal,
                                          double tol = 1e-9);

  double value(double x) const;
  double deriv_plus(double x) const;
  double deriv_minus(double x) const;

  // Minimizer interval of value(x) - mu*x over [xlo, xhi]. The interval is
  // non-degenerate only across exactly-linear pieces.
  struct Range {
    double lo, hi;
  };
  Range argmin_tilted(double mu, double xlo, double xhi) const;

  // g(x) = f(h(x)) with h(x) = x for x >= 0 and eps*x for x < 0.
  // Requires the composed kink at 0 to stay convex (checked).
  PiecewiseQuadratic compose_h(double eps) const;

  // f(x) + g(x)
  PiecewiseQuadratic plus(const PiecewiseQuadratic& g) const;
  // f(x) + a*x^2 + b*x + c
  PiecewiseQuadratic plus_quadratic(double a, double b, double c) const;

  const std::vector<QuadPiece>& pieces() const { return pieces_; }

 private:
  PiecewiseQuadratic() = default;
  std::size_t locate(double x) const;
  std::vector<QuadPiece> pieces_;
};

}  // namespace storemkt

#endif  // STOREMKT_PIECEWISE_HPP_
