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

#include "storemkt/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "storemkt/errors.hpp"

namespace storemkt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_piece(const QuadPiece& p, double x) {
  return (p.a * x + p.b) * x + p.c;
}

double deriv_piece(const QuadPiece& p, double x) { return 2.0 * p.a * x + p.b; }
}  // namespace

std::size_t PiecewiseQuadratic::locate(double x) const {
  // Largest i with pieces_[i].lo <= x.
  std::size_t lo = 0, hi = pieces_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (pieces_[mid].lo <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

PiecewiseQuadratic PiecewiseQuadratic::from_pieces(
    std::vector<QuadPiece> pieces) {
  if (pieces.empty()) throw DomainError("PiecewiseQuadratic: no pieces");
  if (!(pieces.front().lo == -kInf))
    throw DomainError("PiecewiseQuadratic: first piece must start at -inf");
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (!(pieces[i].lo > pieces[i - 1].lo))
      throw DomainError("PiecewiseQuadratic: piece starts must be ascending");
  for (const QuadPiece& p : pieces)
    if (p.a < -1e-12)
      throw NonConvexError("PiecewiseQuadratic: concave piece (a = " +
                           std::to_string(p.a) + ")");
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const double L = pieces[i].lo;
    const double fl = eval_piece(pieces[i - 1], L);
    const double fr = eval_piece(pieces[i], L);
    if (std::abs(fl - fr) > 1e-9 * (1.0 + std::abs(fl)))
      throw DomainError("PiecewiseQuadratic: discontinuity at x = " +
                        std::to_string(L));
    const double dl = deriv_piece(pieces[i - 1], L);
    const double dr = deriv_piece(pieces[i], L);
    if (dl > dr + 1e-9 * (1.0 + std::abs(dl)))
      throw NonConvexError("PiecewiseQuadratic: derivative decreases at x = " +
                           std::to_string(L));
  }
  PiecewiseQuadratic f;
  f.pieces_ = std::move(pieces);
  return f;
}

PiecewiseQuadratic PiecewiseQuadratic::quadratic(double a, double b, double c) {
  return from_pieces({QuadPiece{-kInf, a, b, c}});
}

PiecewiseQuadratic PiecewiseQuadratic::from_marginal(const Polyline& m,
                                                     double tol) {
  if (!m.nondecreasing(tol))
    throw NonConvexError("from_marginal: marginal decreases");
  const auto& xs = m.xs();
  const auto& ys = m.ys();
  std::vector<QuadPiece> pieces;
  // Segment below the first breakpoint.
  pieces.push_back(QuadPiece{-kInf, 0.5 * m.slope_below(),
                             ys.front() - m.slope_below() * xs.front(), 0.0});
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    pieces.push_back(QuadPiece{xs[i], 0.5 * s, ys[i] - s * xs[i], 0.0});
  }
  pieces.push_back(QuadPiece{xs.back(), 0.5 * m.slope_above(),
                             ys.back() - m.slope_above() * xs.back(), 0.0});
  // Anchor F(0) = 0 and stitch the constants outward from the piece holding 0.
  std::size_t j = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].lo <= 0.0) j = i;
  pieces[j].c = 0.0;
  for (std::size_t i = j + 1; i < pieces.size(); ++i) {
    const double L = pieces[i].lo;
    pieces[i].c = eval_piece(pieces[i - 1], L) -
                  (pieces[i].a * L + pieces[i].b) * L;
  }
  for (std::size_t i = j; i-- > 0;) {
    const double L = pieces[i + 1].lo;
    pieces[i].c = eval_piece(pieces[i + 1], L) -
                  (pieces[i].a * L + pieces[i].b) * L;
  }
  return from_pieces(std::move(pieces));
}

double PiecewiseQuadratic::value(double x) const {
  return eval_piece(pieces_[locate(x)], x);
}

double PiecewiseQuadratic::deriv_plus(double x) const {
  return deriv_piece(pieces_[locate(x)], x);
}

double PiecewiseQuadratic::deriv_minus(double x) const {
  std::size_t i = locate(x);
  if (i > 0 && pieces_[i].lo == x) --i;
  return deriv_piece(pieces_[i], x);
}

namespace {
// Piece index whose half-open span contains points just right of x.
std::size_t piece_right_of(const std::vector<QuadPiece>& pieces,
                           std::size_t hint, double x) {
  std::size_t i = hint;
  while (i + 1 < pieces.size() && pieces[i + 1].lo <= x) ++i;
  return i;
}
}  // namespace

PiecewiseQuadratic::Range PiecewiseQuadratic::argmin_tilted(double mu,
                                                            double xlo,
                                                            double xhi) const {
  if (xlo >= xhi) return {xlo, xlo};
  // Minimizer set of f(x) - mu*x is {x : f'(x-) <= mu <= f'(x+)}, clipped.
  // Flat tilted stretches (a == 0, b == mu) widen it into an interval.
  auto extend_right = [&](double from) {
    double hi = from;
    std::size_t i = piece_right_of(pieces_, locate(from), from);
    while (pieces_[i].a == 0.0 && pieces_[i].b == mu) {
      const double pend = (i + 1 < pieces_.size()) ? pieces_[i + 1].lo : kInf;
      hi = std::min(pend, xhi);
      if (hi >= xhi || i + 1 >= pieces_.size()) break;
      ++i;
    }
    return hi;
  };
  auto extend_left = [&](double from) {
    double lo = from;
    std::size_t i = locate(from);
    if (i > 0 && pieces_[i].lo == from) --i;
    while (pieces_[i].a == 0.0 && pieces_[i].b == mu) {
      lo = std::max(pieces_[i].lo, xlo);
      if (lo <= xlo || i == 0) break;
      --i;
    }
    return lo;
  };
  if (deriv_plus(xlo) >= mu) return {xlo, extend_right(xlo)};
  if (deriv_minus(xhi) <= mu) return {extend_left(xhi), xhi};
  // Derivative crosses mu strictly inside [xlo, xhi]. Scan for the first
  // point with tilted derivative >= 0, then widen across any flat stretch.
  std::size_t i = locate(xlo);
  while (true) {
    const QuadPiece& p = pieces_[i];
    const double pend = (i + 1 < pieces_.size()) ? pieces_[i + 1].lo : kInf;
    const double plo = std::max(p.lo, xlo);
    const double phi = std::min(pend, xhi);
    const double dphi = (p.a == 0.0) ? p.b : deriv_piece(p, phi);
    if (phi > plo && dphi >= mu) {
      double lo;
      if (deriv_piece(p, plo) >= mu)
        lo = plo;
      else if (p.a > 0.0)
        lo = std::clamp((mu - p.b) / (2.0 * p.a), plo, phi);
      else
        lo = plo;
      return {lo, extend_right(lo)};
    }
    if (i + 1 >= pieces_.size() || pend >= xhi) return {xhi, xhi};
    ++i;
  }
}

PiecewiseQuadratic PiecewiseQuadratic::compose_h(double eps) const {
  if (!(eps > 0.0 && eps <= 1.0))
    throw DomainError("compose_h: efficiency must be in (0, 1]");
  std::vector<QuadPiece> out;
  // x < 0 half, from pieces of f on z < 0 via z = eps*x.
  for (const QuadPiece& p : pieces_) {
    if (p.lo >= 0.0) break;
    out.push_back(QuadPiece{p.lo == -kInf ? -kInf : p.lo / eps,
                            p.a * eps * eps, p.b * eps, p.c});
  }
  // x >= 0 half, f unchanged.
  std::size_t j = locate(0.0);
  out.push_back(QuadPiece{0.0, pieces_[j].a, pieces_[j].b, pieces_[j].c});
  for (std::size_t i = j + 1; i < pieces_.size(); ++i)
    if (pieces_[i].lo > 0.0) out.push_back(pieces_[i]);
  return from_pieces(std::move(out));
}

PiecewiseQuadratic PiecewiseQuadratic::plus(const PiecewiseQuadratic& g) const {
  std::vector<double> cuts;
  for (const auto& p : pieces_) cuts.push_back(p.lo);
  for (const auto& p : g.pieces_) cuts.push_back(p.lo);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<QuadPiece> out;
  for (double lo : cuts) {
    const double q = (lo == -kInf) ? -1e300 : lo;
    const QuadPiece& pf = pieces_[locate(q)];
    const QuadPiece& pg = g.pieces_[g.locate(q)];
    out.push_back(QuadPiece{lo, pf.a + pg.a, pf.b + pg.b, pf.c + pg.c});
  }
  return from_pieces(std::move(out));
}

PiecewiseQuadratic PiecewiseQuadratic::plus_quadratic(double a, double b,
                                                      double c) const {
  std::vector<QuadPiece> out = pieces_;
  for (QuadPiece& p : out) {
    p.a += a;
    p.b += b;
    p.c += c;
  }
  return from_pieces(std::move(out));
}

}  // namespace storemkt
