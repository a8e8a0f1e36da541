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

#include "storemkt/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "storemkt/errors.hpp"

namespace storemkt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-norm point of {x : A <= x <= B, sum x = target}; the usual clipped
// water level found by bisection on the level.
void water_fill(std::span<const double> A, std::span<const double> B,
                double target, std::span<double> out) {
  const std::size_t n = A.size();
  double lo = A[0], hi = B[0];
  for (std::size_t t = 0; t < n; ++t) {
    lo = std::min(lo, A[t]);
    hi = std::max(hi, B[t]);
  }
  auto fill = [&](double nu) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      out[t] = std::clamp(nu, A[t], B[t]);
      s += out[t];
    }
    return s;
  };
  double nu = 0.5 * (lo + hi);
  for (int it = 0; it < 100 && hi - lo > 1e-16 * (1.0 + std::abs(lo) + std::abs(hi));
       ++it) {
    nu = 0.5 * (lo + hi);
    if (fill(nu) < target)
      lo = nu;
    else
      hi = nu;
  }
  double s = fill(hi);
  // Spread the leftover across coordinates still strictly inside.
  for (int pass = 0; pass < 3; ++pass) {
    const double r = target - s;
    if (std::abs(r) <= 1e-15 * (1.0 + std::abs(target))) break;
    std::size_t m = 0;
    for (std::size_t t = 0; t < n; ++t)
      if (out[t] > A[t] && out[t] < B[t]) ++m;
    if (m == 0) break;
    const double bump = r / static_cast<double>(m);
    s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (out[t] > A[t] && out[t] < B[t])
        out[t] = std::clamp(out[t] + bump, A[t], B[t]);
      s += out[t];
    }
  }
}

struct RelaxOut {
  double mu;
  bool tie;
};

// Equalizes the tilted per-period minimizers at a scalar multiplier so the
// flows sum to target. Boxes [l_t, u_t] are respected exactly.
RelaxOut relax_solve(std::span<const PiecewiseQuadratic> costs,
                     std::span<const double> l, std::span<const double> u,
                     double target, std::span<double> x, int iters,
                     kernels::Exec exec) {
  const std::size_t n = costs.size();
  std::vector<double> tlo(n), thi(n), A(n), B(n);
  auto bracket = kernels::tilt_bracket(costs, l, u, exec);
  double muL = bracket.lo, muH = bracket.hi;
  // At the bracket ends every period pins at its box end.
  for (std::size_t t = 0; t < n; ++t) {
    A[t] = u[t];  // largest minimizers at muL are the lower box ends; A holds
    B[t] = l[t];  // r.hi(muL), B holds r.lo(muH); initialized below.
  }
  {
    auto sl = kernels::tilted_argmin(costs, muL, l, u, tlo, thi, exec);
    std::copy(thi.begin(), thi.end(), A.begin());
    (void)sl;
    auto sh = kernels::tilted_argmin(costs, muH, l, u, tlo, thi, exec);
    std::copy(tlo.begin(), tlo.end(), B.begin());
    (void)sh;
  }
  for (int it = 0; it < iters; ++it) {
    if (muH - muL <= 1e-15 * (1.0 + std::abs(muL) + std::abs(muH))) break;
    const double mid = 0.5 * (muL + muH);
    const auto s = kernels::tilted_argmin(costs, mid, l, u, tlo, thi, exec);
    if (s.hi_sum < target) {
      muL = mid;
      std::copy(thi.begin(), thi.end(), A.begin());
    } else if (s.lo_sum > target) {
      muH = mid;
      std::copy(tlo.begin(), tlo.end(), B.begin());
    } else {
      // target is attainable at this very multiplier
      water_fill(tlo, thi, target, x);
      bool tie = false;
      for (std::size_t t = 0; t < n; ++t)
        if (thi[t] - tlo[t] > 1e-9 * (1.0 + std::abs(thi[t]))) tie = true;
      return {mid, tie};
    }
  }
  // Argmin monotonicity gives A <= B componentwise and the sums straddle
  // target, so the fill is well posed.
  for (std::size_t t = 0; t < n; ++t)
    if (A[t] > B[t]) std::swap(A[t], B[t]);
  water_fill(A, B, target, x);
  bool tie = false;
  for (std::size_t t = 0; t < n; ++t)
    if (B[t] - A[t] > 1e-9 * (1.0 + std::abs(B[t]))) tie = true;
  return {0.5 * (muL + muH), tie};
}

struct Reach {
  std::vector<double> lo, hi;  // path-feasible level interval, index 0..T
};

Reach reachable_levels(const CumulativeProblem& p) {
  const std::size_t T = p.costs.size();
  std::vector<double> flo(T + 1), fhi(T + 1), blo(T + 1), bhi(T + 1);
  flo[0] = fhi[0] = p.level_start;
  for (std::size_t t = 1; t <= T; ++t) {
    flo[t] = flo[t - 1] + p.flow_lo[t - 1];
    fhi[t] = fhi[t - 1] + p.flow_hi[t - 1];
    if (t < T) {
      flo[t] = std::max(flo[t], p.level_lo[t - 1]);
      fhi[t] = std::min(fhi[t], p.level_hi[t - 1]);
    } else {
      flo[t] = std::max(flo[t], p.terminal_lo);
      fhi[t] = std::min(fhi[t], p.terminal_hi);
    }
    if (flo[t] > fhi[t] + 1e-12 * (1.0 + std::abs(flo[t])))
      throw InfeasibleError(
          "boundary levels unreachable under rate and level bounds at t = " +
          std::to_string(t));
  }
  blo[T] = std::max(p.terminal_lo, flo[T]);
  bhi[T] = std::min(p.terminal_hi, fhi[T]);
  for (std::size_t t = T; t-- > 0;) {
    blo[t] = blo[t + 1] - p.flow_hi[t];
    bhi[t] = bhi[t + 1] - p.flow_lo[t];
    if (t > 0 && t < T) {
      blo[t] = std::max(blo[t], p.level_lo[t - 1]);
      bhi[t] = std::min(bhi[t], p.level_hi[t - 1]);
    }
  }
  Reach r;
  r.lo.resize(T + 1);
  r.hi.resize(T + 1);
  for (std::size_t t = 0; t <= T; ++t) {
    r.lo[t] = std::max(flo[t], blo[t]);
    r.hi[t] = std::min(fhi[t], bhi[t]);
  }
  return r;
}

struct Pinned {
  std::size_t a, b;  // level indices, a < b
  double Sa, Sb;
};

// Rebuilds a multiplier vector that certifies the given optimal flows. Each
// period constrains mu to its tilted-subgradient interval (unbounded on the
// side of an active flow box); runs between bound touches share one value;
// the Lagrangian ordering at touches is chained forward and resolved
// backward, staying as close to the preferred values as the chain allows.
std::vector<double> recover_multipliers(const CumulativeProblem& prob,
                                        std::span<const double> x,
                                        std::span<const double> preferred) {
  const std::size_t T = prob.costs.size();
  constexpr double kBig = 1e300;
  double scale = std::max(1.0, std::abs(prob.level_start));
  for (double v : prob.level_hi) scale = std::max(scale, std::abs(v));
  const double cls = 1e-9 * scale;
  const double box_eps = 1e-12;

  // Junction after period t (at level S_t): 0 free/equal, -1 mu may only
  // fall (empty store), +1 mu may only rise (full store), 2 unconstrained.
  std::vector<int> junction(T, 0);
  {
    double level = prob.level_start;
    for (std::size_t t = 1; t < T; ++t) {
      level += x[t - 1];
      const bool at_lo = level <= prob.level_lo[t - 1] + cls;
      const bool at_hi = level >= prob.level_hi[t - 1] - cls;
      junction[t - 1] = at_lo && at_hi ? 2 : at_lo ? -1 : at_hi ? +1 : 0;
    }
  }

  struct Run {
    std::size_t begin, end;  // periods [begin, end)
    double lo, hi;           // intersected subgradient interval
    double pref;
    int out_junction;  // junction after the run's last period
  };
  std::vector<Run> runs;
  std::size_t begin = 0;
  for (std::size_t t = 0; t < T; ++t) {
    const bool last = t + 1 == T;
    if (last || junction[t] != 0) {
      Run r{begin, t + 1, -kBig, kBig, preferred[begin],
            last ? 0 : junction[t]};
      for (std::size_t s = begin; s < t + 1; ++s) {
        const double slack = box_eps * (1.0 + std::abs(x[s]));
        const double lo = (x[s] <= prob.flow_lo[s] + slack)
                              ? -kBig
                              : prob.costs[s].deriv_minus(x[s]);
        const double hi = (x[s] >= prob.flow_hi[s] - slack)
                              ? kBig
                              : prob.costs[s].deriv_plus(x[s]);
        r.lo = std::max(r.lo, lo);
        r.hi = std::min(r.hi, hi);
      }
      if (r.lo > r.hi) {
        // Numerical dust only; a genuinely empty interval means the flows
        // are not optimal, and the residual will say so.
        if (r.lo - r.hi < 1e-7 * (1.0 + std::abs(r.lo)))
          r.lo = r.hi = 0.5 * (r.lo + r.hi);
        else
          return {preferred.begin(), preferred.end()};
      }
      runs.push_back(r);
      begin = t + 1;
    }
  }

  // Forward reachability along the junction chain.
  const std::size_t K = runs.size();
  std::vector<double> rlo(K), rhi(K);
  rlo[0] = runs[0].lo;
  rhi[0] = runs[0].hi;
  for (std::size_t k = 1; k < K; ++k) {
    rlo[k] = runs[k].lo;
    rhi[k] = runs[k].hi;
    switch (runs[k - 1].out_junction) {
      case +1: rlo[k] = std::max(rlo[k], rlo[k - 1]); break;
      case -1: rhi[k] = std::min(rhi[k], rhi[k - 1]); break;
      default: break;  // free junction resets the chain
    }
    if (rlo[k] > rhi[k]) {
      if (rlo[k] - rhi[k] < 1e-7 * (1.0 + std::abs(rlo[k])))
        rlo[k] = rhi[k] = 0.5 * (rlo[k] + rhi[k]);
      else
        return {preferred.begin(), preferred.end()};
    }
  }
  // Backward selection.
  std::vector<double> chosen(K);
  chosen[K - 1] = std::clamp(runs[K - 1].pref, rlo[K - 1], rhi[K - 1]);
  for (std::size_t k = K - 1; k-- > 0;) {
    double lo = rlo[k], hi = rhi[k];
    switch (runs[k].out_junction) {
      case +1: hi = std::min(hi, chosen[k + 1]); break;
      case -1: lo = std::max(lo, chosen[k + 1]); break;
      default: break;
    }
    if (lo > hi) lo = hi = std::clamp(chosen[k + 1], rlo[k], rhi[k]);
    chosen[k] = std::clamp(runs[k].pref, lo, hi);
  }
  std::vector<double> mu(T);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t t = runs[k].begin; t < runs[k].end; ++t)
      mu[t] = chosen[k];
  return mu;
}

}  // namespace

CumulativeSolution solve_cumulative(const CumulativeProblem& prob,
                                    const SolveOptions& opts) {
  const std::size_t T = prob.costs.size();
  if (T == 0) throw DomainError("solve_cumulative: empty horizon");
  if (prob.flow_lo.size() != T || prob.flow_hi.size() != T ||
      prob.level_lo.size() + 1 != T || prob.level_hi.size() + 1 != T)
    throw DomainError("solve_cumulative: bound vector lengths disagree");
  if (prob.terminal_lo > prob.terminal_hi)
    throw DomainError("solve_cumulative: empty terminal interval");

  const Reach reach = reachable_levels(prob);

  double scale = std::max(1.0, std::abs(prob.level_start));
  for (double v : prob.level_hi) scale = std::max(scale, std::abs(v));
  const double pin_eps = 1e-10 * scale;

  std::span<const PiecewiseQuadratic> costs(prob.costs);
  std::span<const double> l(prob.flow_lo), u(prob.flow_hi);

  auto solve_to = [&](double target) {
    CumulativeSolution out;
    out.x.assign(T, 0.0);
    out.mu.assign(T, 0.0);
    out.tie_broken = false;
    std::vector<Pinned> stack{{0, T, prob.level_start, target}};
    while (!stack.empty()) {
      const Pinned seg = stack.back();
      stack.pop_back();
      const std::size_t len = seg.b - seg.a;
      auto cseg = costs.subspan(seg.a, len);
      auto lseg = l.subspan(seg.a, len);
      auto useg = u.subspan(seg.a, len);
      double tgt = seg.Sb - seg.Sa;
      const double slo = kernels::sum(lseg, opts.exec);
      const double shi = kernels::sum(useg, opts.exec);
      if (tgt < slo - 1e-6 * scale || tgt > shi + 1e-6 * scale)
        throw InfeasibleError("segment target outside flow reach");
      tgt = std::clamp(tgt, slo, shi);
      std::span<double> xseg(out.x.data() + seg.a, len);
      const RelaxOut r =
          relax_solve(cseg, lseg, useg, tgt, xseg, opts.bisect_iters, opts.exec);
      // Largest breach of the interior level bounds decides the pin.
      double level = seg.Sa, worst = 0.0, pin_val = 0.0;
      std::size_t worst_t = 0;
      for (std::size_t t = seg.a + 1; t < seg.b; ++t) {
        level += out.x[t - 1];
        const double vhi = level - prob.level_hi[t - 1];
        const double vlo = prob.level_lo[t - 1] - level;
        if (vhi > worst) {
          worst = vhi;
          worst_t = t;
          pin_val = prob.level_hi[t - 1];
        }
        if (vlo > worst) {
          worst = vlo;
          worst_t = t;
          pin_val = prob.level_lo[t - 1];
        }
      }
      if (worst <= pin_eps) {
        for (std::size_t t = seg.a; t < seg.b; ++t) out.mu[t] = r.mu;
        out.tie_broken = out.tie_broken || r.tie;
        continue;
      }
      pin_val = std::clamp(pin_val, reach.lo[worst_t], reach.hi[worst_t]);
      stack.push_back({seg.a, worst_t, seg.Sa, pin_val});
      stack.push_back({worst_t, seg.b, pin_val, seg.Sb});
    }
    out.mu = recover_multipliers(prob, out.x, out.mu);
    out.objective = kernels::total_cost(costs, out.x, opts.exec);
    double level = prob.level_start;
    for (double xt : out.x) level += xt;
    out.sum_residual = std::abs(level - target);
    return out;
  };

  double tlo = std::max(prob.terminal_lo, reach.lo[T]);
  double thi = std::min(prob.terminal_hi, reach.hi[T]);
  if (thi <= tlo) return solve_to(tlo);

  // Free terminal within an interval: the last segment's multiplier is the
  // marginal value of terminal inventory, nondecreasing in the target.
  CumulativeSolution hi_sol = solve_to(thi);
  if (hi_sol.mu[T - 1] <= 0.0) return hi_sol;
  CumulativeSolution lo_sol = solve_to(tlo);
  if (lo_sol.mu[T - 1] >= 0.0) return lo_sol;
  for (int it = 0; it < 60 && thi - tlo > 1e-12 * scale; ++it) {
    const double mid = 0.5 * (tlo + thi);
    CumulativeSolution s = solve_to(mid);
    if (s.mu[T - 1] >= 0.0)
      thi = mid;
    else
      tlo = mid;
  }
  return solve_to(thi);
}

namespace {

// z * p(z + k) as an exact piecewise quadratic in the market-side quantity z.
PiecewiseQuadratic cost_in_z(const PriceFunction& pf, double k) {
  if (pf.is_linear()) {
    const double ps = pf.pslope();
    const double pb = pf.pbar();
    return PiecewiseQuadratic::from_pieces(
        {QuadPiece{-kInf, ps, pb + ps * k, 0.0}});
  }
  const auto& xs = pf.curve().xs();
  std::vector<double> cuts{-kInf};
  for (double bx : xs) cuts.push_back(bx - k);
  std::vector<QuadPiece> pieces;
  pieces.reserve(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    double rep;  // representative z strictly inside the region
    if (i + 1 < cuts.size())
      rep = (cuts[i] == -kInf) ? cuts[i + 1] - 1.0
                               : 0.5 * (cuts[i] + cuts[i + 1]);
    else
      rep = cuts[i] + 1.0;
    const double beta = pf.curve().slope_at(rep + k);
    const double val = pf.curve()(rep + k);
    pieces.push_back(QuadPiece{cuts[i], beta, val - beta * rep, 0.0});
  }
  return PiecewiseQuadratic::from_pieces(std::move(pieces));
}

CumulativeProblem build_problem(const StoreSpec& spec,
                                std::vector<PiecewiseQuadratic> costs) {
  const std::size_t T = costs.size();
  CumulativeProblem p;
  p.costs = std::move(costs);
  p.flow_lo.assign(T, -spec.rate_out);
  p.flow_hi.assign(T, spec.rate_in);
  p.level_lo.assign(T - 1, 0.0);
  p.level_hi.assign(T - 1, spec.capacity);
  p.level_start = spec.level_start;
  p.terminal_lo = p.terminal_hi = spec.level_end;
  return p;
}

double slackness_residual(const CumulativeProblem& prob,
                          std::span<const double> x,
                          std::span<const double> mu, double cls_eps) {
  const std::size_t T = prob.costs.size();
  double worst = 0.0;
  double level = prob.level_start;
  for (std::size_t t = 1; t < T; ++t) {
    level += x[t - 1];
    const bool at_lo = level <= prob.level_lo[t - 1] + cls_eps;
    const bool at_hi = level >= prob.level_hi[t - 1] - cls_eps;
    const double jump = mu[t] - mu[t - 1];
    if (at_lo && at_hi) continue;
    if (at_lo)
      worst = std::max(worst, jump);  // mu may only fall at an empty store
    else if (at_hi)
      worst = std::max(worst, -jump);  // mu may only rise at a full store
    else
      worst = std::max(worst, std::abs(jump));
  }
  return worst;
}

double feasibility_residual(const CumulativeProblem& prob,
                            std::span<const double> x) {
  const std::size_t T = prob.costs.size();
  double worst = 0.0;
  double level = prob.level_start;
  for (std::size_t t = 1; t <= T; ++t) {
    const double xt = x[t - 1];
    worst = std::max(worst, xt - prob.flow_hi[t - 1]);
    worst = std::max(worst, prob.flow_lo[t - 1] - xt);
    level += xt;
    if (t < T) {
      worst = std::max(worst, level - prob.level_hi[t - 1]);
      worst = std::max(worst, prob.level_lo[t - 1] - level);
    }
  }
  worst = std::max(worst, level - prob.terminal_hi);
  worst = std::max(worst, prob.terminal_lo - level);
  return std::max(0.0, worst);
}

CertifiedSolution certify(const CumulativeProblem& prob,
                          const CumulativeSolution& sol,
                          const SolveOptions& opts) {
  const std::size_t T = prob.costs.size();
  const double feas = feasibility_residual(prob, sol.x);
  const double gap =
      kernels::max_exact_gap(prob.costs, sol.x, sol.mu, prob.flow_lo,
                             prob.flow_hi, opts.exec);
  double scale = 1.0;
  for (double v : prob.level_hi) scale = std::max(scale, std::abs(v));
  const double slack = slackness_residual(prob, sol.x, sol.mu, 1e-9 * scale);
  CertifiedSolution out;
  out.schedule = schedule_from_flows(prob.level_start, sol.x);
  out.multipliers.mu = sol.mu;
  out.objective = sol.objective;
  out.kkt_residual = std::max({feas, gap, slack});
  out.unique = !sol.tie_broken;
  (void)T;
  return out;
}

}  // namespace

std::vector<PiecewiseQuadratic> trading_costs(
    const StoreSpec& spec, std::span<const PriceFunction> prices,
    std::span<const double> others) {
  spec.validate();
  const std::size_t T = prices.size();
  if (!others.empty() && others.size() != T)
    throw DomainError("trading_costs: others length != horizon");
  const double zlo = -spec.efficiency * spec.rate_out;
  const double zhi = spec.rate_in;
  std::vector<PiecewiseQuadratic> out;
  out.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double k = others.empty() ? 0.0 : others[t];
    const double slack = 1e-9 * (1.0 + prices[t].hi() - prices[t].lo());
    if (zlo + k < prices[t].lo() - slack || zhi + k > prices[t].hi() + slack)
      throw DomainError(
          "trading_costs: aggregate flow range [" + std::to_string(zlo + k) +
          ", " + std::to_string(zhi + k) + "] leaves price valid range [" +
          std::to_string(prices[t].lo()) + ", " +
          std::to_string(prices[t].hi()) + "] at period " + std::to_string(t + 1));
    out.push_back(cost_in_z(prices[t], k).compose_h(spec.efficiency));
  }
  return out;
}

CertifiedSolution optimize_single(const StoreSpec& spec,
                                  std::span<const PriceFunction> prices,
                                  std::span<const double> others,
                                  const SolveOptions& opts) {
  auto costs = trading_costs(spec, prices, others);
  CumulativeProblem prob = build_problem(spec, std::move(costs));
  const CumulativeSolution sol = solve_cumulative(prob, opts);
  return certify(prob, sol, opts);
}

CertifiedSolution optimize_with_costs(const StoreSpec& spec,
                                      std::span<const PiecewiseQuadratic> costs,
                                      const SolveOptions& opts) {
  spec.validate();
  CumulativeProblem prob =
      build_problem(spec, std::vector<PiecewiseQuadratic>(costs.begin(),
                                                          costs.end()));
  const CumulativeSolution sol = solve_cumulative(prob, opts);
  return certify(prob, sol, opts);
}

CertificateReport verify_certificate_costs(
    const StoreSpec& spec, std::span<const PiecewiseQuadratic> costs,
    const CertifiedSolution& sol, double tol, int grid_n, kernels::Exec exec) {
  const std::size_t T = costs.size();
  if (sol.schedule.periods() != T || sol.multipliers.mu.size() != T)
    throw DomainError("verify_certificate: solution length != horizon");
  CumulativeProblem prob = build_problem(
      spec, std::vector<PiecewiseQuadratic>(costs.begin(), costs.end()));
  const FlowVector x = flows(sol.schedule);
  CertificateReport rep;
  rep.feasibility = feasibility_residual(prob, x);
  rep.subproblem_gap = kernels::max_grid_gap(
      costs, x, sol.multipliers.mu, prob.flow_lo, prob.flow_hi, grid_n, exec);
  const double cls_eps = std::max(tol, 1e-9 * spec.capacity);
  rep.slackness = slackness_residual(prob, x, sol.multipliers.mu, cls_eps);
  rep.max_residual = std::max({rep.feasibility, rep.subproblem_gap,
                               rep.slackness});
  return rep;
}

CertificateReport verify_certificate(const StoreSpec& spec,
                                     std::span<const PriceFunction> prices,
                                     std::span<const double> others,
                                     const CertifiedSolution& sol, double tol,
                                     int grid_n, kernels::Exec exec) {
  const auto costs = trading_costs(spec, prices, others);
  return verify_certificate_costs(spec, costs, sol, tol, grid_n, exec);
}

double two_period_unconstrained(double pbar1, double pbar2, double ps1,
                                double ps2, double eps) {
  if (!(pbar1 > 0.0 && pbar2 > 0.0))
    throw DomainError("two_period_unconstrained: prices must be positive");
  if (ps1 < 0.0 || ps2 < 0.0)
    throw DomainError("two_period_unconstrained: negative slope");
  if (!(eps > 0.0 && eps <= 1.0))
    throw DomainError("two_period_unconstrained: efficiency outside (0, 1]");
  if (eps * pbar2 < pbar1) return 0.0;
  const double num = eps * pbar2 - pbar1;
  const double denom = 2.0 * (ps1 + eps * eps * ps2);
  if (denom == 0.0) {
    if (num > 0.0)
      throw DomainError(
          "two_period_unconstrained: zero slopes with a profitable spread, "
          "trade is unbounded");
    return 0.0;
  }
  return num / denom;
}

namespace {

SensitivityReport diff_reports(std::size_t t0, double delta,
                               const CumulativeSolution& base,
                               const CumulativeSolution& bumped) {
  const std::size_t T = base.x.size();
  SensitivityReport rep;
  rep.t0 = t0;
  rep.delta = delta;
  rep.flow_deltas.resize(T);
  double biggest = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    rep.flow_deltas[t] = bumped.x[t] - base.x[t];
    biggest = std::max(biggest, std::abs(rep.flow_deltas[t]));
  }
  const double ctol = std::max(1e-9, 1e-3 * biggest);
  rep.changed = biggest > 1e-9;
  rep.t1 = t0;
  rep.t2 = t0;
  if (rep.changed) {
    // Maximal runs of changed flows ending at t0 and starting at t0+1.
    while (rep.t1 >= 1 && std::abs(rep.flow_deltas[rep.t1 - 1]) > ctol)
      --rep.t1;
    while (rep.t2 + 1 <= T && std::abs(rep.flow_deltas[rep.t2]) > ctol)
      ++rep.t2;
  }
  rep.objective_delta = bumped.objective - base.objective;
  return rep;
}

}  // namespace

SensitivityReport sensitivity_capacity(const StoreSpec& spec,
                                       std::span<const PriceFunction> prices,
                                       std::span<const double> others,
                                       std::size_t t0, double delta,
                                       const SolveOptions& opts) {
  const std::size_t T = prices.size();
  if (!(t0 >= 1 && t0 < T))
    throw DomainError("sensitivity_capacity: t0 must satisfy 0 < t0 < T");
  auto costs = trading_costs(spec, prices, others);
  CumulativeProblem prob = build_problem(spec, std::move(costs));
  const CumulativeSolution base = solve_cumulative(prob, opts);
  prob.level_hi[t0 - 1] += delta;
  const CumulativeSolution bumped = solve_cumulative(prob, opts);
  return diff_reports(t0, delta, base, bumped);
}

SensitivityReport sensitivity_rate(const StoreSpec& spec,
                                   std::span<const PriceFunction> prices,
                                   std::span<const double> others,
                                   std::size_t t0, RateSide side, double delta,
                                   const SolveOptions& opts) {
  const std::size_t T = prices.size();
  if (!(t0 >= 1 && t0 <= T))
    throw DomainError("sensitivity_rate: t0 outside 1..T");
  auto costs = trading_costs(spec, prices, others);
  CumulativeProblem prob = build_problem(spec, std::move(costs));
  const CumulativeSolution base = solve_cumulative(prob, opts);
  if (side == RateSide::kIn)
    prob.flow_hi[t0 - 1] += delta;
  else
    prob.flow_lo[t0 - 1] -= delta;
  const CumulativeSolution bumped = solve_cumulative(prob, opts);
  return diff_reports(t0, delta, base, bumped);
}

LambdaMaxResult find_lambda_max(const StoreSpec& spec,
                                std::span<const double> pbar, double lambda_lo,
                                double lambda_hi, const SolveOptions& opts) {
  spec.validate();
  if (!(lambda_lo > 0.0 && lambda_hi > lambda_lo))
    throw DomainError("find_lambda_max: need 0 < lambda_lo < lambda_hi");
  const double btol = 1e-6;

  auto solve_at = [&](double lam) {
    std::vector<PriceFunction> prices;
    prices.reserve(pbar.size());
    const double lo = -spec.efficiency * spec.rate_out - 1e-9;
    const double hi = spec.rate_in + 1e-9;
    for (double pb : pbar)
      prices.push_back(PriceFunction::linear(pb, lam * pb, lo, hi));
    return optimize_single(spec, prices, {}, opts);
  };
  auto binding = [&](const CertifiedSolution& sol) {
    const auto x = flows(sol.schedule);
    for (double xt : x)
      if (xt >= spec.rate_in - btol || xt <= -spec.rate_out + btol) return true;
    for (std::size_t t = 1; t < sol.schedule.levels.size() - 1; ++t)
      if (sol.schedule.levels[t] >= spec.capacity - btol) return true;
    return false;
  };

  const CertifiedSolution at_lo = solve_at(lambda_lo);
  double traded = 0.0;
  for (double xt : flows(at_lo.schedule)) traded = std::max(traded, std::abs(xt));
  if (traded <= 1e-12)
    return {true, 0.0, "no trading at any market impact"};
  if (!binding(at_lo))
    return {true, lambda_lo, "unconstrained already at lambda_lo"};
  if (binding(solve_at(lambda_hi)))
    return {false, lambda_hi, "constraints still bind at lambda_hi"};

  double lo = lambda_lo, hi = lambda_hi;
  while (hi - lo > 1e-4 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (binding(solve_at(mid)))
      lo = mid;
    else
      hi = mid;
  }
  return {true, hi, ""};
}

}  // namespace storemkt
