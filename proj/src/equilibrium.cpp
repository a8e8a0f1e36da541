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

#include "storemkt/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "storemkt/errors.hpp"

namespace storemkt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> companions(const std::vector<FlowVector>& x_all,
                               std::span<const StoreSpec> specs, std::size_t j,
                               std::size_t T) {
  std::vector<double> k(T, 0.0);
  for (std::size_t i = 0; i < x_all.size(); ++i) {
    if (i == j) continue;
    for (std::size_t t = 0; t < T; ++t)
      k[t] += eff_map(specs[i].efficiency, x_all[i][t]);
  }
  return k;
}

// (z + k) p(z + k) - k p(k): the store's own cost plus its externality on
// the companions, which makes cyclic descent on the combined cost exact.
PiecewiseQuadratic coop_cost_in_z(const PriceFunction& pf, double k) {
  const double pk = pf(k);
  if (pf.is_linear()) {
    const double ps = pf.pslope();
    const double pb = pf.pbar();
    return PiecewiseQuadratic::from_pieces(
        {QuadPiece{-kInf, ps, pb + 2.0 * ps * k, 0.0}});
  }
  const auto& xs = pf.curve().xs();
  std::vector<double> cuts{-kInf};
  for (double bx : xs) cuts.push_back(bx - k);
  std::vector<QuadPiece> pieces;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    double rep;
    if (i + 1 < cuts.size())
      rep = (cuts[i] == -kInf) ? cuts[i + 1] - 1.0
                               : 0.5 * (cuts[i] + cuts[i + 1]);
    else
      rep = cuts[i] + 1.0;
    const double beta = pf.curve().slope_at(rep + k);
    const double val = pf.curve()(rep + k);  // p at w = rep + k
    const double alpha = val - beta * (rep + k);
    // M(z) = (z+k)(alpha + beta (z+k)) - k p(k)
    pieces.push_back(QuadPiece{cuts[i], beta, alpha + 2.0 * beta * k,
                               k * (alpha + beta * k) - k * pk});
  }
  return PiecewiseQuadratic::from_pieces(std::move(pieces));
}

std::vector<PiecewiseQuadratic> coop_costs(const StoreSpec& spec,
                                           std::span<const PriceFunction> prices,
                                           std::span<const double> others) {
  const std::size_t T = prices.size();
  const double zlo = -spec.efficiency * spec.rate_out;
  const double zhi = spec.rate_in;
  std::vector<PiecewiseQuadratic> out;
  out.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double k = others[t];
    const double slack = 1e-9 * (1.0 + prices[t].hi() - prices[t].lo());
    if (zlo + k < prices[t].lo() - slack || zhi + k > prices[t].hi() + slack)
      throw DomainError("cooperative costs: aggregate flow leaves the price "
                        "valid range at period " +
                        std::to_string(t + 1));
    out.push_back(coop_cost_in_z(prices[t], k).compose_h(spec.efficiency));
  }
  return out;
}

Schedule ramp_schedule(const StoreSpec& spec, std::size_t T) {
  Schedule s;
  s.levels.reserve(T + 1);
  for (std::size_t t = 0; t <= T; ++t)
    s.levels.push_back(spec.level_start +
                       (spec.level_end - spec.level_start) *
                           static_cast<double>(t) / static_cast<double>(T));
  return s;
}

enum class CostKind { kOwn, kCoop };
enum class StopRule { kProfit, kPotential, kJoint };

double joint_cost(const std::vector<FlowVector>& x_all,
                  std::span<const StoreSpec> specs,
                  std::span<const PriceFunction> prices) {
  double total = 0.0;
  for (std::size_t j = 0; j < x_all.size(); ++j)
    total += store_cost(x_all[j], companions(x_all, specs, j, prices.size()),
                        prices, specs[j].efficiency);
  return total;
}

EquilibriumResult run_cyclic(std::span<const StoreSpec> specs,
                             std::span<const PriceFunction> prices,
                             std::span<const Schedule> init, CostKind kind,
                             StopRule rule, const EquilibriumOptions& opts) {
  const std::size_t n = specs.size();
  const std::size_t T = prices.size();
  if (n == 0) throw DomainError("equilibrium: no stores");
  for (const auto& s : specs) s.validate();

  std::vector<FlowVector> x_all(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!init.empty()) {
      if (init[j].periods() != T)
        throw DomainError("equilibrium: init schedule length != horizon");
      x_all[j] = flows(init[j]);
    } else {
      x_all[j] = flows(ramp_schedule(specs[j], T));
    }
  }

  auto scalar_metric = [&]() {
    if (rule == StopRule::kPotential) {
      std::vector<Schedule> ss;
      for (std::size_t j = 0; j < n; ++j)
        ss.push_back(schedule_from_flows(specs[j].level_start, x_all[j]));
      return potential_value(specs, prices, ss);
    }
    return joint_cost(x_all, specs, prices);
  };
  const bool trace = opts.potential_trace != nullptr;
  auto record_trace = [&]() {
    if (!trace) return;
    std::vector<Schedule> ss;
    for (std::size_t j = 0; j < n; ++j)
      ss.push_back(schedule_from_flows(specs[j].level_start, x_all[j]));
    opts.potential_trace->push_back(potential_value(specs, prices, ss));
  };
  record_trace();

  double metric = (rule == StopRule::kProfit) ? 0.0 : scalar_metric();
  std::size_t sweeps = 0;
  bool converged = false;
  std::string warning;

  for (std::size_t sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    sweeps = sweep;
    double max_improve = 0.0;
    bool moved = false;
    for (std::size_t j = 0; j < n; ++j) {
      const auto others = companions(x_all, specs, j, T);
      CertifiedSolution sol;
      if (kind == CostKind::kOwn) {
        sol = optimize_single(specs[j], prices, others, opts.solve);
      } else {
        const auto costs = coop_costs(specs[j], prices, others);
        sol = optimize_with_costs(specs[j], costs, opts.solve);
      }
      const double old_profit =
          -store_cost(x_all[j], others, prices, specs[j].efficiency);
      FlowVector nx = flows(sol.schedule);
      const double new_profit =
          -store_cost(nx, others, prices, specs[j].efficiency);
      if (kind == CostKind::kOwn)
        max_improve = std::max(max_improve, new_profit - old_profit);
      for (std::size_t t = 0; t < T && !moved; ++t)
        moved = nx[t] != x_all[j][t];
      x_all[j] = std::move(nx);
      record_trace();
    }
    if (!moved) {
      // Bitwise fixed point of the best-response map.
      converged = true;
      break;
    }
    if (rule == StopRule::kProfit) {
      double total_profit = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        total_profit -= store_cost(x_all[j], companions(x_all, specs, j, T),
                                   prices, specs[j].efficiency);
      const double tol = opts.tol >= 0.0
                             ? opts.tol
                             : std::max(1e-9, 1e-7 * std::abs(total_profit));
      if (max_improve <= tol) {
        converged = true;
        break;
      }
    } else {
      const double next = scalar_metric();
      double tol = opts.tol;
      if (tol < 0.0) {
        // The joint rule keeps an absolute floor; the potential rule runs to
        // the float resolution of the potential so flows settle tightly.
        tol = (rule == StopRule::kJoint)
                  ? std::max(1e-10, 1e-12 * std::abs(next))
                  : std::max(1e-13, 4.0 * 2.22e-16 * std::abs(next));
      }
      const double drop = metric - next;
      metric = next;
      if (drop < tol) {
        converged = true;
        break;
      }
    }
  }
  if (!converged)
    warning = "sweep cap reached before the stopping rule was met";

  EquilibriumResult out;
  out.mode = (kind == CostKind::kCoop) ? EquilibriumMode::kCooperative
                                       : EquilibriumMode::kNash;
  out.iterations = sweeps;
  out.converged = converged;
  out.warning = warning;
  out.br_residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto others = companions(x_all, specs, j, T);
    const double cur =
        -store_cost(x_all[j], others, prices, specs[j].efficiency);
    const auto best = optimize_single(specs[j], prices, others, opts.solve);
    out.br_residual = std::max(out.br_residual, -best.objective - cur);
    out.profits.push_back(cur);
    out.schedules.push_back(
        schedule_from_flows(specs[j].level_start, x_all[j]));
  }
  std::vector<double> eff;
  for (const auto& s : specs) eff.push_back(s.efficiency);
  out.clearing = clearing_prices(prices, out.schedules, eff);
  return out;
}

}  // namespace

EquilibriumResult cooperative(std::span<const StoreSpec> specs,
                              std::span<const PriceFunction> prices,
                              const EquilibriumOptions& opts) {
  return run_cyclic(specs, prices, {}, CostKind::kCoop, StopRule::kJoint,
                    opts);
}

std::optional<EquilibriumResult> aggregate_shortcut(
    std::span<const StoreSpec> specs, std::span<const PriceFunction> prices,
    const EquilibriumOptions& opts) {
  if (specs.empty()) throw DomainError("aggregate_shortcut: no stores");
  const double eps = specs[0].efficiency;
  for (const auto& s : specs) {
    s.validate();
    if (std::abs(s.efficiency - eps) > 1e-12)
      throw DomainError("aggregate_shortcut: efficiencies must be equal");
  }
  StoreSpec total{0.0, 0.0, 0.0, eps, 0.0, 0.0};
  for (const auto& s : specs) {
    total.capacity += s.capacity;
    total.rate_in += s.rate_in;
    total.rate_out += s.rate_out;
    total.level_start += s.level_start;
    total.level_end += s.level_end;
  }
  const auto sol = optimize_single(total, prices, {}, opts.solve);
  // Capacity-proportional split.
  std::vector<Schedule> split(specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const double kappa = specs[j].capacity / total.capacity;
    for (double level : sol.schedule.levels)
      split[j].levels.push_back(kappa * level);
    if (!feasible(specs[j], split[j]).ok) return std::nullopt;
  }
  EquilibriumResult out;
  out.mode = EquilibriumMode::kCooperative;
  out.iterations = 1;
  out.converged = true;
  out.schedules = std::move(split);
  out.br_residual = 0.0;
  std::vector<FlowVector> x_all;
  for (const auto& s : out.schedules) x_all.push_back(flows(s));
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const auto others = companions(x_all, specs, j, prices.size());
    const double cur =
        -store_cost(x_all[j], others, prices, specs[j].efficiency);
    out.profits.push_back(cur);
    const auto best = optimize_single(specs[j], prices, others, opts.solve);
    out.br_residual = std::max(out.br_residual, -best.objective - cur);
  }
  std::vector<double> eff(specs.size(), eps);
  out.clearing = clearing_prices(prices, out.schedules, eff);
  return out;
}

EquilibriumResult nash_best_response(std::span<const StoreSpec> specs,
                                     std::span<const PriceFunction> prices,
                                     std::span<const Schedule> init,
                                     const EquilibriumOptions& opts) {
  return run_cyclic(specs, prices, init, CostKind::kOwn, StopRule::kProfit,
                    opts);
}

double potential_value(std::span<const StoreSpec> specs,
                       std::span<const PriceFunction> prices,
                       std::span<const Schedule> schedules) {
  const std::size_t T = prices.size();
  for (const auto& pf : prices)
    if (!pf.is_linear())
      throw DomainError("potential_value: non-linear price present");
  if (schedules.size() != specs.size())
    throw DomainError("potential_value: schedule/spec counts disagree");
  double total = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    double sum_h = 0.0, sum_h2 = 0.0;
    for (std::size_t j = 0; j < specs.size(); ++j) {
      const double x =
          schedules[j].levels[t + 1] - schedules[j].levels[t];
      const double h = eff_map(specs[j].efficiency, x);
      sum_h += h;
      sum_h2 += h * h;
    }
    total += prices[t].pbar() * sum_h +
             0.5 * prices[t].pslope() * (sum_h2 + sum_h * sum_h);
  }
  return total;
}

EquilibriumResult nash_linear(std::span<const StoreSpec> specs,
                              std::span<const PriceFunction> prices,
                              const EquilibriumOptions& opts) {
  bool flat = false;
  for (const auto& pf : prices) {
    if (!pf.is_linear())
      throw DomainError("nash_linear: non-linear price present");
    if (pf.pslope() <= 0.0) flat = true;
  }
  if (flat) {
    auto out = nash_best_response(specs, prices, {}, opts);
    out.warning = "zero price slope: equilibrium may be non-unique; "
                  "best-response fallback used" +
                  (out.warning.empty() ? "" : "; " + out.warning);
    return out;
  }
  return run_cyclic(specs, prices, {}, CostKind::kOwn, StopRule::kPotential,
                    opts);
}

SymmetricNashResult unconstrained_symmetric_nash(
    std::size_t n, std::span<const PriceFunction> prices, double eps,
    double s0) {
  if (n == 0) throw DomainError("unconstrained_symmetric_nash: n = 0");
  if (!(eps > 0.0 && eps <= 1.0))
    throw DomainError("unconstrained_symmetric_nash: bad efficiency");
  const std::size_t T = prices.size();
  std::vector<double> pb(T), ps(T);
  for (std::size_t t = 0; t < T; ++t) {
    if (!prices[t].is_linear() || prices[t].pslope() <= 0.0)
      throw DomainError(
          "unconstrained_symmetric_nash: needs strictly increasing linear "
          "prices");
    pb[t] = prices[t].pbar();
    ps[t] = prices[t].pslope();
  }
  const double denom = static_cast<double>(n + 1);
  auto flow_at = [&](double lambda, std::size_t t) {
    if (pb[t] < lambda) return (lambda - pb[t]) / (denom * ps[t]);
    if (eps * pb[t] > lambda)
      return (lambda - eps * pb[t]) / (denom * eps * eps * ps[t]);
    return 0.0;
  };
  auto total_flow = [&](double lambda) {
    double s = 0.0;
    for (std::size_t t = 0; t < T; ++t) s += flow_at(lambda, t);
    return s;
  };
  double lo = eps * *std::min_element(pb.begin(), pb.end()) - 1.0;
  double hi = *std::max_element(pb.begin(), pb.end()) + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (total_flow(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  SymmetricNashResult out;
  out.n = n;
  out.lambda_star = lambda;
  out.per_store_flows.resize(T);
  out.per_store_profit = 0.0;
  double level = s0;
  for (std::size_t t = 0; t < T; ++t) {
    const double x = flow_at(lambda, t);
    out.per_store_flows[t] = x;
    const double h = eff_map(eps, x);
    out.per_store_profit += ps[t] * h * h;
    level += x;
    if (t + 1 < T && level <= 0.0)
      throw DomainError(
          "unconstrained_symmetric_nash: store empties at period " +
          std::to_string(t + 1) + "; raise s0");
  }
  return out;
}

ScalingReport scaling_check(const StoreSpec& base,
                            std::span<const PriceFunction> prices,
                            std::span<const std::size_t> n_list,
                            const EquilibriumOptions& opts) {
  std::vector<StoreSpec> one{base};
  const auto single = nash_linear(one, prices, opts);
  const auto x1 = flows(single.schedules[0]);
  ScalingReport rep;
  for (std::size_t n : n_list) {
    const double f = 2.0 / static_cast<double>(n + 1);
    StoreSpec s = base;
    s.capacity *= f;
    s.rate_in *= f;
    s.rate_out *= f;
    s.level_start *= f;
    s.level_end *= f;
    std::vector<StoreSpec> specs(n, s);
    const auto res = nash_linear(specs, prices, opts);
    double disc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto xn = flows(res.schedules[j]);
      for (std::size_t t = 0; t < xn.size(); ++t) {
        const double hn = eff_map(s.efficiency, xn[t]);
        const double h1 = eff_map(base.efficiency, x1[t]);
        disc = std::max(disc, std::abs(hn - f * h1));
      }
    }
    rep.n.push_back(n);
    rep.discrepancy.push_back(disc);
  }
  return rep;
}

OrderingCheck ordering_check(const EquilibriumResult& result,
                             std::span<const StoreSpec> specs) {
  OrderingCheck out{true, true, ""};
  const std::size_t n = specs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(specs[i].rate_in - specs[0].rate_in) > 1e-12 ||
        std::abs(specs[i].rate_out - specs[0].rate_out) > 1e-12 ||
        std::abs(specs[i].efficiency - specs[0].efficiency) > 1e-12) {
      out.applicable = false;
      return out;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (specs[i].capacity > specs[j].capacity) continue;
      if (specs[i].level_start > specs[j].level_start + 1e-12 ||
          specs[i].level_end > specs[j].level_end + 1e-12) {
        out.applicable = false;
        return out;
      }
    }
  for (std::size_t i = 0; i < n && out.ordered; ++i)
    for (std::size_t j = 0; j < n && out.ordered; ++j) {
      if (specs[i].capacity > specs[j].capacity) continue;
      if (i == j) continue;
      const auto& si = result.schedules[i].levels;
      const auto& sj = result.schedules[j].levels;
      for (std::size_t t = 0; t < si.size(); ++t)
        if (si[t] > sj[t] + 1e-8) {
          out.ordered = false;
          out.first_violation = "store " + std::to_string(i) + " above store " +
                                std::to_string(j) + " at t = " +
                                std::to_string(t);
          break;
        }
    }
  return out;
}

}  // namespace storemkt
