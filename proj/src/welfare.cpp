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

#include "storemkt/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "storemkt/errors.hpp"

namespace storemkt {

DemandModel DemandModel::inelastic(double d_star) {
  if (d_star < 0.0) throw DomainError("DemandModel: negative demand");
  return DemandModel(Kind::kInelastic, Polyline::linear(d_star, 0.0), d_star,
                     0.0);
}

DemandModel DemandModel::linear(double a, double b) {
  if (!(b > 0.0)) throw DomainError("DemandModel: linear form needs b > 0");
  if (a < 0.0) throw DomainError("DemandModel: negative intercept");
  // Truncated at d = 0 above the choke price a/b.
  auto curve = Polyline::points({{a / b, 0.0}}, -b, 0.0);
  return DemandModel(Kind::kLinear, std::move(curve), a, b);
}

DemandModel DemandModel::tabulated(std::vector<std::pair<double, double>> pts) {
  auto curve = Polyline::points(std::move(pts), 0.0, 0.0);
  if (!curve.nonincreasing(1e-12))
    throw DomainError("DemandModel: tabulated demand must be nonincreasing");
  for (double q : curve.ys())
    if (q < 0.0) throw DomainError("DemandModel: negative demand breakpoint");
  return DemandModel(Kind::kTabulated, std::move(curve), 0.0, 0.0);
}

double DemandModel::quantity(double p) const {
  return std::max(0.0, curve_(p));
}

double DemandModel::integral(double p0, double p1) const {
  if (kind_ == Kind::kInelastic) return a_ * (p1 - p0);
  return curve_.integral(p0, p1);
}

double DemandModel::d_star() const {
  if (kind_ != Kind::kInelastic)
    throw DomainError("d_star: demand is not inelastic");
  return a_;
}

double DemandModel::lin_a() const {
  if (kind_ != Kind::kLinear) throw DomainError("lin_a: demand is not linear");
  return a_;
}

double DemandModel::lin_b() const {
  if (kind_ != Kind::kLinear) throw DomainError("lin_b: demand is not linear");
  return b_;
}

std::vector<double> DemandModel::price_breakpoints() const {
  if (kind_ == Kind::kInelastic) return {};
  return curve_.xs();
}

GeneratorModel GeneratorModel::linear(double mc0, double mc_slope,
                                      double capacity) {
  return GeneratorModel{Polyline::linear(mc0, mc_slope), capacity};
}

void GeneratorModel::validate() const {
  if (!(capacity > 0.0)) throw DomainError("GeneratorModel: capacity <= 0");
  if (!marginal_cost.nondecreasing(1e-12))
    throw DomainError("GeneratorModel: marginal cost must be nondecreasing");
}

double surplus_delta_exact(std::span<const DemandModel> demand,
                           std::span<const double> prices_with,
                           std::span<const double> prices_without) {
  if (prices_with.size() != prices_without.size() ||
      demand.size() != prices_with.size())
    throw DomainError("surplus_delta_exact: length mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < demand.size(); ++t)
    total += demand[t].integral(prices_with[t], prices_without[t]);
  return total;
}

double surplus_delta_approx(std::span<const double> flows_marketside,
                            std::span<const double> slopes,
                            std::span<const double> base_demand) {
  if (flows_marketside.size() != slopes.size() ||
      slopes.size() != base_demand.size())
    throw DomainError("surplus_delta_approx: length mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < slopes.size(); ++t)
    total -= flows_marketside[t] * slopes[t] * base_demand[t];
  return total;
}

namespace {

// Marginal-curve assembly shared by the adapters: sample an exact formula at
// its true breakpoints plus probe ends, integrate, compose with h. The
// convexity rejection comes from from_marginal.
PiecewiseQuadratic integrate_marginal(
    const std::vector<std::pair<double, double>>& pts, double eps,
    const std::string& who) {
  try {
    return PiecewiseQuadratic::from_marginal(Polyline::points(pts))
        .compose_h(eps);
  } catch (const NonConvexError& e) {
    throw NonConvexError(who + ": period cost is not convex (" + e.what() +
                         ")");
  }
}

std::vector<double> sorted_cuts(std::set<double> cuts, double zlo,
                                double zhi) {
  cuts.insert(zlo - 1.0);
  cuts.insert(zhi + 1.0);
  std::vector<double> out;
  for (double c : cuts)
    if (c >= zlo - 1.0 && c <= zhi + 1.0) out.push_back(c);
  return out;
}

}  // namespace

std::vector<PiecewiseQuadratic> consumer_owned_costs(
    const StoreSpec& spec, std::span<const PriceFunction> prices,
    std::span<const DemandModel> demand) {
  spec.validate();
  if (demand.size() != prices.size())
    throw DomainError("consumer_owned_costs: demand models missing");
  const double zlo = -spec.efficiency * spec.rate_out;
  const double zhi = spec.rate_in;
  std::vector<PiecewiseQuadratic> out;
  for (std::size_t t = 0; t < prices.size(); ++t) {
    if (!prices[t].is_linear())
      throw DomainError(
          "consumer_owned_costs: linear price functions required");
    const double pb = prices[t].pbar();
    const double ps = prices[t].pslope();
    // d/dz of [ z p(z) + int_{pbar}^{p(z)} d ] = p(z) + z p' + d(p(z)) p'.
    auto marginal = [&](double z) {
      const double p = pb + ps * z;
      return p + ps * z + ps * demand[t].quantity(p);
    };
    // Demand kinks map through the price line to z = (p_break - pbar)/ps.
    std::set<double> cuts;
    if (ps > 0.0)
      for (double pbreak : demand[t].price_breakpoints())
        cuts.insert((pbreak - pb) / ps);
    std::vector<std::pair<double, double>> pts;
    for (double z : sorted_cuts(cuts, zlo, zhi))
      pts.emplace_back(z, marginal(z));
    out.push_back(integrate_marginal(pts, spec.efficiency,
                                     "consumer_owned_costs"));
  }
  return out;
}

namespace {

// Monopoly or planner clearing for one period: the seller chooses market
// sales q given store draw z, against a marginal benefit curve mb(q)
// (marginal revenue for the generator owner, inverse demand for the
// planner). Returns mc(q* + z), the marginal cost of the store's draw.
double cleared_marginal(const Polyline& mb, const Polyline& mc, double cap,
                        double q_max, double z, const std::string& who) {
  const double qlo = std::max(0.0, -z);
  const double qhi = std::min(q_max, cap - z);
  if (qhi < qlo)
    throw NoClearingError(who + ": no feasible market quantity at store draw " +
                          std::to_string(z));
  auto g = [&](double q) { return mb(q) - mc(q + z); };
  double lo = qlo, hi = qhi;
  if (g(qlo) <= 0.0) return mc(qlo + z);
  if (g(qhi) >= 0.0) return mc(qhi + z);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return mc(0.5 * (lo + hi) + z);
}

std::vector<PiecewiseQuadratic> ownership_costs(
    const StoreSpec& spec, std::span<const GeneratorModel> gen,
    std::span<const DemandModel> demand, bool planner,
    const std::string& who) {
  spec.validate();
  if (gen.size() != demand.size())
    throw DomainError(who + ": generator/demand model counts disagree");
  const double zlo = -spec.efficiency * spec.rate_out;
  const double zhi = spec.rate_in;
  std::vector<PiecewiseQuadratic> out;
  for (std::size_t t = 0; t < gen.size(); ++t) {
    gen[t].validate();
    const Polyline& mc = gen[t].marginal_cost;
    std::vector<std::pair<double, double>> pts;
    if (demand[t].is_inelastic()) {
      // Output is pinned at demand; cost of the draw is mc(d* + z).
      const double d = demand[t].d_star();
      if (d + zhi > gen[t].capacity + 1e-12)
        throw NoClearingError(who + ": demand plus store draw exceeds "
                                    "generator capacity at period " +
                              std::to_string(t + 1));
      if (d + zlo < -1e-12)
        throw NoClearingError(who + ": store draw exceeds demand at period " +
                              std::to_string(t + 1));
      std::set<double> cuts;
      for (double qb : mc.xs()) cuts.insert(qb - d);
      for (double z : sorted_cuts(cuts, zlo, zhi))
        pts.emplace_back(z, mc(d + z));
    } else if (demand[t].is_linear()) {
      const double a = demand[t].lin_a();
      const double b = demand[t].lin_b();
      // Marginal benefit of sales: inverse demand for the planner, marginal
      // revenue (a - 2q)/b for the profit-seeking generator.
      const Polyline mb = planner ? Polyline::linear(a / b, -1.0 / b)
                                  : Polyline::linear(a / b, -2.0 / b);
      const double q_max = planner ? a : 0.5 * a;
      // mc(q*(z) + z) is piecewise linear in z; sample densely enough that
      // every corner and curve breakpoint is bracketed tightly.
      const int samples = 512;
      for (int i = 0; i <= samples; ++i) {
        const double z = (zlo - 1.0) + (zhi - zlo + 2.0) * i / samples;
        pts.emplace_back(
            z, cleared_marginal(mb, mc, gen[t].capacity, q_max, z, who));
      }
    } else {
      throw DomainError(who +
                        ": tabulated demand is not supported in this adapter");
    }
    out.push_back(integrate_marginal(pts, spec.efficiency, who));
  }
  return out;
}

}  // namespace

std::vector<PiecewiseQuadratic> generator_owned_costs(
    const StoreSpec& spec, std::span<const GeneratorModel> gen,
    std::span<const DemandModel> demand) {
  return ownership_costs(spec, gen, demand, false, "generator_owned_costs");
}

std::vector<PiecewiseQuadratic> social_costs(
    const StoreSpec& spec, std::span<const GeneratorModel> gen,
    std::span<const DemandModel> demand) {
  return ownership_costs(spec, gen, demand, true, "social_costs");
}

}  // namespace storemkt
