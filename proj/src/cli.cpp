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

#include "storemkt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "storemkt/dispatch.hpp"
#include "storemkt/equilibrium.hpp"
#include "storemkt/errors.hpp"
#include "storemkt/welfare.hpp"

namespace storemkt::cli {

namespace {

constexpr double kBindTol = 1e-6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void echo_scenario(RunReport& rep, const Scenario& sc) {
  rep.scenario_echo.emplace_back("periods", std::to_string(sc.horizon()));
  rep.scenario_echo.emplace_back("lambda", fmt(sc.lambda));
  rep.scenario_echo.emplace_back("n_stores", std::to_string(sc.specs.size()));
  if (sc.synthetic) {
    rep.scenario_echo.emplace_back("seed", std::to_string(sc.seed));
    rep.scenario_echo.emplace_back("synth_days",
                                   std::to_string(sc.synth_days));
  }
  for (std::size_t j = 0; j < sc.specs.size(); ++j) {
    const auto& s = sc.specs[j];
    std::ostringstream os;
    os << fmt(s.capacity) << ',' << fmt(s.rate_in) << ',' << fmt(s.rate_out)
       << ',' << fmt(s.efficiency) << ',' << fmt(s.level_start) << ','
       << fmt(s.level_end);
    rep.scenario_echo.emplace_back("store_" + std::to_string(j + 1),
                                   os.str());
  }
}

void fill_table(RunReport& rep, const Scenario& sc,
                const std::vector<Schedule>& schedules) {
  const std::size_t T = sc.horizon();
  rep.timestamps = sc.series.timestamps;
  rep.pbar = sc.series.pbar;
  std::vector<double> eff;
  for (const auto& s : sc.specs) eff.push_back(s.efficiency);
  rep.clearing = clearing_prices(sc.price_functions(), schedules, eff);
  for (const auto& s : schedules) {
    std::vector<double> lv(T), fl(T);
    for (std::size_t t = 0; t < T; ++t) {
      lv[t] = s.levels[t + 1];
      fl[t] = s.levels[t + 1] - s.levels[t];
    }
    rep.store_levels.push_back(std::move(lv));
    rep.store_flows.push_back(std::move(fl));
  }
}

void binding_counts(const StoreSpec& spec, const Schedule& s, int& n_rate,
                    int& n_cap) {
  n_rate = n_cap = 0;
  for (std::size_t t = 1; t < s.levels.size(); ++t) {
    const double x = s.levels[t] - s.levels[t - 1];
    if (x >= spec.rate_in - kBindTol || x <= -spec.rate_out + kBindTol)
      ++n_rate;
    if (t + 1 < s.levels.size() && s.levels[t] >= spec.capacity - kBindTol)
      ++n_cap;
  }
}

}  // namespace

Scenario load_scenario_for(const CommonOpts& opts) {
  Scenario sc = load_scenario(opts.config);
  if (opts.seed_given && sc.synthetic) {
    sc.seed = opts.seed;
    sc.series = synth_prices(sc.seed, sc.synth_days, sc.synth);
  }
  return sc;
}

CmdResult cmd_optimize(const CommonOpts& opts) {
  const Scenario sc = load_scenario_for(opts);
  if (sc.specs.size() != 1)
    throw ParseError("optimize: config must define exactly one store "
                     "(n_stores = " +
                     std::to_string(sc.specs.size()) + ")");
  const auto prices = sc.price_functions();
  const auto sol = optimize_single(sc.specs[0], prices);
  RunReport rep;
  rep.command = "optimize";
  echo_scenario(rep, sc);
  fill_table(rep, sc, {sol.schedule});
  int n_rate, n_cap;
  binding_counts(sc.specs[0], sol.schedule, n_rate, n_cap);
  rep.summary.emplace_back("objective", sol.objective);
  rep.summary.emplace_back("profit", -sol.objective);
  rep.summary.emplace_back("kkt_residual", sol.kkt_residual);
  rep.summary.emplace_back("unique", sol.unique ? 1.0 : 0.0);
  rep.summary.emplace_back("n_binding_rate", n_rate);
  rep.summary.emplace_back("n_binding_capacity", n_cap);
  rep.ok = sol.kkt_residual <= opts.tol;
  return {rep.ok ? 0 : 1, std::move(rep)};
}

namespace {

CmdResult equilibrium_command(const CommonOpts& opts, bool coop) {
  const Scenario sc = load_scenario_for(opts);
  const auto prices = sc.price_functions();
  EquilibriumOptions eopts;
  if (opts.tol_given) eopts.tol = opts.tol;
  const EquilibriumResult res =
      coop ? cooperative(sc.specs, prices, eopts)
           : nash_linear(sc.specs, prices, eopts);
  RunReport rep;
  rep.command = coop ? "coop" : "nash";
  echo_scenario(rep, sc);
  fill_table(rep, sc, res.schedules);
  double total = 0.0;
  for (std::size_t j = 0; j < res.profits.size(); ++j) {
    rep.summary.emplace_back("profit_" + std::to_string(j + 1),
                             res.profits[j]);
    total += res.profits[j];
  }
  rep.summary.emplace_back("total_profit", total);
  rep.summary.emplace_back("br_residual", res.br_residual);
  rep.summary.emplace_back("iterations", static_cast<double>(res.iterations));
  rep.summary.emplace_back("converged", res.converged ? 1.0 : 0.0);
  if (!res.warning.empty())
    rep.scenario_echo.emplace_back("warning", res.warning);
  rep.ok = res.converged;
  return {rep.ok ? 0 : 1, std::move(rep)};
}

}  // namespace

CmdResult cmd_nash(const CommonOpts& opts) {
  return equilibrium_command(opts, false);
}

CmdResult cmd_coop(const CommonOpts& opts) {
  return equilibrium_command(opts, true);
}

CmdResult cmd_surplus(const CommonOpts& opts) {
  const Scenario sc = load_scenario_for(opts);
  if (sc.demand.empty())
    throw ParseError("surplus: config needs demand_form (and its fields)");
  const auto prices = sc.price_functions();
  std::vector<Schedule> schedules;
  if (sc.specs.size() == 1) {
    schedules.push_back(optimize_single(sc.specs[0], prices).schedule);
  } else {
    schedules = nash_linear(sc.specs, prices).schedules;
  }
  const std::size_t T = sc.horizon();
  std::vector<double> agg_h(T, 0.0), slopes(T), base_d(T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < schedules.size(); ++j)
      agg_h[t] += eff_map(sc.specs[j].efficiency,
                          schedules[j].levels[t + 1] - schedules[j].levels[t]);
    slopes[t] = sc.lambda * sc.series.pbar[t];
    base_d[t] = sc.demand[t].quantity(sc.series.pbar[t]);
  }
  std::vector<double> eff;
  for (const auto& s : sc.specs) eff.push_back(s.efficiency);
  const auto with = clearing_prices(prices, schedules, eff);
  const double exact = surplus_delta_exact(sc.demand, with, sc.series.pbar);
  const double approx = surplus_delta_approx(agg_h, slopes, base_d);
  // Error contraction under flow halving, the second-order check.
  auto err_at = [&](double scale) {
    std::vector<double> h(T), w(T);
    for (std::size_t t = 0; t < T; ++t) {
      h[t] = scale * agg_h[t];
      w[t] = sc.series.pbar[t] + slopes[t] * h[t];
    }
    return std::abs(surplus_delta_exact(sc.demand, w, sc.series.pbar) -
                    surplus_delta_approx(h, slopes, base_d));
  };
  RunReport rep;
  rep.command = "surplus";
  echo_scenario(rep, sc);
  fill_table(rep, sc, schedules);
  rep.summary.emplace_back("surplus_delta_exact", exact);
  rep.summary.emplace_back("surplus_delta_approx", approx);
  rep.summary.emplace_back("approx_abs_error", std::abs(exact - approx));
  const double e_half = err_at(0.5);
  rep.summary.emplace_back("halving_error_ratio",
                           e_half > 0.0 ? err_at(1.0) / e_half : 0.0);
  rep.ok = true;
  return {0, std::move(rep)};
}

CmdResult cmd_sensitivity(const CommonOpts& opts, const SensitivityOpts& s) {
  const Scenario sc = load_scenario_for(opts);
  if (sc.specs.size() != 1)
    throw ParseError("sensitivity: config must define exactly one store");
  const auto prices = sc.price_functions();
  SensitivityReport rep_s;
  if (s.target == "capacity")
    rep_s = sensitivity_capacity(sc.specs[0], prices, {}, s.t0, s.delta);
  else if (s.target == "rate_in")
    rep_s = sensitivity_rate(sc.specs[0], prices, {}, s.t0, RateSide::kIn,
                             s.delta);
  else if (s.target == "rate_out")
    rep_s = sensitivity_rate(sc.specs[0], prices, {}, s.t0, RateSide::kOut,
                             s.delta);
  else
    throw ParseError("sensitivity: target must be capacity|rate_in|rate_out");

  RunReport rep;
  rep.command = "sensitivity";
  echo_scenario(rep, sc);
  rep.scenario_echo.emplace_back("target", s.target);
  // Table covers only the changed interval (t1, t2].
  rep.value_column = "flow_delta";
  if (rep_s.changed) {
    for (std::size_t t = rep_s.t1 + 1; t <= rep_s.t2; ++t) {
      rep.row_labels.push_back(t);
      rep.timestamps.push_back(sc.series.timestamps[t - 1]);
      rep.pbar.push_back(sc.series.pbar[t - 1]);
      rep.clearing.push_back(rep_s.flow_deltas[t - 1]);
    }
    rep.store_levels.clear();
    rep.store_flows.clear();
  }
  rep.summary.emplace_back("t0", static_cast<double>(rep_s.t0));
  rep.summary.emplace_back("delta", rep_s.delta);
  rep.summary.emplace_back("changed", rep_s.changed ? 1.0 : 0.0);
  rep.summary.emplace_back("t1", static_cast<double>(rep_s.t1));
  rep.summary.emplace_back("t2", static_cast<double>(rep_s.t2));
  rep.summary.emplace_back("objective_delta", rep_s.objective_delta);
  rep.ok = true;
  return {0, std::move(rep)};
}

namespace {

// "linear,<intercept>,<slope>" or "table,p:v;p:v;..."
Polyline parse_curve(const std::string& spec, const std::string& key) {
  std::stringstream ss(spec);
  std::string kind;
  if (!std::getline(ss, kind, ','))
    throw ParseError("clearing2p: empty curve spec for " + key);
  if (kind == "linear") {
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw ParseError("clearing2p: " + key + " wants linear,<a>,<b>");
    return Polyline::linear(std::stod(a), std::stod(b));
  }
  if (kind == "table") {
    std::string rest;
    std::getline(ss, rest);
    std::vector<std::pair<double, double>> pts;
    std::stringstream ps(rest);
    std::string item;
    while (std::getline(ps, item, ';')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ParseError("clearing2p: " + key + " table wants p:v;p:v");
      pts.emplace_back(std::stod(item.substr(0, colon)),
                       std::stod(item.substr(colon + 1)));
    }
    return Polyline::points(std::move(pts));
  }
  throw ParseError("clearing2p: " + key + " kind must be linear|table");
}

std::string config_value(const std::string& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string v) {
      const auto b = v.find_first_not_of(" \t\r");
      const auto e = v.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    if (trim(line.substr(0, eq)) == key) return trim(line.substr(eq + 1));
  }
  return {};
}

}  // namespace

CmdResult cmd_clearing2p(const CommonOpts& opts) {
  const std::string r1s = config_value(opts.config, "clearing_r1");
  const std::string r2s = config_value(opts.config, "clearing_r2");
  const std::string ss = config_value(opts.config, "clearing_supply");
  if (r1s.empty() || r2s.empty() || ss.empty())
    throw ParseError(
        "clearing2p: config needs clearing_r1, clearing_r2, clearing_supply");
  const std::string lo_s = config_value(opts.config, "clearing_price_lo");
  const std::string hi_s = config_value(opts.config, "clearing_price_hi");
  const double plo = lo_s.empty() ? 0.0 : std::stod(lo_s);
  const double phi = hi_s.empty() ? 100.0 : std::stod(hi_s);

  auto residual_of = [&](const std::string& spec, const std::string& key) {
    const Polyline c = parse_curve(spec, key);
    if (c.xs().size() < 2)
      return ResidualSupply::linear(c(0.0), c.slope_at(0.0), plo, phi);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < c.xs().size(); ++i)
      pts.emplace_back(c.xs()[i], c.ys()[i]);
    return ResidualSupply::tabulated(std::move(pts));
  };
  const auto r1 = residual_of(r1s, "clearing_r1");
  const auto r2 = residual_of(r2s, "clearing_r2");
  const Polyline supply = parse_curve(ss, "clearing_supply");

  const TwoPeriodClearing out = clear_two_period(r1, r2, supply);
  RunReport rep;
  rep.command = "clearing2p";
  rep.scenario_echo.emplace_back("clearing_r1", r1s);
  rep.scenario_echo.emplace_back("clearing_r2", r2s);
  rep.scenario_echo.emplace_back("clearing_supply", ss);
  rep.summary.emplace_back("p1", out.p1);
  rep.summary.emplace_back("p2", out.p2);
  rep.summary.emplace_back("pdiff", out.pdiff);
  rep.summary.emplace_back("q", out.q);
  rep.ok = true;
  return {0, std::move(rep)};
}

CmdResult cmd_synth(const CommonOpts& opts, const SynthOpts& s) {
  if (s.out_csv.empty())
    throw ParseError("synth: --out-csv is required");
  const auto series = synth_prices(opts.seed, s.days, s.params);
  save_price_csv(series, s.out_csv);
  RunReport rep;
  rep.command = "synth";
  rep.scenario_echo.emplace_back("out_csv", s.out_csv);
  rep.scenario_echo.emplace_back("seed", std::to_string(opts.seed));
  double lo = series.pbar[0], hi = series.pbar[0], mean = 0.0;
  for (double v : series.pbar) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  rep.summary.emplace_back("periods", static_cast<double>(series.size()));
  rep.summary.emplace_back("min_price", lo);
  rep.summary.emplace_back("max_price", hi);
  rep.summary.emplace_back("mean_price", mean / series.size());
  rep.ok = true;
  return {0, std::move(rep)};
}

}  // namespace storemkt::cli
