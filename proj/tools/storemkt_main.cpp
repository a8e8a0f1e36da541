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

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "storemkt/cli.hpp"

namespace {

using storemkt::cli::CmdResult;
using storemkt::cli::CommonOpts;

void add_common(CLI::App* sub, CommonOpts& c, bool need_config) {
  if (need_config)
    sub->add_option("--config", c.config, "scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
  sub->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "write the report here instead of stdout");
  sub->add_option("--tol", c.tol, "residual / stopping tolerance")
      ->each([&c](const std::string&) { c.tol_given = true; });
  sub->add_option("--seed", c.seed, "override the scenario seed")
      ->each([&c](const std::string&) { c.seed_given = true; });
}

int emit(const CmdResult& res, const CommonOpts& c) {
  const std::string body = res.body(c.format);
  if (c.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      std::cerr << "cannot write " << c.out << "\n";
      return 2;
    }
    f << body;
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "storemkt: optimal schedules, competition, and welfare accounting for "
      "price-making energy stores"};
  app.require_subcommand(1);

  CommonOpts c_opt, c_nash, c_coop, c_sur, c_sen, c_clr, c_syn;
  storemkt::cli::SensitivityOpts sen;
  storemkt::cli::SynthOpts syn;

  auto* s_opt = app.add_subcommand(
      "optimize", "single-store optimal dispatch with its certificate");
  add_common(s_opt, c_opt, true);

  auto* s_nash = app.add_subcommand(
      "nash", "competitive equilibrium of the configured fleet");
  add_common(s_nash, c_nash, true);

  auto* s_coop =
      app.add_subcommand("coop", "joint-cost optimum of the fleet");
  add_common(s_coop, c_coop, true);

  auto* s_sur = app.add_subcommand(
      "surplus", "consumer-surplus change caused by the stores");
  add_common(s_sur, c_sur, true);

  auto* s_sen = app.add_subcommand(
      "sensitivity", "re-solve with one constraint perturbed at one time");
  add_common(s_sen, c_sen, true);
  s_sen->add_option("--t0", sen.t0, "period of the perturbation")->required();
  s_sen->add_option("--delta", sen.delta, "perturbation size")->required();
  s_sen->add_option("--target", sen.target, "capacity|rate_in|rate_out")
      ->required();

  auto* s_clr = app.add_subcommand(
      "clearing2p", "two-period supply-function auction clearing");
  add_common(s_clr, c_clr, true);

  auto* s_syn = app.add_subcommand(
      "synth", "generate a synthetic half-hourly price CSV");
  add_common(s_syn, c_syn, false);
  s_syn->add_option("--days", syn.days, "days to generate");
  s_syn->add_option("--out-csv", syn.out_csv, "price CSV to write")
      ->required();
  s_syn->add_option("--base", syn.params.base);
  s_syn->add_option("--day-amp", syn.params.day_amp);
  s_syn->add_option("--week-amp", syn.params.week_amp);
  s_syn->add_option("--season-amp", syn.params.season_amp);
  s_syn->add_option("--noise-sd", syn.params.noise_sd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (s_opt->parsed()) return emit(storemkt::cli::cmd_optimize(c_opt), c_opt);
    if (s_nash->parsed()) return emit(storemkt::cli::cmd_nash(c_nash), c_nash);
    if (s_coop->parsed()) return emit(storemkt::cli::cmd_coop(c_coop), c_coop);
    if (s_sur->parsed()) return emit(storemkt::cli::cmd_surplus(c_sur), c_sur);
    if (s_sen->parsed())
      return emit(storemkt::cli::cmd_sensitivity(c_sen, sen), c_sen);
    if (s_clr->parsed())
      return emit(storemkt::cli::cmd_clearing2p(c_clr), c_clr);
    if (s_syn->parsed()) return emit(storemkt::cli::cmd_synth(c_syn, syn), c_syn);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
