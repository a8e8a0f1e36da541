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

#ifndef STOREMKT_CLI_HPP_
#define STOREMKT_CLI_HPP_

#include <cstdint>
#include <string>

#include "storemkt/data.hpp"
#include "storemkt/report.hpp"

namespace storemkt::cli {

struct CommonOpts {
  std::string config;
  std::string format = "json";  // csv | json
  std::string out;              // empty writes to stdout
  double tol = 1e-8;
  bool tol_given = false;
  std::uint64_t seed = 0;
  bool seed_given = false;  // overrides a synthetic scenario's seed
};

// Exit code 0 means every residual and convergence check passed; 1 means a
// check failed and the report is partial; config and input errors throw.
struct CmdResult {
  int exit_code;
  RunReport report;

  std::string body(const std::string& format) const {
    return format == "csv" ? report.to_csv() : report.to_json();
  }
};

CmdResult cmd_optimize(const CommonOpts& opts);
CmdResult cmd_nash(const CommonOpts& opts);
CmdResult cmd_coop(const CommonOpts& opts);
CmdResult cmd_surplus(const CommonOpts& opts);

struct SensitivityOpts {
  std::size_t t0 = 1;
  double delta = 0.0;
  std::string target = "capacity";  // capacity | rate_in | rate_out
};
CmdResult cmd_sensitivity(const CommonOpts& opts, const SensitivityOpts& s);

CmdResult cmd_clearing2p(const CommonOpts& opts);

struct SynthOpts {
  int days = 7;
  SynthParams params;
  std::string out_csv;  // target price file
};
CmdResult cmd_synth(const CommonOpts& opts, const SynthOpts& s);

// Applies a --seed override to a loaded scenario.
Scenario load_scenario_for(const CommonOpts& opts);

}  // namespace storemkt::cli

#endif  // STOREMKT_CLI_HPP_
