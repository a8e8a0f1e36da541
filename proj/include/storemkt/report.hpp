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

#ifndef STOREMKT_REPORT_HPP_
#define STOREMKT_REPORT_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace storemkt {

// Tidy per-period table plus a flat summary, serializable as CSV (summary as
// leading '#' comment lines) or JSON. Field order is fixed, so identical
// runs serialize byte-identically.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> scenario_echo;
  std::vector<std::pair<std::string, double>> summary;

  // Per-period table; columns beyond the fixed four come in store pairs.
  // When row_labels is set the table covers that subset of periods.
  std::vector<std::size_t> row_labels;
  std::vector<std::int64_t> timestamps;  // may be empty (no series context)
  std::vector<double> pbar;
  std::string value_column = "clearing_price";
  std::vector<double> clearing;
  std::vector<std::vector<double>> store_levels;  // per store, size T (S_t)
  std::vector<std::vector<double>> store_flows;   // per store, size T (x_t)

  bool ok = true;

  std::string to_csv() const;
  std::string to_json() const;
};

}  // namespace storemkt

#endif  // STOREMKT_REPORT_HPP_
