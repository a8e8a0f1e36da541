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

#include "storemkt/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "storemkt/data.hpp"

namespace storemkt {

namespace {
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace

std::string RunReport::to_csv() const {
  std::ostringstream out;
  out << "# command=" << command << "\n";
  for (const auto& [k, v] : scenario_echo) out << "# " << k << "=" << v << "\n";
  for (const auto& [k, v] : summary) out << "# " << k << "=" << num(v) << "\n";
  out << "# ok=" << (ok ? 1 : 0) << "\n";
  out << "t";
  if (!timestamps.empty()) out << ",timestamp";
  out << ",pbar," << value_column;
  for (std::size_t j = 0; j < store_levels.size(); ++j)
    out << ",level_" << (j + 1) << ",flow_" << (j + 1);
  out << "\n";
  for (std::size_t t = 0; t < pbar.size(); ++t) {
    out << (row_labels.empty() ? t + 1 : row_labels[t]);
    if (!timestamps.empty()) out << ',' << format_timestamp(timestamps[t]);
    out << ',' << num(pbar[t]) << ',' << num(clearing[t]);
    for (std::size_t j = 0; j < store_levels.size(); ++j)
      out << ',' << num(store_levels[j][t]) << ',' << num(store_flows[j][t]);
    out << "\n";
  }
  return out.str();
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : scenario_echo) echo[k] = v;
  j["scenario"] = std::move(echo);
  nlohmann::ordered_json summ = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) summ[k] = v;
  j["summary"] = std::move(summ);
  j["ok"] = ok;
  nlohmann::ordered_json periods = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < pbar.size(); ++t) {
    nlohmann::ordered_json row;
    row["t"] = row_labels.empty() ? t + 1 : row_labels[t];
    if (!timestamps.empty())
      row["timestamp"] = format_timestamp(timestamps[t]);
    row["pbar"] = pbar[t];
    row[value_column] = clearing[t];
    nlohmann::ordered_json stores = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < store_levels.size(); ++s) {
      nlohmann::ordered_json cell;
      cell["level"] = store_levels[s][t];
      cell["flow"] = store_flows[s][t];
      stores.push_back(std::move(cell));
    }
    row["stores"] = std::move(stores);
    periods.push_back(std::move(row));
  }
  j["periods"] = std::move(periods);
  return j.dump(2) + "\n";
}

}  // namespace storemkt
