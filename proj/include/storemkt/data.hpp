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

#ifndef STOREMKT_DATA_HPP_
#define STOREMKT_DATA_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "storemkt/market.hpp"
#include "storemkt/store.hpp"
#include "storemkt/welfare.hpp"

namespace storemkt {

// Half-hourly spot price series. Timestamps are minutes since the civil
// epoch 1970-01-01T00:00, spaced exactly 30 minutes apart.
struct PriceSeries {
  std::vector<std::int64_t> timestamps;
  std::vector<double> pbar;

  std::size_t size() const { return pbar.size(); }
  void validate() const;  // spacing, ordering, positivity
};

// Strict "YYYY-MM-DDTHH:MM" (minute precision).
std::int64_t parse_timestamp(const std::string& s);
std::string format_timestamp(std::int64_t minutes);

// CSV schema: header "timestamp,price_gbp_per_mwh", ISO-8601 minute
// timestamps, plain decimal prices. Gaps, nonpositive prices, and malformed
// rows raise ParseError with the offending line or timestamp.
PriceSeries load_price_csv(const std::string& path);
void save_price_csv(const PriceSeries& series, const std::string& path);

struct SynthParams {
  double base = 45.0;
  double day_amp = 12.0;
  double week_amp = 3.0;
  double season_amp = 5.0;
  double noise_sd = 2.0;
};

// Deterministic synthetic series: 48 periods per day, an evening-peaked
// daily sinusoid, a weekday/weekend modulation constant within each day, a
// winter-peaked seasonal trend, and seeded Gaussian noise (SplitMix64 +
// Box-Muller), floored at base/10. Requires
// base > day_amp + week_amp + season_amp + 5 * noise_sd.
PriceSeries synth_prices(std::uint64_t seed, int days,
                         const SynthParams& params);

// Linear price functions pbar_t (1 + lambda x), validated over flow_range.
std::vector<PriceFunction> to_price_functions(
    const PriceSeries& series, double lambda,
    std::pair<double, double> flow_range);

struct Scenario {
  PriceSeries series;
  double lambda = 0.0;
  std::vector<StoreSpec> specs;
  std::vector<DemandModel> demand;  // empty unless demand keys were given
  std::uint64_t seed = 0;
  // Set when the series came from synth keys, so a caller can reseed.
  bool synthetic = false;
  int synth_days = 0;
  SynthParams synth;

  std::size_t horizon() const { return series.size(); }
  // Aggregate market-side flow range implied by the specs.
  std::pair<double, double> flow_range() const;
  std::vector<PriceFunction> price_functions() const;
};

// Key/value scenario config; see README for the key list. Relative
// price_csv paths resolve against the config file's directory.
Scenario load_scenario(const std::string& path);

}  // namespace storemkt

#endif  // STOREMKT_DATA_HPP_
