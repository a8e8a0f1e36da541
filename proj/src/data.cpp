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

#include "storemkt/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "storemkt/errors.hpp"
#include "storemkt/rng.hpp"

namespace storemkt {

namespace {

constexpr std::int64_t kSpacingMinutes = 30;

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

unsigned days_in_month(int y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) return 29;
  return kDays[m - 1];
}

int to_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : -1; }

int parse_fixed(const std::string& s, std::size_t pos, int width) {
  int v = 0;
  for (int i = 0; i < width; ++i) {
    const int d = to_digit(s[pos + i]);
    if (d < 0) return -1;
    v = v * 10 + d;
  }
  return v;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& s) {
  // YYYY-MM-DDTHH:MM
  if (s.size() != 16 || s[4] != '-' || s[7] != '-' || s[10] != 'T' ||
      s[13] != ':')
    throw ParseError("bad timestamp '" + s + "': want YYYY-MM-DDTHH:MM");
  const int y = parse_fixed(s, 0, 4);
  const int mo = parse_fixed(s, 5, 2);
  const int d = parse_fixed(s, 8, 2);
  const int h = parse_fixed(s, 11, 2);
  const int mi = parse_fixed(s, 14, 2);
  if (y < 0 || mo < 1 || mo > 12 || d < 1 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || d > static_cast<int>(days_in_month(y, mo)))
    throw ParseError("bad timestamp '" + s + "': field out of range");
  return days_from_civil(y, mo, d) * 1440 + h * 60 + mi;
}

std::string format_timestamp(std::int64_t minutes) {
  std::int64_t days = minutes / 1440;
  std::int64_t rem = minutes % 1440;
  if (rem < 0) {
    rem += 1440;
    days -= 1;
  }
  int y;
  unsigned mo, d;
  civil_from_days(days, y, mo, d);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld", y, mo, d,
                static_cast<long long>(rem / 60),
                static_cast<long long>(rem % 60));
  return buf;
}

void PriceSeries::validate() const {
  if (timestamps.size() != pbar.size())
    throw DomainError("PriceSeries: timestamp/price lengths disagree");
  if (pbar.empty()) throw DomainError("PriceSeries: empty series");
  for (std::size_t i = 0; i < pbar.size(); ++i) {
    if (!(pbar[i] > 0.0))
      throw DomainError("PriceSeries: nonpositive price at " +
                        format_timestamp(timestamps[i]));
    if (i > 0 && timestamps[i] - timestamps[i - 1] != kSpacingMinutes)
      throw DomainError("PriceSeries: spacing break at " +
                        format_timestamp(timestamps[i]));
  }
}

PriceSeries load_price_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ":1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp,price_gbp_per_mwh")
    throw ParseError(path + ":1: bad header '" + line + "'");
  PriceSeries series;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": want exactly two fields");
    std::int64_t ts;
    try {
      ts = parse_timestamp(line.substr(0, comma));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    const std::string num = line.substr(comma + 1);
    char* end = nullptr;
    const double price = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0')
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": bad price '" + num + "'");
    if (!(price > 0.0))
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": nonpositive price at " + format_timestamp(ts));
    if (!series.timestamps.empty()) {
      const std::int64_t expect = series.timestamps.back() + kSpacingMinutes;
      if (ts != expect)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": gap, expected " + format_timestamp(expect) +
                         " but found " + format_timestamp(ts));
    }
    series.timestamps.push_back(ts);
    series.pbar.push_back(price);
  }
  series.validate();
  return series;
}

void save_price_csv(const PriceSeries& series, const std::string& path) {
  series.validate();
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "timestamp,price_gbp_per_mwh\n";
  char buf[40];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", series.pbar[i]);
    out << format_timestamp(series.timestamps[i]) << ',' << buf << '\n';
  }
}

PriceSeries synth_prices(std::uint64_t seed, int days,
                         const SynthParams& p) {
  if (days <= 0) throw DomainError("synth_prices: days must be positive");
  if (!(p.base > p.day_amp + p.week_amp + p.season_amp + 5.0 * p.noise_sd))
    throw DomainError(
        "synth_prices: positivity margin violated, need base > day_amp + "
        "week_amp + season_amp + 5*noise_sd");
  Rng rng(seed);
  PriceSeries series;
  const std::int64_t start = days_from_civil(2014, 1, 1) * 1440;
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  for (int day = 0; day < days; ++day) {
    const double weekly = p.week_amp * std::cos(kTwoPi * (day % 7) / 7.0);
    const double seasonal = p.season_amp * std::cos(kTwoPi * day / 365.0);
    for (int hh = 0; hh < 48; ++hh) {
      // Evening-peaked day shape: maximum near 18:00, trough before dawn.
      const double daily =
          p.day_amp * std::sin(kTwoPi * (hh + 0.5 - 12.0) / 48.0);
      double price = p.base + daily + weekly + seasonal +
                     p.noise_sd * rng.gaussian();
      price = std::max(price, p.base / 10.0);
      series.timestamps.push_back(start +
                                  (day * 48 + hh) * kSpacingMinutes);
      series.pbar.push_back(price);
    }
  }
  series.validate();
  return series;
}

std::vector<PriceFunction> to_price_functions(
    const PriceSeries& series, double lambda,
    std::pair<double, double> flow_range) {
  if (lambda < 0.0) throw DomainError("to_price_functions: lambda < 0");
  series.validate();
  std::vector<PriceFunction> out;
  out.reserve(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    auto pf = PriceFunction::linear(series.pbar[t], lambda * series.pbar[t],
                                    flow_range.first, flow_range.second);
    const auto rep = validate_price_function(pf, {0.0, 0.0}, 5);
    for (const auto& issue : rep.issues) {
      // Large market impact legitimately pushes x p(x) past its revenue
      // peak at deep sell volumes; only the convexity assumptions gate.
      if (issue.kind == ValidationIssue::Kind::kIncreasingCost) continue;
      throw DomainError("to_price_functions: assumptions fail at " +
                        format_timestamp(series.timestamps[t]) + ": " +
                        issue.describe());
    }
    out.push_back(std::move(pf));
  }
  return out;
}

std::pair<double, double> Scenario::flow_range() const {
  double lo = 0.0, hi = 0.0;
  for (const auto& s : specs) {
    lo -= s.efficiency * s.rate_out;
    hi += s.rate_in;
  }
  return {lo - 1e-9, hi + 1e-9};
}

std::vector<PriceFunction> Scenario::price_functions() const {
  return to_price_functions(series, lambda, flow_range());
}

namespace {

std::string dirname_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".")
                                    : path.substr(0, slash);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ParseError("scenario config: bad number '" + v + "' for key '" +
                     key + "'");
  return d;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::vector<std::string> store_lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": want key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "store")
      store_lines.push_back(val);
    else
      kv[key] = val;
  }

  auto get = [&](const std::string& key, double dflt, bool* present = nullptr) {
    const auto it = kv.find(key);
    if (present) *present = it != kv.end();
    return it == kv.end() ? dflt : to_double(it->second, key);
  };

  Scenario sc;
  if (kv.count("price_csv")) {
    std::string csv = kv["price_csv"];
    if (!csv.empty() && csv[0] != '/') csv = dirname_of(path) + "/" + csv;
    sc.series = load_price_csv(csv);
  } else {
    SynthParams sp;
    const int days = static_cast<int>(get("synth_days", 7));
    sp.base = get("synth_base", sp.base);
    sp.day_amp = get("synth_day_amp", sp.day_amp);
    sp.week_amp = get("synth_week_amp", sp.week_amp);
    sp.season_amp = get("synth_season_amp", sp.season_amp);
    sp.noise_sd = get("synth_noise_sd", sp.noise_sd);
    sc.seed = static_cast<std::uint64_t>(get("seed", 0));
    sc.series = synth_prices(sc.seed, days, sp);
    sc.synthetic = true;
    sc.synth_days = days;
    sc.synth = sp;
  }
  sc.lambda = get("lambda", 0.0);
  if (sc.lambda < 0.0)
    throw ParseError("scenario config: lambda must be nonnegative");

  if (!store_lines.empty()) {
    for (const auto& sl : store_lines) {
      std::stringstream ss(sl);
      std::string tok;
      std::vector<double> f;
      while (std::getline(ss, tok, ','))
        f.push_back(to_double(trim(tok), "store"));
      if (f.size() != 6)
        throw ParseError(
            "scenario config: store wants 6 fields "
            "capacity,rate_in,rate_out,efficiency,level_start,level_end");
      sc.specs.push_back(StoreSpec{f[0], f[1], f[2], f[3], f[4], f[5]});
    }
  } else {
    StoreSpec base{get("capacity", 10.0), get("rate_in", 1.0),
                   get("rate_out", 1.0), get("efficiency", 0.75),
                   get("level_start", 0.0), get("level_end", 0.0)};
    const int n = static_cast<int>(get("n_stores", 1));
    if (n < 1) throw ParseError("scenario config: n_stores must be >= 1");
    const bool split = kv.count("split_total") &&
                       (kv["split_total"] == "true" || kv["split_total"] == "1");
    StoreSpec each = base;
    if (split) {
      each.capacity /= n;
      each.rate_in /= n;
      each.rate_out /= n;
      each.level_start /= n;
      each.level_end /= n;
    }
    sc.specs.assign(static_cast<std::size_t>(n), each);
  }
  for (const auto& s : sc.specs) s.validate();

  if (kv.count("demand_form")) {
    const std::string form = kv["demand_form"];
    DemandModel dm = DemandModel::inelastic(0.0);
    if (form == "inelastic")
      dm = DemandModel::inelastic(get("demand_dstar", 100.0));
    else if (form == "linear")
      dm = DemandModel::linear(get("demand_a", 100.0), get("demand_b", 1.0));
    else
      throw ParseError("scenario config: demand_form must be inelastic|linear");
    sc.demand.assign(sc.series.size(), dm);
  }
  return sc;
}

}  // namespace storemkt
