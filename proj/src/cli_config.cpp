// SPDX-License-Identifier: Apache-2.0
//
// uavnr: 5G NR uplink image-offloading link simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "uavnr/config.hpp"
#include "uavnr/errors.hpp"

namespace uavnr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double to_double(std::string_view key, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <typename T>
T to_integer(std::string_view key, std::string_view s) {
  s = trim(s);
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

void expect(std::string_view key, std::string_view value, std::initializer_list<const char*> ok) {
  const auto v = lower(trim(value));
  for (const char* o : ok) {
    if (v == o) return;
  }
  throw ConfigError(std::string(key) + ": unsupported value '" + std::string(value) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"code_rate",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const auto slash = v.find('/');
         if (slash == std::string_view::npos) {
           c.link.code_rate = to_double(k, v);
         } else {
           const double den = to_double(k, v.substr(slash + 1));
           if (den == 0.0) throw ConfigError("code_rate: zero denominator");
           c.link.code_rate = to_double(k, v.substr(0, slash)) / den;
         }
       }},
      {"modulation",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         expect(k, v, {"64qam", "64-qam", "qam64"});
         c.link.bits_per_symbol = 6;
       }},
      {"n_tx", [](RunConfig& c, std::string_view k, std::string_view v) { c.link.n_tx = to_integer<int>(k, v); }},
      {"n_rx", [](RunConfig& c, std::string_view k, std::string_view v) { c.link.n_rx = to_integer<int>(k, v); }},
      {"num_prb", [](RunConfig& c, std::string_view k, std::string_view v) { c.link.num_prb = to_integer<int>(k, v); }},
      {"scs_hz", [](RunConfig& c, std::string_view k, std::string_view v) { c.link.scs_hz = to_double(k, v); }},
      {"bandwidth_hz",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.link.bandwidth_hz = to_double(k, v); }},
      {"cyclic_prefix", [](RunConfig&, std::string_view k, std::string_view v) { expect(k, v, {"normal"}); }},
      {"mapping_type", [](RunConfig&, std::string_view k, std::string_view v) { expect(k, v, {"a"}); }},
      {"duplex", [](RunConfig&, std::string_view k, std::string_view v) { expect(k, v, {"fdd"}); }},
      {"channel", [](RunConfig&, std::string_view k, std::string_view v) { expect(k, v, {"cdl-a", "cdl_a", "cdla"}); }},
      {"delay_spread",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.link.delay_spread = to_double(k, v); }},
      {"max_harq_retx",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.link.max_harq_retx = to_integer<int>(k, v); }},
      {"ldpc_max_iter",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.link.ldpc_max_iter = to_integer<int>(k, v); }},
      {"scrambling_id",
       [](RunConfig& c, std::string_view k, std::string_view v) { c.link.scrambling_id = to_integer<int>(k, v); }},
      {"snr_db", [](RunConfig& c, std::string_view, std::string_view v) { c.snr_list = parse_number_list(v); }},
      {"doppler_hz",
       [](RunConfig& c, std::string_view, std::string_view v) { c.doppler_list = parse_number_list(v); }},
      {"seed", [](RunConfig& c, std::string_view k, std::string_view v) { c.seed = to_integer<std::uint64_t>(k, v); }},
      {"workers", [](RunConfig& c, std::string_view k, std::string_view v) { c.workers = to_integer<int>(k, v); }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start);
    out.push_back(to_double("list", item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = lower(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = setters();
    const auto it = std::ranges::find(table, key, &std::pair<std::string, Setter>::first);
    if (it == table.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    it->second(cfg, key, value);
  }
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  for (double s : cfg.snr_list) {
    LinkConfig probe = cfg.link;
    probe.snr_db = s;
    for (double d : cfg.doppler_list) {
      probe.doppler_hz = d;
      probe.validate();
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

}  // namespace uavnr
