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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uavnr/link.hpp"

namespace uavnr {

/// Everything a dataset generation run needs.
struct RunConfig {
  LinkConfig link;
  std::vector<double> snr_list{1, 2, 3, 4, 5, 6, 10, 15, 18, 20};
  std::vector<double> doppler_list{100, 300, 350, 400, 500, 750};
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Flat "key = value" text, '#' starts a comment. Lists are comma
/// separated and code_rate accepts a fraction such as 600/1024. Unknown
/// keys and malformed values throw ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Comma-separated numbers, e.g. "1,2,3.5".
std::vector<double> parse_number_list(std::string_view text);

/// The recognized keys, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace uavnr
