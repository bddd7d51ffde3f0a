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

#include <array>
#include <cstdint>

namespace uavnr::ldpc::detail {

struct BaseGraphEntry {
  std::uint8_t row;
  std::uint8_t col;
  std::array<std::uint16_t, 8> shift;
};

extern const std::array<BaseGraphEntry, 316> kBG1Entries;
extern const std::array<BaseGraphEntry, 197> kBG2Entries;

}  // namespace uavnr::ldpc::detail
