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
#include <span>

#include "uavnr/types.hpp"

namespace uavnr {

// Generator polynomials of TS 38.212 section 5.1.
enum class CrcType { Crc24A, Crc24B, Crc16 };

int crc_length(CrcType type);

/// Parity register value for the message, MSB = first parity bit.
std::uint32_t crc_compute(std::span<const std::uint8_t> bits, CrcType type);

/// Message followed by its crc_length() parity bits.
Bits crc_attach(std::span<const std::uint8_t> bits, CrcType type);

/// True when the trailing parity bits match the leading message.
bool crc_check(std::span<const std::uint8_t> bits_with_crc, CrcType type);

}  // namespace uavnr
