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

#include "uavnr/crc.hpp"

#include <array>

#include "uavnr/errors.hpp"

namespace uavnr {

namespace {

struct CrcSpec {
  int length;
  std::uint32_t poly;  // without the leading x^L term
};

constexpr CrcSpec spec_of(CrcType type) {
  switch (type) {
    case CrcType::Crc24A: return {24, 0x864CFBu};
    case CrcType::Crc24B: return {24, 0x800063u};
    case CrcType::Crc16: return {16, 0x1021u};
  }
  return {0, 0};
}

// Byte-wise table for a register left-aligned in 32 bits.
using Table = std::array<std::uint32_t, 256>;

Table make_table(CrcSpec s) {
  Table t{};
  const std::uint32_t poly = s.poly << (32 - s.length);
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t reg = i << 24;
    for (int b = 0; b < 8; ++b) reg = (reg & 0x80000000u) ? (reg << 1) ^ poly : reg << 1;
    t[i] = reg;
  }
  return t;
}

const Table& table_for(CrcType type) {
  static const Table a = make_table(spec_of(CrcType::Crc24A));
  static const Table b = make_table(spec_of(CrcType::Crc24B));
  static const Table c = make_table(spec_of(CrcType::Crc16));
  switch (type) {
    case CrcType::Crc24A: return a;
    case CrcType::Crc24B: return b;
    case CrcType::Crc16: break;
  }
  return c;
}

}  // namespace

int crc_length(CrcType type) { return spec_of(type).length; }

std::uint32_t crc_compute(std::span<const std::uint8_t> bits, CrcType type) {
  const CrcSpec s = spec_of(type);
  const Table& table = table_for(type);
  const std::uint32_t poly = s.poly << (32 - s.length);
  std::uint32_t reg = 0;
  std::size_t i = 0;
  for (; i + 8 <= bits.size(); i += 8) {
    std::uint32_t byte = 0;
    for (std::size_t b = 0; b < 8; ++b) byte = (byte << 1) | (bits[i + b] & 1u);
    reg = (reg << 8) ^ table[(reg >> 24) ^ byte];
  }
  for (; i < bits.size(); ++i) {
    const std::uint32_t in = static_cast<std::uint32_t>(bits[i] & 1u) << 31;
    reg = ((reg ^ in) & 0x80000000u) ? (reg << 1) ^ poly : reg << 1;
  }
  return reg >> (32 - s.length);
}

Bits crc_attach(std::span<const std::uint8_t> bits, CrcType type) {
  const int len = crc_length(type);
  const std::uint32_t parity = crc_compute(bits, type);
  Bits out(bits.begin(), bits.end());
  out.reserve(bits.size() + len);
  for (int b = len - 1; b >= 0; --b) out.push_back((parity >> b) & 1u);
  return out;
}

bool crc_check(std::span<const std::uint8_t> bits_with_crc, CrcType type) {
  const auto len = static_cast<std::size_t>(crc_length(type));
  if (bits_with_crc.size() < len) throw SizeError("input shorter than its CRC");
  const auto msg = bits_with_crc.first(bits_with_crc.size() - len);
  const std::uint32_t parity = crc_compute(msg, type);
  for (std::size_t b = 0; b < len; ++b) {
    if (((parity >> (len - 1 - b)) & 1u) != (bits_with_crc[msg.size() + b] & 1u)) return false;
  }
  return true;
}

}  // namespace uavnr
