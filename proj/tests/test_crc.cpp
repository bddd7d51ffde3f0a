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

#include <doctest.h>

#include "test_util.hpp"
#include "uavnr/crc.hpp"

using namespace uavnr;

namespace {

// Generator exponents straight from the polynomial definitions.
std::vector<int> generator(CrcType t) {
  switch (t) {
    case CrcType::Crc24A: return {24, 23, 18, 17, 14, 11, 10, 7, 6, 5, 4, 3, 1, 0};
    case CrcType::Crc24B: return {24, 23, 6, 5, 1, 0};
    case CrcType::Crc16: return {16, 12, 5, 0};
  }
  return {};
}

// Remainder of m(D) * D^L divided by g(D), by schoolbook long division.
Bits long_division(const Bits& msg, CrcType t) {
  const auto g = generator(t);
  const int l = g.front();
  Bits work(msg);
  work.resize(msg.size() + l, 0);
  for (std::size_t i = 0; i < msg.size(); ++i) {
    if (!work[i]) continue;
    for (int e : g) work[i + l - e] ^= 1;
  }
  return Bits(work.end() - l, work.end());
}

Bits bits_of(std::uint64_t v, int n) {
  Bits b(n);
  for (int i = 0; i < n; ++i) b[i] = (v >> (n - 1 - i)) & 1;
  return b;
}

}  // namespace

TEST_CASE("crc: lengths") {
  CHECK(crc_length(CrcType::Crc24A) == 24);
  CHECK(crc_length(CrcType::Crc24B) == 24);
  CHECK(crc_length(CrcType::Crc16) == 16);
}

TEST_CASE("crc: 0xDEADBEEF with CRC24A against long division") {
  const Bits msg = bits_of(0xDEADBEEF, 32);
  const Bits parity = long_division(msg, CrcType::Crc24A);
  CHECK(crc_compute(msg, CrcType::Crc24A) == 0x6432c5u);  // precomputed by polynomial division
  CHECK(bits_of(crc_compute(msg, CrcType::Crc24A), 24) == parity);
  const Bits full = crc_attach(msg, CrcType::Crc24A);
  CHECK(Bits(full.end() - 24, full.end()) == parity);
}

TEST_CASE("crc: random messages against long division") {
  std::mt19937_64 rng(3);
  for (CrcType t : {CrcType::Crc24A, CrcType::Crc24B, CrcType::Crc16}) {
    for (int i = 0; i < 200; ++i) {
      const auto msg = test::random_bits(rng() % 700, rng);
      const auto parity = long_division(msg, t);
      CHECK(bits_of(crc_compute(msg, t), crc_length(t)) == parity);
    }
  }
}

TEST_CASE("crc: attach then check passes, any flip fails") {
  std::mt19937_64 rng(5);
  for (CrcType t : {CrcType::Crc24A, CrcType::Crc24B, CrcType::Crc16}) {
    for (int i = 0; i < 50; ++i) {
      const auto msg = test::random_bits(1 + rng() % 2000, rng);
      auto full = crc_attach(msg, t);
      CHECK(full.size() == msg.size() + crc_length(t));
      CHECK(crc_check(full, t));
      full[rng() % full.size()] ^= 1;
      CHECK_FALSE(crc_check(full, t));
    }
  }
}

TEST_CASE("crc: all-zero message has all-zero parity") {
  for (std::size_t n : {0u, 1u, 8u, 37u, 1000u}) {
    CHECK(crc_compute(Bits(n, 0), CrcType::Crc24A) == 0u);
    CHECK(crc_compute(Bits(n, 0), CrcType::Crc16) == 0u);
  }
}
