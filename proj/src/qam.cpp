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

#include <cmath>
#include <string>

#include "uavnr/errors.hpp"
#include "uavnr/phy_tx.hpp"

namespace uavnr {

namespace {

// One PAM axis: b_a, b_b, b_c -> (1-2a)(4-(1-2b)(2-(1-2c)))
constexpr int pam8(int a, int b, int c) {
  return (1 - 2 * a) * (4 - (1 - 2 * b) * (2 - (1 - 2 * c)));
}

std::array<Cplx, 64> build_constellation() {
  std::array<Cplx, 64> pts{};
  const double norm = 1.0 / std::sqrt(42.0);
  for (int label = 0; label < 64; ++label) {
    auto bit = [&](int i) { return (label >> (5 - i)) & 1; };
    pts[label] = Cplx(pam8(bit(0), bit(2), bit(4)), pam8(bit(1), bit(3), bit(5))) * norm;
  }
  return pts;
}

// Bits (a,b,c) of the PAM level nearest to v (in units of 1/sqrt(42)).
void pam8_decide(double v, std::uint8_t& a, std::uint8_t& b, std::uint8_t& c) {
  double best = 1e300;
  for (int bits = 0; bits < 8; ++bits) {
    const int ia = bits >> 2, ib = (bits >> 1) & 1, ic = bits & 1;
    const double d = std::abs(v - pam8(ia, ib, ic));
    if (d < best) {
      best = d;
      a = static_cast<std::uint8_t>(ia);
      b = static_cast<std::uint8_t>(ib);
      c = static_cast<std::uint8_t>(ic);
    }
  }
}

}  // namespace

const std::array<Cplx, 64>& qam64_constellation() {
  static const auto pts = build_constellation();
  return pts;
}

CVec qam64_map(std::span<const std::uint8_t> bits) {
  if (bits.size() % kQam64Bits != 0) {
    throw SizeError("64-QAM needs a multiple of 6 bits, got " + std::to_string(bits.size()));
  }
  const auto& pts = qam64_constellation();
  CVec out(bits.size() / kQam64Bits);
  for (std::size_t s = 0; s < out.size(); ++s) {
    int label = 0;
    for (int i = 0; i < kQam64Bits; ++i) label = (label << 1) | (bits[s * 6 + i] & 1);
    out[s] = pts[label];
  }
  return out;
}

Bits qam64_hard_demap(std::span<const Cplx> symbols) {
  const double scale = std::sqrt(42.0);
  Bits out(symbols.size() * kQam64Bits);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    std::uint8_t* b = out.data() + s * 6;
    pam8_decide(symbols[s].real() * scale, b[0], b[2], b[4]);
    pam8_decide(symbols[s].imag() * scale, b[1], b[3], b[5]);
  }
  return out;
}

}  // namespace uavnr
