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
#include <cmath>

#include "uavnr/phy_rx.hpp"

namespace uavnr {

namespace {

// 8-PAM levels (units of 1/sqrt(42)) indexed by the axis bits (a, b, c).
constexpr int kLevel[8] = {3, 1, 5, 7, -3, -1, -5, -7};

// Max-log distances for the three bits of one axis.
void axis_llrs(double v, double inv_var, Llr* l0, Llr* l1, Llr* l2) {
  const double scale = 1.0 / std::sqrt(42.0);
  double d[8];
  for (int i = 0; i < 8; ++i) {
    const double e = v - kLevel[i] * scale;
    d[i] = e * e;
  }
  auto llr = [&](int bit) {
    double m0 = 1e300, m1 = 1e300;
    for (int i = 0; i < 8; ++i) {
      if ((i >> (2 - bit)) & 1) {
        m1 = std::min(m1, d[i]);
      } else {
        m0 = std::min(m0, d[i]);
      }
    }
    return static_cast<Llr>((m1 - m0) * inv_var);
  };
  *l0 = llr(0);
  *l1 = llr(1);
  *l2 = llr(2);
}

}  // namespace

LlrVec soft_demap(const EqualizedGrid& eq) {
  LlrVec out(eq.symbols.size() * 6);
  for (std::size_t s = 0; s < eq.symbols.size(); ++s) {
    const double var = eq.noise_var[s];
    // A null channel carries no information; a noiseless one is clamped.
    const double inv = std::isfinite(var) ? 1.0 / std::max(var, 1e-12) : 0.0;
    Llr* o = out.data() + s * 6;
    axis_llrs(eq.symbols[s].real(), inv, &o[0], &o[2], &o[4]);
    axis_llrs(eq.symbols[s].imag(), inv, &o[1], &o[3], &o[5]);
  }
  return out;
}

}  // namespace uavnr
