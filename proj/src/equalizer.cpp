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
#include <limits>

#include "uavnr/errors.hpp"
#include "uavnr/phy_rx.hpp"

namespace uavnr {

EqualizedGrid mmse_equalize(std::span<const ResourceGrid> rx_grids,
                            const FrequencyResponse& h, double noise_var,
                            const GridLayout& layout) {
  if (rx_grids.empty() || static_cast<int>(rx_grids.size()) != h.num_rx) {
    throw SizeError("need one received grid per channel antenna");
  }
  if (h.num_subcarriers != layout.num_subcarriers || h.num_symbols != layout.num_symbols) {
    throw SizeError("channel response shape does not match the grid layout");
  }
  for (const auto& g : rx_grids) {
    if (g.num_subcarriers != layout.num_subcarriers || g.num_symbols != layout.num_symbols) {
      throw SizeError("received grid shape does not match the layout");
    }
  }
  const auto positions = layout.data_positions();
  EqualizedGrid eq;
  eq.symbols.resize(positions.size());
  eq.noise_var.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto [k, l] = positions[i];
    Cplx num{};
    double gain = 0.0;
    for (int rx = 0; rx < h.num_rx; ++rx) {
      const Cplx hv = h.at(k, l, rx);
      num += std::conj(hv) * rx_grids[rx].at(k, l);
      gain += std::norm(hv);
    }
    const double den = gain + noise_var;
    eq.symbols[i] = den > 0.0 ? num / den : Cplx{};
    eq.noise_var[i] = gain > 0.0 ? noise_var / gain : std::numeric_limits<double>::infinity();
  }
  return eq;
}

}  // namespace uavnr
