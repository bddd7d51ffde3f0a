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

#include <span>
#include <vector>

#include "uavnr/channel.hpp"
#include "uavnr/phy_tx.hpp"
#include "uavnr/types.hpp"

namespace uavnr {

/// Strips the CP and applies the unitary FFT per symbol. Throws SizeError
/// unless the waveform is exactly one slot long.
ResourceGrid ofdm_demodulate(const Waveform& rx, const OfdmNumerology& num = {});

/// Per-antenna demodulation.
std::vector<ResourceGrid> ofdm_demodulate(std::span<const Waveform> rx,
                                          const OfdmNumerology& num = {});

struct EqualizedGrid {
  CVec symbols;                 // per data RE, in mapping order
  std::vector<double> noise_var;  // post-equalization noise variance per RE
};

/// Receive-combining MMSE with perfect CSI, per data RE:
///   s = sum_i conj(h_i) y_i / (sum_i |h_i|^2 + N0)
///   noise_var = N0 / sum_i |h_i|^2   (infinity when the channel is null)
EqualizedGrid mmse_equalize(std::span<const ResourceGrid> rx_grids,
                            const FrequencyResponse& h, double noise_var,
                            const GridLayout& layout = GridLayout{});

/// Max-log 64-QAM LLRs, 6 per symbol, scaled by 1 / noise_var.
LlrVec soft_demap(const EqualizedGrid& eq);

}  // namespace uavnr
