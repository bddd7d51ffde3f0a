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

#include <string>

#include "fft.hpp"
#include "uavnr/errors.hpp"
#include "uavnr/phy_rx.hpp"
#include "uavnr/phy_tx.hpp"

namespace uavnr {

int OfdmNumerology::cp_length(int symbol) const {
  // 144 and 160 at 2048-point sampling, scaled to this FFT size.
  const int base = 144 * fft_size / 2048;
  return symbol % (symbols_per_slot / 2) == 0 ? base + 16 * fft_size / 2048 : base;
}

int OfdmNumerology::symbol_start(int symbol) const {
  int start = 0;
  for (int l = 0; l < symbol; ++l) start += fft_size + cp_length(l);
  return start;
}

int OfdmNumerology::slot_length() const { return symbol_start(symbols_per_slot); }

int OfdmNumerology::fft_bin(int k) const {
  const int f = frequency_index(k);
  return f >= 0 ? f : f + fft_size;
}

Waveform ofdm_modulate(const ResourceGrid& grid, const OfdmNumerology& num) {
  if (grid.num_subcarriers != num.num_subcarriers || grid.num_symbols != num.symbols_per_slot) {
    throw SizeError("grid shape does not match the OFDM numerology");
  }
  Waveform wf;
  wf.sample_rate = num.sample_rate;
  wf.samples.reserve(num.slot_length());
  CVec bins(num.fft_size), time(num.fft_size);
  for (int l = 0; l < num.symbols_per_slot; ++l) {
    std::fill(bins.begin(), bins.end(), Cplx{});
    for (int k = 0; k < num.num_subcarriers; ++k) bins[num.fft_bin(k)] = grid.at(k, l);
    detail::dft(bins, time, /*inverse=*/true);
    const int cp = num.cp_length(l);
    wf.cp_lengths.push_back(cp);
    wf.samples.insert(wf.samples.end(), time.end() - cp, time.end());
    wf.samples.insert(wf.samples.end(), time.begin(), time.end());
  }
  return wf;
}

ResourceGrid ofdm_demodulate(const Waveform& rx, const OfdmNumerology& num) {
  if (static_cast<int>(rx.samples.size()) != num.slot_length()) {
    throw SizeError("waveform has " + std::to_string(rx.samples.size()) +
                    " samples, slot needs " + std::to_string(num.slot_length()));
  }
  ResourceGrid grid(num.num_subcarriers, num.symbols_per_slot);
  CVec bins(num.fft_size);
  for (int l = 0; l < num.symbols_per_slot; ++l) {
    const auto begin = static_cast<std::size_t>(num.symbol_start(l) + num.cp_length(l));
    detail::dft(std::span(rx.samples).subspan(begin, num.fft_size), bins, /*inverse=*/false);
    for (int k = 0; k < num.num_subcarriers; ++k) grid.at(k, l) = bins[num.fft_bin(k)];
  }
  return grid;
}

std::vector<ResourceGrid> ofdm_demodulate(std::span<const Waveform> rx,
                                          const OfdmNumerology& num) {
  std::vector<ResourceGrid> out;
  out.reserve(rx.size());
  for (const auto& w : rx) out.push_back(ofdm_demodulate(w, num));
  return out;
}

}  // namespace uavnr
