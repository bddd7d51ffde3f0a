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
#include <span>
#include <vector>

#include "uavnr/types.hpp"

namespace uavnr {

// ---------------------------------------------------------------- 64-QAM

inline constexpr int kQam64Bits = 6;

/// Gray-mapped 64-QAM of TS 38.211 5.1.5, scaled by 1/sqrt(42).
/// Throws SizeError unless bits.size() is a multiple of 6.
CVec qam64_map(std::span<const std::uint8_t> bits);

/// Nearest-point decision, inverse of qam64_map on the constellation.
Bits qam64_hard_demap(std::span<const Cplx> symbols);

/// The 64 points, indexed by the 6-bit label b0..b5 read MSB first.
const std::array<Cplx, 64>& qam64_constellation();

// ---------------------------------------------------------------- grid

struct RePosition {
  int subcarrier;
  int symbol;
  friend bool operator==(const RePosition&, const RePosition&) = default;
};

/// Slot layout: 52 PRB, 14 symbols, one front-loaded comb-2 DM-RS symbol.
/// Data never occupies the DM-RS symbol, so its unused comb stays empty.
struct GridLayout {
  int num_subcarriers = 624;
  int num_symbols = 14;
  int dmrs_symbol = 2;

  int dmrs_re_count() const { return num_subcarriers / 2; }
  int data_re_count() const { return num_subcarriers * (num_symbols - 1); }
  /// Frequency-first, then time, skipping the DM-RS symbol.
  std::vector<RePosition> data_positions() const;
  std::vector<RePosition> dmrs_positions() const;
};

struct ResourceGrid {
  int num_subcarriers = 0;
  int num_symbols = 0;
  CVec re;                              // re[symbol * num_subcarriers + k]
  std::vector<std::uint8_t> dmrs_mask;  // same indexing

  ResourceGrid() = default;
  ResourceGrid(int sc, int sym)
      : num_subcarriers(sc), num_symbols(sym),
        re(static_cast<std::size_t>(sc) * sym),
        dmrs_mask(static_cast<std::size_t>(sc) * sym, 0) {}

  Cplx& at(int k, int l) { return re[static_cast<std::size_t>(l) * num_subcarriers + k]; }
  const Cplx& at(int k, int l) const {
    return re[static_cast<std::size_t>(l) * num_subcarriers + k];
  }
};

struct Dmrs {
  CVec symbols;
  std::vector<RePosition> positions;
};

/// Length-n pseudo-random Gold sequence of TS 38.211 5.2.1.
Bits gold_sequence(std::uint32_t c_init, std::size_t n);

/// QPSK DM-RS for PUSCH mapping type A, type-1 comb on symbol 2, port 0.
Dmrs generate_dmrs(int slot_index, int scrambling_id,
                   const GridLayout& layout = GridLayout{});

/// Throws SizeError unless data.size() == layout.data_re_count().
ResourceGrid map_to_grid(std::span<const Cplx> data, const Dmrs& dmrs,
                         const GridLayout& layout = GridLayout{});

/// Data REs in mapping order.
CVec demap_from_grid(const ResourceGrid& grid, const GridLayout& layout = GridLayout{});

// ---------------------------------------------------------------- OFDM

/// 15 kHz SCS, FFT 1024 at 15.36 Msps, normal CP.
struct OfdmNumerology {
  int fft_size = 1024;
  double sample_rate = 15.36e6;
  int num_subcarriers = 624;
  int symbols_per_slot = 14;

  /// 80 samples on the first symbol of each half subframe, 72 otherwise.
  int cp_length(int symbol) const;
  /// Offset of symbol's cyclic prefix within the slot.
  int symbol_start(int symbol) const;
  int slot_length() const;
  /// FFT bin of grid subcarrier k, centred on DC.
  int fft_bin(int k) const;
  /// Signed frequency index of grid subcarrier k.
  int frequency_index(int k) const { return k - num_subcarriers / 2; }
};

struct Waveform {
  CVec samples;
  double sample_rate = 15.36e6;
  std::vector<int> cp_lengths;
};

/// Unitary inverse FFT per symbol plus cyclic prefix. Energy of the useful
/// (non-CP) part of each symbol equals that symbol's grid energy.
Waveform ofdm_modulate(const ResourceGrid& grid, const OfdmNumerology& num = {});

}  // namespace uavnr
