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

std::vector<RePosition> GridLayout::data_positions() const {
  std::vector<RePosition> pos;
  pos.reserve(data_re_count());
  for (int l = 0; l < num_symbols; ++l) {
    if (l == dmrs_symbol) continue;
    for (int k = 0; k < num_subcarriers; ++k) pos.push_back({k, l});
  }
  return pos;
}

std::vector<RePosition> GridLayout::dmrs_positions() const {
  // Type 1, port 0: k = 4n + 2k' with k' in {0,1}, i.e. every even subcarrier.
  std::vector<RePosition> pos;
  pos.reserve(dmrs_re_count());
  for (int k = 0; k < num_subcarriers; k += 2) pos.push_back({k, dmrs_symbol});
  return pos;
}

Bits gold_sequence(std::uint32_t c_init, std::size_t n) {
  constexpr std::size_t kNc = 1600;
  const std::size_t len = n + kNc + 31;
  Bits x1(len, 0), x2(len, 0);
  x1[0] = 1;
  for (int i = 0; i < 31; ++i) x2[i] = (c_init >> i) & 1u;
  for (std::size_t i = 0; i + 31 < len; ++i) {
    x1[i + 31] = x1[i + 3] ^ x1[i];
    x2[i + 31] = x2[i + 3] ^ x2[i + 2] ^ x2[i + 1] ^ x2[i];
  }
  Bits c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = x1[i + kNc] ^ x2[i + kNc];
  return c;
}

Dmrs generate_dmrs(int slot_index, int scrambling_id, const GridLayout& layout) {
  // TS 38.211 6.4.1.1.1.1 with n_SCID = 0.
  const std::uint64_t symbols_per_slot = static_cast<std::uint64_t>(layout.num_symbols);
  const std::uint64_t nid = static_cast<std::uint64_t>(scrambling_id);
  const std::uint64_t c_init =
      ((1ull << 17) * (symbols_per_slot * slot_index + layout.dmrs_symbol + 1) * (2 * nid + 1) +
       2 * nid) % (1ull << 31);
  Dmrs d;
  d.positions = layout.dmrs_positions();
  const Bits c = gold_sequence(static_cast<std::uint32_t>(c_init), 2 * d.positions.size());
  const double a = 1.0 / std::sqrt(2.0);
  d.symbols.resize(d.positions.size());
  for (std::size_t n = 0; n < d.symbols.size(); ++n) {
    d.symbols[n] = Cplx(a * (1 - 2 * c[2 * n]), a * (1 - 2 * c[2 * n + 1]));
  }
  return d;
}

ResourceGrid map_to_grid(std::span<const Cplx> data, const Dmrs& dmrs,
                         const GridLayout& layout) {
  if (static_cast<int>(data.size()) != layout.data_re_count()) {
    throw SizeError("grid holds " + std::to_string(layout.data_re_count()) +
                    " data REs, got " + std::to_string(data.size()));
  }
  if (dmrs.symbols.size() != dmrs.positions.size()) {
    throw SizeError("DM-RS symbols and positions differ in length");
  }
  ResourceGrid grid(layout.num_subcarriers, layout.num_symbols);
  for (std::size_t i = 0; i < dmrs.positions.size(); ++i) {
    const auto [k, l] = dmrs.positions[i];
    grid.at(k, l) = dmrs.symbols[i];
    grid.dmrs_mask[static_cast<std::size_t>(l) * grid.num_subcarriers + k] = 1;
  }
  std::size_t i = 0;
  for (const auto& [k, l] : layout.data_positions()) grid.at(k, l) = data[i++];
  return grid;
}

CVec demap_from_grid(const ResourceGrid& grid, const GridLayout& layout) {
  if (grid.num_subcarriers != layout.num_subcarriers || grid.num_symbols != layout.num_symbols) {
    throw SizeError("grid shape does not match the layout");
  }
  CVec out;
  out.reserve(layout.data_re_count());
  for (const auto& [k, l] : layout.data_positions()) out.push_back(grid.at(k, l));
  return out;
}

}  // namespace uavnr
