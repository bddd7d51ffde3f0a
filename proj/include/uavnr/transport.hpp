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

#include <cstddef>
#include <span>
#include <vector>

#include "uavnr/image.hpp"
#include "uavnr/types.hpp"

namespace uavnr {

struct TransportBlock {
  Bits info_bits;
  std::size_t index = 0;
  std::size_t pad_count = 0;
};

/// width*height*channels*8 bits, MSB first within each byte.
Bits serialize_image(const ImagePayload& image);

/// Inverse of serialize_image; geometry is supplied out of band.
ImagePayload deserialize_image(std::span<const std::uint8_t> bits, int width,
                               int height, int channels = 3);

/// Splits into ceil(len/tb_size) blocks; the last one is zero padded.
std::vector<TransportBlock> segment_payload(std::span<const std::uint8_t> bits,
                                            std::size_t tb_size);

/// Concatenates blocks and truncates to total_bits.
Bits desegment_payload(std::span<const TransportBlock> blocks,
                       std::size_t total_bits);

}  // namespace uavnr
