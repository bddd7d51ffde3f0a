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

#include "uavnr/transport.hpp"

#include <algorithm>
#include <string>

#include "uavnr/errors.hpp"

namespace uavnr {

Bits serialize_image(const ImagePayload& image) {
  image.validate();
  Bits bits(image.pixels.size() * 8);
  auto out = bits.begin();
  for (std::uint8_t byte : image.pixels) {
    for (int b = 7; b >= 0; --b) *out++ = (byte >> b) & 1u;
  }
  return bits;
}

ImagePayload deserialize_image(std::span<const std::uint8_t> bits, int width,
                               int height, int channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw InvalidImage("image dimensions must be positive");
  }
  ImagePayload img(width, height, channels);
  if (bits.size() != img.sample_count() * 8) {
    throw InvalidImage("bit stream length " + std::to_string(bits.size()) +
                       " does not match " + std::to_string(width) + "x" +
                       std::to_string(height) + "x" + std::to_string(channels));
  }
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    std::uint8_t byte = 0;
    for (std::size_t b = 0; b < 8; ++b) byte = (byte << 1) | (bits[i * 8 + b] & 1u);
    img.pixels[i] = byte;
  }
  return img;
}

std::vector<TransportBlock> segment_payload(std::span<const std::uint8_t> bits,
                                            std::size_t tb_size) {
  if (tb_size == 0) throw SizeError("transport block size must be positive");
  if (bits.empty()) throw EmptyPayload("nothing to segment");
  const std::size_t count = (bits.size() + tb_size - 1) / tb_size;
  std::vector<TransportBlock> blocks(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t begin = i * tb_size;
    const std::size_t end = std::min(bits.size(), begin + tb_size);
    auto& tb = blocks[i];
    tb.index = i;
    tb.info_bits.assign(tb_size, 0);
    std::copy(bits.begin() + begin, bits.begin() + end, tb.info_bits.begin());
    tb.pad_count = tb_size - (end - begin);
  }
  return blocks;
}

Bits desegment_payload(std::span<const TransportBlock> blocks,
                       std::size_t total_bits) {
  Bits out;
  out.reserve(total_bits);
  for (const auto& tb : blocks) {
    const std::size_t take = std::min(tb.info_bits.size(), total_bits - out.size());
    out.insert(out.end(), tb.info_bits.begin(), tb.info_bits.begin() + take);
    if (out.size() == total_bits) break;
  }
  if (out.size() != total_bits) {
    throw SizeError("transport blocks hold fewer than the requested bits");
  }
  return out;
}

}  // namespace uavnr
