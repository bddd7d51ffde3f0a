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
#include "uavnr/errors.hpp"
#include "uavnr/transport.hpp"

using namespace uavnr;

TEST_CASE("serialize: bit count of a 224x224 RGB image") {
  ImagePayload img(224, 224, 3);
  CHECK(serialize_image(img).size() == 1204224);
}

TEST_CASE("serialize: MSB first per byte") {
  ImagePayload img(1, 1, 3);
  img.pixels = {0, 255, 128};
  const Bits expect = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(serialize_image(img) == expect);
}

TEST_CASE("serialize: all-zero image") {
  const auto bits = serialize_image(ImagePayload(2, 2, 3));
  CHECK(bits.size() == 96);
  CHECK(std::ranges::all_of(bits, [](auto b) { return b == 0; }));
}

TEST_CASE("serialize: inconsistent buffer is rejected") {
  ImagePayload img(4, 4, 3);
  img.pixels.pop_back();
  CHECK_THROWS_AS(serialize_image(img), InvalidImage);
  CHECK_THROWS_AS(deserialize_image(Bits(10), 1, 1, 3), InvalidImage);
}

TEST_CASE("serialize: random round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const int w = 1 + static_cast<int>(rng() % 40), h = 1 + static_cast<int>(rng() % 40);
    const int c = (rng() & 1) ? 3 : 1;
    const auto img = test::random_image(w, h, c, rng);
    CHECK(deserialize_image(serialize_image(img), w, h, c) == img);
  }
}

TEST_CASE("segment: examples") {
  const Bits ten = {1, 0, 1, 1, 0, 0, 1, 0, 1, 1};
  const auto blocks = segment_payload(ten, 4);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[2].pad_count == 2);
  CHECK(blocks[0].pad_count == 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    CHECK(blocks[i].index == i);
    CHECK(blocks[i].info_bits.size() == 4);
  }
  CHECK(blocks[2].info_bits == Bits{1, 1, 0, 0});

  const auto exact = segment_payload(Bits(8, 1), 8);
  REQUIRE(exact.size() == 1);
  CHECK(exact[0].pad_count == 0);
}

TEST_CASE("segment: image payload with a link-sized block") {
  const std::size_t a = 28488;
  const auto blocks = segment_payload(Bits(1204224), a);
  CHECK(blocks.size() == (1204224 + a - 1) / a);
}

TEST_CASE("segment: errors") {
  CHECK_THROWS_AS(segment_payload(Bits{}, 8), EmptyPayload);
  CHECK_THROWS_AS(segment_payload(Bits(8), 0), SizeError);
}

TEST_CASE("segment: partition property") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 5000, a = 1 + rng() % 700;
    const auto bits = test::random_bits(n, rng);
    const auto blocks = segment_payload(bits, a);
    std::size_t pad = 0;
    for (const auto& b : blocks) {
      CHECK(b.info_bits.size() == a);
      CHECK(b.pad_count < a);
      pad += b.pad_count;
    }
    CHECK(pad < a);
    CHECK(blocks.size() * a - pad == n);
    CHECK(desegment_payload(blocks, n) == bits);
  }
}
