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

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "uavnr/denoise.hpp"
#include "uavnr/errors.hpp"
#include "uavnr/metrics.hpp"

using namespace uavnr;
using namespace uavnr::denoise;

namespace {

int clampi(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

// Gathers the k x k neighbourhood of (x, y) with edge replication.
std::vector<int> window(const ImagePayload& img, int x, int y, int c, int k) {
  std::vector<int> v;
  for (int dy = -k / 2; dy <= k / 2; ++dy) {
    for (int dx = -k / 2; dx <= k / 2; ++dx) {
      v.push_back(img.at(clampi(x + dx, 0, img.width - 1), clampi(y + dy, 0, img.height - 1), c));
    }
  }
  return v;
}

ImagePayload mean_oracle(const ImagePayload& img, int k) {
  ImagePayload out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        const auto v = window(img, x, y, c, k);
        double s = 0;
        for (int p : v) s += p;
        out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(s / v.size()));
      }
    }
  }
  return out;
}

ImagePayload median_oracle(const ImagePayload& img, int k) {
  ImagePayload out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        auto v = window(img, x, y, c, k);
        std::ranges::sort(v);
        out.at(x, y, c) = static_cast<std::uint8_t>(v[v.size() / 2]);
      }
    }
  }
  return out;
}

ImagePayload crop(const ImagePayload& img, int w, int h) {
  ImagePayload out(w, h, img.channels);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = img.at(x, y, c);
    }
  }
  return out;
}

// Smooth gradient kept inside [60, 160] so offsets and noise rarely clamp.
ImagePayload smooth_image(int w, int h) {
  ImagePayload img(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = static_cast<std::uint8_t>(
            110 + 50 * std::sin(0.05 * x + c) * std::cos(0.07 * y));
      }
    }
  }
  return img;
}

}  // namespace

TEST_CASE("filters: constant images are fixed points") {
  for (std::uint8_t v : {0, 77, 255}) {
    const ImagePayload img(20, 13, 3, v);
    CHECK(mean_filter(img) == img);
    CHECK(median_filter(img) == img);
    CHECK(mean_filter(img, 3) == img);
    CHECK(median_filter(img, 7) == img);
    CHECK(bm3d(img, 10.0) == img);
  }
}

TEST_CASE("filters: single impulse") {
  ImagePayload img(15, 15, 1, 0);
  img.at(7, 7, 0) = 255;
  const auto m = mean_filter(img, 5);
  int tens = 0, zeros = 0;
  for (auto p : m.pixels) {
    tens += p == 10;
    zeros += p == 0;
  }
  CHECK(tens == 25);
  CHECK(zeros == 225 - 25);
  CHECK(m.at(5, 5, 0) == 10);
  CHECK(m.at(9, 9, 0) == 10);
  CHECK(m.at(4, 7, 0) == 0);

  const auto md = median_filter(img, 5);
  CHECK(std::ranges::all_of(md.pixels, [](auto p) { return p == 0; }));
}

TEST_CASE("filters: brute-force oracles on random images") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const int c = t % 2 ? 3 : 1;
    const auto img = test::random_image(32, 32, c, rng);
    for (int k : {3, 5, 7}) {
      CHECK(mean_filter(img, k) == mean_oracle(img, k));
      CHECK(median_filter(img, k) == median_oracle(img, k));
    }
  }
  // Windows larger than the image still replicate edges.
  const auto tiny = test::random_image(3, 2, 3, rng);
  CHECK(mean_filter(tiny, 7) == mean_oracle(tiny, 7));
  CHECK(median_filter(tiny, 7) == median_oracle(tiny, 7));
}

TEST_CASE("filters: window validation") {
  const ImagePayload img(8, 8, 3);
  for (int k : {0, 1, 2, 4, 6, -3}) {
    CHECK_THROWS_AS(mean_filter(img, k), InvalidWindow);
    CHECK_THROWS_AS(median_filter(img, k), InvalidWindow);
  }
}

TEST_CASE("estimate_sigma: constant, Gaussian and offset") {
  CHECK(estimate_sigma(ImagePayload(64, 64, 3, 128)) == doctest::Approx(0.0));
  std::mt19937_64 rng(2);
  const auto base = smooth_image(128, 128);
  const auto noisy = test::add_gaussian_noise(base, 20.0, rng);
  const double est = estimate_sigma(noisy);
  CHECK(est > 15.0);
  CHECK(est < 25.0);

  const auto mild = test::add_gaussian_noise(base, 10.0, rng);
  auto shifted = mild;
  bool clamps = false;
  for (auto& p : shifted.pixels) {
    clamps |= p + 30 > 255;
    p = static_cast<std::uint8_t>(std::min(255, p + 30));
  }
  REQUIRE_FALSE(clamps);
  CHECK(estimate_sigma(shifted) == estimate_sigma(mild));

  for (const auto& path : test::natural_images()) {
    const auto img = read_png(path);
    const double e = estimate_sigma(test::add_gaussian_noise(img, 20.0, rng));
    CAPTURE(path.filename().string());
    CHECK(e > 15.0);
    CHECK(e < 25.0);
  }
  CHECK_THROWS_AS(estimate_sigma(ImagePayload(15, 40, 3)), InvalidImage);
}

TEST_CASE("bm3d: near-identity for tiny sigma") {
  const auto img = crop(read_png(test::natural_images().front()), 96, 96);
  CHECK(metrics::psnr(img, bm3d(img, 0.5)) >= 50.0);
}

TEST_CASE("bm3d: deterministic and validated") {
  std::mt19937_64 rng(3);
  const auto img = test::add_gaussian_noise(smooth_image(48, 40), 15, rng);
  CHECK(bm3d(img, 15) == bm3d(img, 15));
  CHECK_THROWS_AS(bm3d(img, 0.0), std::invalid_argument);
  const auto small = test::random_image(6, 6, 1, rng);
  CHECK(bm3d(small, 10) == small);
}

TEST_CASE("bm3d: beats the median filter at sigma 25") {
  std::mt19937_64 rng(4);
  const auto paths = test::natural_images();
  for (std::size_t i = 0; i < 2; ++i) {
    const auto clean = crop(read_png(paths[i]), 96, 96);
    const auto noisy = test::add_gaussian_noise(clean, 25, rng);
    const double n = metrics::psnr(clean, noisy);
    const double md = metrics::psnr(clean, median_filter(noisy));
    const double b = metrics::psnr(clean, bm3d(noisy, 25));
    CAPTURE(paths[i].filename().string());
    CHECK(b > n);
    CHECK(b >= md);
  }
}

TEST_CASE("filters improve a noisy natural image") {
  std::mt19937_64 rng(5);
  const auto clean = crop(read_png(test::natural_images()[1]), 128, 128);
  const auto noisy = test::add_gaussian_noise(clean, 30, rng);
  const double n = metrics::psnr(clean, noisy);
  CHECK(metrics::psnr(clean, mean_filter(noisy)) > n);
  CHECK(metrics::psnr(clean, median_filter(noisy)) > n);
}
