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

#include "uavnr/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "uavnr/errors.hpp"

namespace uavnr::denoise {

namespace {

void check_window(int k) {
  if (k < 3 || k % 2 == 0) {
    throw InvalidWindow("window size must be odd and >= 3, got " + std::to_string(k));
  }
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

ImagePayload mean_filter(const ImagePayload& img, int k) {
  check_window(k);
  img.validate();
  const int r = k / 2, w = img.width, h = img.height, ch = img.channels;
  const int area = k * k;
  ImagePayload out(w, h, ch);
  // Horizontal sums with replicated edges, then vertical sums over those.
  std::vector<int> rows(static_cast<std::size_t>(w) * h);
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int s = 0;
        for (int d = -r; d <= r; ++d) s += img.at(clamp_index(x + d, w), y, c);
        rows[static_cast<std::size_t>(y) * w + x] = s;
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int s = 0;
        for (int d = -r; d <= r; ++d) s += rows[static_cast<std::size_t>(clamp_index(y + d, h)) * w + x];
        out.at(x, y, c) = static_cast<std::uint8_t>(std::min(255, (s + area / 2) / area));
      }
    }
  }
  return out;
}

ImagePayload median_filter(const ImagePayload& img, int k) {
  check_window(k);
  img.validate();
  const int r = k / 2, w = img.width, h = img.height, ch = img.channels;
  ImagePayload out(w, h, ch);
  std::vector<std::uint8_t> win(static_cast<std::size_t>(k) * k);
  const auto mid = win.begin() + static_cast<std::ptrdiff_t>(win.size() / 2);
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        std::size_t n = 0;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            win[n++] = img.at(clamp_index(x + dx, w), clamp_index(y + dy, h), c);
          }
        }
        std::nth_element(win.begin(), mid, win.end());
        out.at(x, y, c) = *mid;
      }
    }
  }
  return out;
}

double estimate_sigma(const ImagePayload& img) {
  img.validate();
  if (img.width < 16 || img.height < 16) {
    throw InvalidImage("noise estimation needs at least 16x16 pixels");
  }
  // [1 -2 1; -2 4 -2; 1 -2 1] has unit-variance noise gain sqrt(36) = 6.
  static constexpr int kMask[3][3] = {{1, -2, 1}, {-2, 4, -2}, {1, -2, 1}};
  std::vector<double> resp;
  resp.reserve(static_cast<std::size_t>(img.width - 2) * (img.height - 2) * img.channels);
  for (int c = 0; c < img.channels; ++c) {
    for (int y = 1; y + 1 < img.height; ++y) {
      for (int x = 1; x + 1 < img.width; ++x) {
        int s = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) s += kMask[dy + 1][dx + 1] * img.at(x + dx, y + dy, c);
        }
        resp.push_back(s);
      }
    }
  }
  auto median = [](std::vector<double>& v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
  };
  const double centre = median(resp);
  for (auto& v : resp) v = std::abs(v - centre);
  return 1.4826 * median(resp) / 6.0;
}

}  // namespace uavnr::denoise
