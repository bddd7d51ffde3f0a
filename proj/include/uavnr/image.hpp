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

#include <cstdint>
#include <filesystem>
#include <vector>

namespace uavnr {

/// Raw 8-bit image, row-major with interleaved channels.
struct ImagePayload {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  ImagePayload() = default;
  ImagePayload(int w, int h, int c = 3, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        pixels(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t sample_count() const {
    return static_cast<std::size_t>(width) * height * channels;
  }
  std::uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  /// Throws InvalidImage when dimensions and buffer length disagree.
  void validate() const;

  friend bool operator==(const ImagePayload&, const ImagePayload&) = default;
};

/// Loads a PNG as 8-bit RGB. Grayscale is expanded, alpha is dropped.
ImagePayload read_png(const std::filesystem::path& path);

/// Loads a PNG as a single 8-bit channel (luminance for color inputs).
ImagePayload read_png_gray(const std::filesystem::path& path);

/// Writes 1- or 3-channel images.
void write_png(const std::filesystem::path& path, const ImagePayload& image);

}  // namespace uavnr
