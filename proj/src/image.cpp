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

#include "uavnr/image.hpp"

#include <png.h>

#include <string>

#include "uavnr/errors.hpp"

namespace uavnr {

void ImagePayload::validate() const {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw InvalidImage("image dimensions must be positive");
  }
  if (pixels.size() != sample_count()) {
    throw InvalidImage("pixel buffer holds " + std::to_string(pixels.size()) +
                       " samples, expected " + std::to_string(sample_count()));
  }
}

namespace {

ImagePayload read_with_format(const std::filesystem::path& path,
                              png_uint_32 format, int channels) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw InvalidImage("cannot read PNG " + path.string() + ": " + png.message);
  }
  png.format = format;
  ImagePayload img(static_cast<int>(png.width), static_cast<int>(png.height),
                   channels);
  if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw InvalidImage("cannot decode PNG " + path.string() + ": " + msg);
  }
  return img;
}

}  // namespace

ImagePayload read_png(const std::filesystem::path& path) {
  return read_with_format(path, PNG_FORMAT_RGB, 3);
}

ImagePayload read_png_gray(const std::filesystem::path& path) {
  return read_with_format(path, PNG_FORMAT_GRAY, 1);
}

void write_png(const std::filesystem::path& path, const ImagePayload& image) {
  image.validate();
  if (image.channels != 1 && image.channels != 3) {
    throw InvalidImage("only 1- and 3-channel images can be written");
  }
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0,
                               nullptr)) {
    throw InvalidImage("cannot write PNG " + path.string() + ": " + png.message);
  }
}

}  // namespace uavnr
