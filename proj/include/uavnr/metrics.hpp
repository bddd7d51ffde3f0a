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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uavnr/image.hpp"

namespace uavnr::metrics {

/// 10 log10(R^2 / MSE) over all samples. Identical inputs give +infinity.
double psnr(const ImagePayload& reference, const ImagePayload& test, double peak = 255.0);

/// Gaussian-windowed (11x11, sigma 1.5) SSIM on BT.601 luminance, with
/// C1 = (0.01 R)^2 and C2 = (0.03 R)^2, averaged over all windows that fit
/// inside the image.
double ssim(const ImagePayload& reference, const ImagePayload& test);

/// ITU-R BT.601 luma, one double per pixel (identity for 1-channel input).
std::vector<double> luminance(const ImagePayload& image);

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // 1 = foreground
};

/// Foreground wherever the 8-bit gray value is nonzero.
BinaryMask mask_from_image(const ImagePayload& gray);
BinaryMask read_mask(const std::filesystem::path& path);

/// |a & b| / |a | b|; two empty masks score 1.
double iou(const BinaryMask& a, const BinaryMask& b);

struct Box {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  double area() const { return (x2 - x1) * (y2 - y1); }
};

double box_iou(const Box& a, const Box& b);

struct Detection {
  int class_id = 0;
  Box box;
  double confidence = 1.0;
};

struct GroundTruth {
  int class_id = 0;
  Box box;
};

/// Predictions and ground truth of one image.
struct ImageDetections {
  std::vector<Detection> predictions;
  std::vector<GroundTruth> ground_truth;
};

/// Lines "class_id x1 y1 x2 y2 [confidence]"; blank lines and '#' comments
/// are skipped. Throws InvalidImage on malformed lines or boxes.
std::vector<Detection> parse_detections(std::string_view text);
std::vector<Detection> read_detections(const std::filesystem::path& path);

struct MapResult {
  double map50 = 0.0;
  double map50_95 = 0.0;
  int num_classes = 0;
  std::string note;  // set when the corpus has no ground truth
};

/// AP of one class at one IoU threshold with 101-point interpolation.
/// Predictions are matched greedily in descending confidence to the best
/// unmatched ground truth of the same image.
double average_precision(std::span<const ImageDetections> corpus, int class_id,
                         double iou_threshold);

/// mAP@.5 and mAP@.5:.95 (thresholds 0.50, 0.55, ..., 0.95), averaged over
/// classes present in the ground truth.
MapResult mean_ap(std::span<const ImageDetections> corpus);

}  // namespace uavnr::metrics
