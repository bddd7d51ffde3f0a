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

#include "uavnr/image.hpp"

namespace uavnr::denoise {

inline constexpr int kDefaultWindow = 5;

/// Per-channel k x k box average with edge replication, rounded half up.
/// Throws InvalidWindow unless k is odd and >= 3.
ImagePayload mean_filter(const ImagePayload& img, int k = kDefaultWindow);

/// Per-channel k x k median with edge replication.
ImagePayload median_filter(const ImagePayload& img, int k = kDefaultWindow);

/// Noise standard deviation from the median absolute deviation of the 3x3
/// Laplacian-difference response (pooled over channels). Needs >= 16x16.
double estimate_sigma(const ImagePayload& img);

struct Bm3dParams {
  int block = 8;
  int step = 3;
  int search_window = 39;
  int max_matches_hard = 16;
  int max_matches_wiener = 32;
  double match_threshold_hard = 2500.0;   // mean squared block distance
  double match_threshold_wiener = 400.0;
  double hard_threshold = 2.7;            // in units of sigma
  double kaiser_beta = 2.0;
};

/// Two-stage BM3D applied independently to every channel. sigma is on the
/// 0..255 scale and must be positive.
ImagePayload bm3d(const ImagePayload& img, double sigma, const Bm3dParams& params = {});

}  // namespace uavnr::denoise
