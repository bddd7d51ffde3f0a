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

// Independent reference implementations shared by the unit tests and the
// acceptance binary.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "uavnr/image.hpp"
#include "uavnr/metrics.hpp"

namespace uavnr::test {

using metrics::BinaryMask;
using metrics::Box;
using metrics::ImageDetections;

// CDL-A cluster delays (normalized) and powers (dB).
inline constexpr double kRefDelay[] = {0.0000, 0.3819, 0.4025, 0.5868, 0.4610, 0.5375, 0.6708, 0.5750,
                                       0.7618, 1.5375, 1.8978, 2.2242, 2.1718, 2.4942, 2.5119, 3.0582,
                                       4.0810, 4.4579, 4.5695, 4.7966, 5.0066, 5.3043, 9.6586};
inline constexpr double kRefPower[] = {-13.4, 0.0,   -2.2,  -4.0,  -6.0,  -8.2,  -9.9,  -10.5,
                                       -7.5,  -15.9, -6.6,  -16.7, -12.4, -15.2, -10.8, -11.3,
                                       -12.7, -16.2, -18.3, -18.9, -16.6, -19.9, -29.7};

inline double psnr_oracle(const ImagePayload& a, const ImagePayload& b) {
  double se = 0;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      for (int c = 0; c < a.channels; ++c) {
        const double d = double(a.at(x, y, c)) - double(b.at(x, y, c));
        se += d * d;
      }
    }
  }
  const double mse = se / (double(a.width) * a.height * a.channels);
  return 10 * std::log10(255.0 * 255.0 / mse);
}

// Direct 2-D windowed statistics at every valid 11x11 position.
inline double ssim_oracle(const ImagePayload& a, const ImagePayload& b) {
  auto luma = [](const ImagePayload& im, int x, int y) {
    if (im.channels == 1) return double(im.at(x, y, 0));
    return 0.299 * im.at(x, y, 0) + 0.587 * im.at(x, y, 1) + 0.114 * im.at(x, y, 2);
  };
  double w[11][11], wsum = 0;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      w[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * 1.5 * 1.5));
      wsum += w[i][j];
    }
  }
  const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  double total = 0;
  int count = 0;
  for (int y0 = 0; y0 + 11 <= a.height; ++y0) {
    for (int x0 = 0; x0 + 11 <= a.width; ++x0) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) {
          const double wt = w[i][j] / wsum;
          const double va = luma(a, x0 + j, y0 + i), vb = luma(b, x0 + j, y0 + i);
          ma += wt * va;
          mb += wt * vb;
          saa += wt * va * va;
          sbb += wt * vb * vb;
          sab += wt * va * vb;
        }
      }
      const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
      total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  }
  return total / count;
}

inline BinaryMask random_mask(int w, int h, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution bd(p);
  BinaryMask m{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
  for (auto& b : m.bits) b = bd(rng);
  return m;
}

inline double box_iou_oracle(const Box& a, const Box& b) {
  const double iw = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double ih = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = iw * ih;
  return inter / ((a.x2 - a.x1) * (a.y2 - a.y1) + (b.x2 - b.x1) * (b.y2 - b.y1) - inter);
}

// Enumerates the precision-recall curve and samples 101 recall levels.
inline double ap_oracle(const std::vector<ImageDetections>& corpus, int cls, double thr) {
  struct P {
    double conf;
    std::size_t img, idx;
  };
  std::vector<P> preds;
  std::size_t n_gt = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = 0; j < corpus[i].predictions.size(); ++j) {
      if (corpus[i].predictions[j].class_id == cls) preds.push_back({corpus[i].predictions[j].confidence, i, j});
    }
    for (const auto& g : corpus[i].ground_truth) n_gt += g.class_id == cls;
  }
  if (n_gt == 0) return 0;
  std::ranges::stable_sort(preds, [](const P& a, const P& b) { return a.conf > b.conf; });
  std::vector<std::vector<bool>> used(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) used[i].assign(corpus[i].ground_truth.size(), false);
  std::vector<double> rec, prec;
  int tp = 0, seen = 0;
  for (const auto& p : preds) {
    ++seen;
    const auto& box = corpus[p.img].predictions[p.idx].box;
    int best = -1;
    double best_iou = -1;
    for (std::size_t g = 0; g < corpus[p.img].ground_truth.size(); ++g) {
      const auto& gt = corpus[p.img].ground_truth[g];
      if (gt.class_id != cls || used[p.img][g]) continue;
      const double v = box_iou_oracle(box, gt.box);
      if (v >= thr && v > best_iou) {
        best_iou = v;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0) {
      used[p.img][best] = true;
      ++tp;
    }
    rec.push_back(double(tp) / n_gt);
    prec.push_back(double(tp) / seen);
  }
  double sum = 0;
  for (int r = 0; r <= 100; ++r) {
    const double level = r / 100.0;
    double best = 0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (rec[i] >= level) best = std::max(best, prec[i]);
    }
    sum += best;
  }
  return sum / 101;
}

inline Box random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0, 80), size(4, 40);
  Box b;
  b.x1 = pos(rng);
  b.y1 = pos(rng);
  b.x2 = b.x1 + size(rng);
  b.y2 = b.y1 + size(rng);
  return b;
}

inline Box jitter(const Box& b, double amount, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-amount, amount);
  Box o = b;
  o.x1 += d(rng);
  o.y1 += d(rng);
  o.x2 += d(rng);
  o.y2 += d(rng);
  if (o.x2 <= o.x1) o.x2 = o.x1 + 1;
  if (o.y2 <= o.y1) o.y2 = o.y1 + 1;
  return o;
}

inline std::vector<ImageDetections> random_corpus(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_img(1, 5), n_gt(0, 5), n_fp(0, 4), cls(0, 2);
  std::uniform_real_distribution<double> conf(0, 1), u(0, 1);
  std::vector<ImageDetections> corpus(n_img(rng));
  for (auto& im : corpus) {
    const int g = n_gt(rng);
    for (int i = 0; i < g; ++i) {
      im.ground_truth.push_back({cls(rng), random_box(rng)});
      if (u(rng) < 0.7) {
        const auto& gt = im.ground_truth.back();
        im.predictions.push_back({u(rng) < 0.9 ? gt.class_id : cls(rng), jitter(gt.box, 6, rng), conf(rng)});
      }
    }
    const int f = n_fp(rng);
    for (int i = 0; i < f; ++i) im.predictions.push_back({cls(rng), random_box(rng), conf(rng)});
  }
  return corpus;
}

}  // namespace uavnr::test
