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

#include "uavnr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "uavnr/errors.hpp"

namespace uavnr::metrics {

namespace {

void require_same_shape(const ImagePayload& a, const ImagePayload& b) {
  a.validate();
  b.validate();
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw SizeError("images differ in shape");
  }
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(size);
  const int half = size / 2;
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (auto& v : k) v /= sum;
  return k;
}

// Separable "valid" filtering of a w x h plane.
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h,
                                 const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1, oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * img[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

double psnr(const ImagePayload& reference, const ImagePayload& test, double peak) {
  require_same_shape(reference, test);
  double sse = 0.0;
  for (std::size_t i = 0; i < reference.pixels.size(); ++i) {
    const double d = static_cast<double>(reference.pixels[i]) - test.pixels[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(reference.pixels.size());
  return 10.0 * std::log10(peak * peak / mse);
}

std::vector<double> luminance(const ImagePayload& image) {
  image.validate();
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  std::vector<double> y(n);
  if (image.channels == 1) {
    for (std::size_t i = 0; i < n; ++i) y[i] = image.pixels[i];
    return y;
  }
  if (image.channels < 3) throw InvalidImage("luminance needs 1 or >= 3 channels");
  for (std::size_t i = 0; i < n; ++i) {
    const auto* p = &image.pixels[i * image.channels];
    y[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
  }
  return y;
}

double ssim(const ImagePayload& reference, const ImagePayload& test) {
  require_same_shape(reference, test);
  constexpr int kWin = 11;
  constexpr double kSigma = 1.5;
  constexpr double kPeak = 255.0;
  const int w = reference.width, h = reference.height;
  if (w < kWin || h < kWin) throw SizeError("SSIM needs images of at least 11x11");
  const double c1 = (0.01 * kPeak) * (0.01 * kPeak);
  const double c2 = (0.03 * kPeak) * (0.03 * kPeak);

  const auto a = luminance(reference);
  const auto b = luminance(test);
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto k = gaussian_kernel(kWin, kSigma);
  const auto mu_a = filter_valid(a, w, h, k);
  const auto mu_b = filter_valid(b, w, h, k);
  const auto e_aa = filter_valid(aa, w, h, k);
  const auto e_bb = filter_valid(bb, w, h, k);
  const auto e_ab = filter_valid(ab, w, h, k);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

BinaryMask mask_from_image(const ImagePayload& gray) {
  gray.validate();
  BinaryMask m{gray.width, gray.height, {}};
  m.bits.resize(static_cast<std::size_t>(gray.width) * gray.height);
  for (std::size_t i = 0; i < m.bits.size(); ++i) {
    bool fg = false;
    for (int c = 0; c < gray.channels; ++c) fg |= gray.pixels[i * gray.channels + c] != 0;
    m.bits[i] = fg ? 1 : 0;
  }
  return m;
}

BinaryMask read_mask(const std::filesystem::path& path) {
  return mask_from_image(read_png_gray(path));
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height || a.bits.size() != b.bits.size()) {
    throw SizeError("masks differ in shape");
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool x = a.bits[i] != 0, y = b.bits[i] != 0;
    inter += x && y;
    uni += x || y;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double box_iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

std::vector<Detection> parse_detections(std::string_view text) {
  std::vector<Detection> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> v;
    double x;
    while (fields >> x) v.push_back(x);
    if (!fields.eof()) throw InvalidImage("detection line " + std::to_string(line_no) + ": not numeric");
    if (v.empty()) continue;
    if (v.size() != 5 && v.size() != 6) {
      throw InvalidImage("detection line " + std::to_string(line_no) + ": expected 5 or 6 fields");
    }
    Detection d;
    d.class_id = static_cast<int>(v[0]);
    d.box = {v[1], v[2], v[3], v[4]};
    d.confidence = v.size() == 6 ? v[5] : 1.0;
    if (!(d.box.x1 < d.box.x2 && d.box.y1 < d.box.y2)) {
      throw InvalidImage("detection line " + std::to_string(line_no) + ": degenerate box");
    }
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw InvalidImage("detection line " + std::to_string(line_no) + ": confidence outside [0,1]");
    }
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> read_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidImage("cannot open detection file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_detections(ss.str());
}

double average_precision(std::span<const ImageDetections> corpus, int class_id,
                         double iou_threshold) {
  struct Pred {
    std::size_t image;
    const Detection* det;
  };
  std::vector<Pred> preds;
  std::vector<std::vector<const GroundTruth*>> gts(corpus.size());
  std::size_t num_gt = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& d : corpus[i].predictions) {
      if (d.class_id == class_id) preds.push_back({i, &d});
    }
    for (const auto& g : corpus[i].ground_truth) {
      if (g.class_id == class_id) gts[i].push_back(&g);
    }
    num_gt += gts[i].size();
  }
  if (num_gt == 0) return 0.0;
  std::ranges::stable_sort(preds, [](const Pred& a, const Pred& b) {
    return a.det->confidence > b.det->confidence;
  });

  std::vector<std::vector<bool>> used(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) used[i].assign(gts[i].size(), false);
  std::vector<double> precision, recall;
  std::size_t tp = 0;
  for (std::size_t n = 0; n < preds.size(); ++n) {
    const auto& p = preds[n];
    double best = iou_threshold;
    int match = -1;
    for (std::size_t g = 0; g < gts[p.image].size(); ++g) {
      if (used[p.image][g]) continue;
      const double o = box_iou(p.det->box, gts[p.image][g]->box);
      if (o >= best) {
        best = o;
        match = static_cast<int>(g);
      }
    }
    if (match >= 0) {
      used[p.image][match] = true;
      ++tp;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(n + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
  }
  // Precision envelope, then sample at recall 0, 0.01, ..., 1.
  for (std::size_t n = precision.size(); n-- > 1;) {
    precision[n - 1] = std::max(precision[n - 1], precision[n]);
  }
  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    const double level = r / 100.0;
    const auto it = std::ranges::lower_bound(recall, level - 1e-12);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / 101.0;
}

MapResult mean_ap(std::span<const ImageDetections> corpus) {
  std::set<int> classes;
  for (const auto& img : corpus) {
    for (const auto& g : img.ground_truth) classes.insert(g.class_id);
  }
  MapResult res;
  res.num_classes = static_cast<int>(classes.size());
  if (classes.empty()) {
    res.note = "no ground-truth boxes; mAP reported as 0";
    return res;
  }
  for (int c : classes) {
    res.map50 += average_precision(corpus, c, 0.5);
    double acc = 0.0;
    for (int t = 0; t < 10; ++t) acc += average_precision(corpus, c, 0.5 + 0.05 * t);
    res.map50_95 += acc / 10.0;
  }
  res.map50 /= static_cast<double>(classes.size());
  res.map50_95 /= static_cast<double>(classes.size());
  return res;
}

}  // namespace uavnr::metrics
