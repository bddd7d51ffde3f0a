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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "uavnr/denoise.hpp"

namespace uavnr::denoise {

namespace {

struct Plane {
  int w = 0, h = 0;
  std::vector<double> v;
  double operator()(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

// Orthonormal DCT-II basis, row u holds frequency u.
std::vector<double> dct_matrix(int n) {
  std::vector<double> c(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u) {
    const double a = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int x = 0; x < n; ++x) {
      c[u * n + x] = a * std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * n));
    }
  }
  return c;
}

std::vector<double> kaiser_2d(int n, double beta) {
  std::vector<double> w1(n);
  const double norm = std::cyl_bessel_i(0.0, beta);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : 2.0 * i / (n - 1) - 1.0;
    w1[i] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - t * t))) / norm;
  }
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) w[y * n + x] = w1[y] * w1[x];
  }
  return w;
}

// In-place orthonormal Walsh-Hadamard transform over `count` (power of two)
// vectors of length `len`, laid out consecutively.
void wht(std::vector<double>& g, int count, int len) {
  for (int h = 1; h < count; h *= 2) {
    for (int i = 0; i < count; i += 2 * h) {
      for (int j = i; j < i + h; ++j) {
        double* a = &g[static_cast<std::size_t>(j) * len];
        double* b = &g[static_cast<std::size_t>(j + h) * len];
        for (int k = 0; k < len; ++k) {
          const double x = a[k], y = b[k];
          a[k] = x + y;
          b[k] = x - y;
        }
      }
    }
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(count));
  for (auto& x : g) x *= s;
}

class Bm3dChannel {
 public:
  Bm3dChannel(const Plane& noisy, double sigma, const Bm3dParams& p)
      : noisy_(noisy), sigma_(sigma), p_(p), nb_(p.block),
        pw_(noisy.w - p.block + 1), ph_(noisy.h - p.block + 1),
        dct_(dct_matrix(p.block)), kaiser_(kaiser_2d(p.block, p.kaiser_beta)) {
    auto axis = [&](int n) {
      std::vector<int> v;
      for (int i = 0; i < n; i += p.step) v.push_back(i);
      if (v.back() != n - 1) v.push_back(n - 1);
      return v;
    };
    for (int y : axis(ph_)) {
      for (int x : axis(pw_)) refs_.emplace_back(x, y);
    }
  }

  Plane run() {
    const auto noisy_coeffs = transform_all(noisy_);
    const auto match1 = match(noisy_, p_.max_matches_hard, p_.match_threshold_hard);
    const Plane basic = hard_stage(noisy_coeffs, match1);
    const auto basic_coeffs = transform_all(basic);
    const auto match2 = match(basic, p_.max_matches_wiener, p_.match_threshold_wiener);
    return wiener_stage(noisy_coeffs, basic_coeffs, match2);
  }

 private:
  using Group = std::vector<int>;  // block positions y * pw + x, closest first

  std::vector<double> transform_all(const Plane& img) const {
    const int bs = nb_ * nb_;
    std::vector<double> out(static_cast<std::size_t>(pw_) * ph_ * bs);
    std::vector<double> tmp(bs);
    for (int y = 0; y < ph_; ++y) {
      for (int x = 0; x < pw_; ++x) {
        double* dst = &out[(static_cast<std::size_t>(y) * pw_ + x) * bs];
        for (int r = 0; r < nb_; ++r) {
          for (int u = 0; u < nb_; ++u) {
            double s = 0.0;
            for (int c = 0; c < nb_; ++c) s += dct_[u * nb_ + c] * img(x + c, y + r);
            tmp[r * nb_ + u] = s;
          }
        }
        for (int v = 0; v < nb_; ++v) {
          for (int u = 0; u < nb_; ++u) {
            double s = 0.0;
            for (int r = 0; r < nb_; ++r) s += dct_[v * nb_ + r] * tmp[r * nb_ + u];
            dst[v * nb_ + u] = s;
          }
        }
      }
    }
    return out;
  }

  void inverse_block(const double* coeffs, double* pixels) const {
    std::vector<double> tmp(static_cast<std::size_t>(nb_) * nb_);
    for (int r = 0; r < nb_; ++r) {
      for (int u = 0; u < nb_; ++u) {
        double s = 0.0;
        for (int v = 0; v < nb_; ++v) s += dct_[v * nb_ + r] * coeffs[v * nb_ + u];
        tmp[r * nb_ + u] = s;
      }
    }
    for (int r = 0; r < nb_; ++r) {
      for (int c = 0; c < nb_; ++c) {
        double s = 0.0;
        for (int u = 0; u < nb_; ++u) s += dct_[u * nb_ + c] * tmp[r * nb_ + u];
        pixels[r * nb_ + c] = s;
      }
    }
  }

  // For every displacement in the search window the squared-difference image
  // is integrated once, so each block distance is four lookups.
  std::vector<Group> match(const Plane& img, int max_matches, double threshold) const {
    using Cand = std::tuple<double, int>;
    const int radius = p_.search_window / 2;
    const double limit = threshold * nb_ * nb_;
    std::vector<std::vector<Cand>> heaps(refs_.size());
    for (auto& hp : heaps) hp.reserve(max_matches + 1);

    const int w = img.w, h = img.h;
    std::vector<double> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
    auto I = [&](int x, int y) -> double& { return integral[static_cast<std::size_t>(y) * (w + 1) + x]; };

    for (int dy = -radius; dy <= radius; ++dy) {
      for (int dx = -radius; dx <= radius; ++dx) {
        for (int y = 0; y < h; ++y) {
          double row = 0.0;
          const bool yok = y + dy >= 0 && y + dy < h;
          for (int x = 0; x < w; ++x) {
            if (yok && x + dx >= 0 && x + dx < w) {
              const double d = img(x, y) - img(x + dx, y + dy);
              row += d * d;
            }
            I(x + 1, y + 1) = I(x + 1, y) + row;
          }
        }
        for (std::size_t r = 0; r < refs_.size(); ++r) {
          const auto [rx, ry] = refs_[r];
          const int cx = rx + dx, cy = ry + dy;
          if (cx < 0 || cy < 0 || cx >= pw_ || cy >= ph_) continue;
          double dist = I(rx + nb_, ry + nb_) - I(rx, ry + nb_) - I(rx + nb_, ry) + I(rx, ry);
          if (dx == 0 && dy == 0) dist = -1.0;  // the reference always leads its group
          if (dist > limit) continue;
          auto& hp = heaps[r];
          const Cand c{dist, cy * pw_ + cx};
          if (static_cast<int>(hp.size()) < max_matches) {
            hp.push_back(c);
            std::push_heap(hp.begin(), hp.end());
          } else if (c < hp.front()) {
            std::pop_heap(hp.begin(), hp.end());
            hp.back() = c;
            std::push_heap(hp.begin(), hp.end());
          }
        }
      }
    }

    std::vector<Group> groups(refs_.size());
    for (std::size_t r = 0; r < refs_.size(); ++r) {
      auto& hp = heaps[r];
      std::sort_heap(hp.begin(), hp.end());
      std::size_t n = 1;
      while (n * 2 <= hp.size()) n *= 2;
      for (std::size_t i = 0; i < n; ++i) groups[r].push_back(std::get<1>(hp[i]));
    }
    return groups;
  }

  void aggregate(const Group& g, const std::vector<double>& coeffs, double weight,
                 std::vector<double>& num, std::vector<double>& den) const {
    const int bs = nb_ * nb_;
    std::vector<double> px(bs);
    for (std::size_t i = 0; i < g.size(); ++i) {
      inverse_block(&coeffs[i * bs], px.data());
      const int bx = g[i] % pw_, by = g[i] / pw_;
      for (int r = 0; r < nb_; ++r) {
        for (int c = 0; c < nb_; ++c) {
          const std::size_t at = static_cast<std::size_t>(by + r) * noisy_.w + bx + c;
          const double k = weight * kaiser_[r * nb_ + c];
          num[at] += k * px[r * nb_ + c];
          den[at] += k;
        }
      }
    }
  }

  void gather(const Group& g, const std::vector<double>& all, std::vector<double>& out) const {
    const int bs = nb_ * nb_;
    out.resize(g.size() * bs);
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::copy_n(&all[static_cast<std::size_t>(g[i]) * bs], bs, &out[i * bs]);
    }
  }

  Plane finish(const std::vector<double>& num, const std::vector<double>& den) const {
    Plane out{noisy_.w, noisy_.h, std::vector<double>(noisy_.v.size())};
    for (std::size_t i = 0; i < out.v.size(); ++i) {
      out.v[i] = den[i] > 0.0 ? num[i] / den[i] : noisy_.v[i];
    }
    return out;
  }

  Plane hard_stage(const std::vector<double>& coeffs, const std::vector<Group>& groups) const {
    const int bs = nb_ * nb_;
    const double thr = p_.hard_threshold * sigma_;
    std::vector<double> num(noisy_.v.size(), 0.0), den(noisy_.v.size(), 0.0);
    std::vector<double> g3;
    for (const auto& g : groups) {
      gather(g, coeffs, g3);
      const int n = static_cast<int>(g.size());
      wht(g3, n, bs);
      int kept = 0;
      for (auto& x : g3) {
        if (std::abs(x) < thr) {
          x = 0.0;
        } else {
          ++kept;
        }
      }
      wht(g3, n, bs);
      const double weight = kept > 0 ? 1.0 / (sigma_ * sigma_ * kept) : 1.0;
      aggregate(g, g3, weight, num, den);
    }
    return finish(num, den);
  }

  Plane wiener_stage(const std::vector<double>& noisy_coeffs,
                     const std::vector<double>& basic_coeffs,
                     const std::vector<Group>& groups) const {
    const int bs = nb_ * nb_;
    const double s2 = sigma_ * sigma_;
    std::vector<double> num(noisy_.v.size(), 0.0), den(noisy_.v.size(), 0.0);
    std::vector<double> gn, gb;
    for (const auto& g : groups) {
      gather(g, noisy_coeffs, gn);
      gather(g, basic_coeffs, gb);
      const int n = static_cast<int>(g.size());
      wht(gn, n, bs);
      wht(gb, n, bs);
      double energy = 0.0;
      for (std::size_t i = 0; i < gn.size(); ++i) {
        const double b2 = gb[i] * gb[i];
        const double shrink = b2 / (b2 + s2);
        gn[i] *= shrink;
        energy += shrink * shrink;
      }
      wht(gn, n, bs);
      const double weight = energy > 0.0 ? 1.0 / (s2 * energy) : 1.0;
      aggregate(g, gn, weight, num, den);
    }
    return finish(num, den);
  }

  const Plane& noisy_;
  double sigma_;
  Bm3dParams p_;
  int nb_, pw_, ph_;
  std::vector<double> dct_, kaiser_;
  std::vector<std::pair<int, int>> refs_;
};

}  // namespace

ImagePayload bm3d(const ImagePayload& img, double sigma, const Bm3dParams& params) {
  if (!(sigma > 0.0)) throw std::invalid_argument("bm3d sigma must be positive");
  img.validate();
  if (img.width < params.block || img.height < params.block) return img;

  ImagePayload out(img.width, img.height, img.channels);
  Plane plane{img.width, img.height, std::vector<double>(static_cast<std::size_t>(img.width) * img.height)};
  for (int c = 0; c < img.channels; ++c) {
    for (std::size_t i = 0; i < plane.v.size(); ++i) plane.v[i] = img.pixels[i * img.channels + c];
    const Plane den = Bm3dChannel(plane, sigma, params).run();
    for (std::size_t i = 0; i < plane.v.size(); ++i) {
      out.pixels[i * img.channels + c] =
          static_cast<std::uint8_t>(std::clamp(std::lround(den.v[i]), 0L, 255L));
    }
  }
  return out;
}

}  // namespace uavnr::denoise
