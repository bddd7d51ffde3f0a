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

#include "uavnr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uavnr/errors.hpp"

namespace uavnr {

namespace {

constexpr CdlCluster kCdlA[] = {
    {0.0000, -13.4}, {0.3819, 0.0},   {0.4025, -2.2},  {0.5868, -4.0},  {0.4610, -6.0},
    {0.5375, -8.2},  {0.6708, -9.9},  {0.5750, -10.5}, {0.7618, -7.5},  {1.5375, -15.9},
    {1.8978, -6.6},  {2.2242, -16.7}, {2.1718, -12.4}, {2.4942, -15.2}, {2.5119, -10.8},
    {3.0582, -11.3}, {4.0810, -12.7}, {4.4579, -16.2}, {4.5695, -18.3}, {4.7966, -18.9},
    {5.0066, -16.6}, {5.3043, -19.9}, {9.6586, -29.7},
};

}  // namespace

std::span<const CdlCluster> cdl_a_profile() { return kCdlA; }

void ChannelConfig::validate() const {
  if (profile.empty()) throw ConfigError("channel profile has no taps");
  if (max_doppler < 0.0) throw ConfigError("max_doppler must be >= 0");
  if (num_rx < 1) throw ConfigError("num_rx must be >= 1");
  if (delay_spread < 0.0) throw ConfigError("delay_spread must be >= 0");
  if (sample_rate <= 0.0) throw ConfigError("sample_rate must be positive");
  if (num_sinusoids < 1) throw ConfigError("num_sinusoids must be >= 1");
}

std::vector<double> ChannelConfig::tap_powers() const {
  std::vector<double> p;
  double total = 0.0;
  for (const auto& c : profile) {
    p.push_back(std::pow(10.0, c.power_db / 10.0));
    total += p.back();
  }
  for (auto& v : p) v /= total;
  return p;
}

std::vector<int> ChannelConfig::tap_delays() const {
  std::vector<int> d;
  for (const auto& c : profile) {
    d.push_back(static_cast<int>(std::lround(c.normalized_delay * delay_spread * sample_rate)));
  }
  return d;
}

FadingChannel::FadingChannel(ChannelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  powers_ = cfg_.tap_powers();
  delays_ = cfg_.tap_delays();
  std::mt19937_64 rng(cfg_.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  const int m = cfg_.num_sinusoids;
  const double wd = two_pi * cfg_.max_doppler / cfg_.sample_rate;
  sinusoids_.resize(powers_.size() * cfg_.num_rx);
  for (auto& set : sinusoids_) {
    set.resize(m);
    for (int n = 0; n < m; ++n) {
      const double angle = two_pi * (n + unit(rng)) / m;
      set[n] = {wd * std::cos(angle), two_pi * unit(rng)};
    }
  }
}

Cplx FadingChannel::tap_gain(int tap, int rx, std::int64_t sample) const {
  const auto& set = sinusoids(tap, rx);
  Cplx g{};
  const double t = static_cast<double>(sample);
  for (const auto& s : set) g += std::polar(1.0, s.omega * t + s.phase);
  return g * std::sqrt(powers_[tap] / static_cast<double>(set.size()));
}

ChannelRealization FadingChannel::realize(std::int64_t start_sample, int num_samples) const {
  if (num_samples <= 0) throw SizeError("realization needs a positive duration");
  ChannelRealization real;
  real.num_taps = num_taps();
  real.num_rx = cfg_.num_rx;
  real.start_sample = start_sample;
  real.num_samples = num_samples;
  real.tap_delays = delays_;
  real.tap_gains.assign(static_cast<std::size_t>(real.num_taps) * real.num_rx * num_samples, {});
  // The sum of sinusoids is evaluated exactly every kStep samples by phasor
  // recursion (re-anchored every kAnchor grid points) and interpolated
  // linearly in between. For omega * kStep << 1 the interpolation error is
  // about (omega * kStep)^2 / 8 relative, 3e-6 at 750 Hz.
  constexpr int kStep = 16;
  constexpr int kAnchor = 64;
  const int m = cfg_.num_sinusoids;
  const int grid = num_samples / kStep + 2;
  std::vector<double> re(m), im(m), cr(m), ci(m);
  std::vector<Cplx> coarse(grid);
  for (int tap = 0; tap < real.num_taps; ++tap) {
    const double amp = std::sqrt(powers_[tap] / m);
    for (int rx = 0; rx < real.num_rx; ++rx) {
      const auto& set = sinusoids(tap, rx);
      for (int i = 0; i < m; ++i) {
        cr[i] = std::cos(set[i].omega * kStep);
        ci[i] = std::sin(set[i].omega * kStep);
      }
      for (int g = 0; g < grid; ++g) {
        if (g % kAnchor == 0) {
          const double t = static_cast<double>(start_sample + static_cast<std::int64_t>(g) * kStep);
          for (int i = 0; i < m; ++i) {
            const double arg = set[i].omega * t + set[i].phase;
            re[i] = amp * std::cos(arg);
            im[i] = amp * std::sin(arg);
          }
        }
        double sr = 0.0, si = 0.0;
        for (int i = 0; i < m; ++i) {
          sr += re[i];
          si += im[i];
          const double x = re[i], y = im[i];
          re[i] = x * cr[i] - y * ci[i];
          im[i] = x * ci[i] + y * cr[i];
        }
        coarse[g] = {sr, si};
      }
      Cplx* out = real.tap_gains.data() +
                  (static_cast<std::size_t>(tap) * real.num_rx + rx) * num_samples;
      for (int n = 0; n < num_samples; ++n) {
        const int g = n / kStep;
        const double frac = static_cast<double>(n % kStep) / kStep;
        const Cplx a = coarse[g], d = coarse[g + 1] - coarse[g];
        out[n] = {a.real() + frac * d.real(), a.imag() + frac * d.imag()};
      }
    }
  }
  return real;
}

ChannelRealization FadingChannel::realize_slot(std::int64_t slot_index,
                                               const OfdmNumerology& num) const {
  const int len = num.slot_length();
  auto real = realize(slot_index * len, len);
  compute_frequency_response(real, num);
  return real;
}

ChannelRealization realize_channel(const ChannelConfig& cfg, int duration_samples) {
  return FadingChannel(cfg).realize(0, duration_samples);
}

void compute_frequency_response(ChannelRealization& real, const OfdmNumerology& num) {
  if (real.num_samples < num.slot_length()) {
    throw SizeError("realization shorter than one slot");
  }
  auto& fr = real.freq_response;
  fr.num_subcarriers = num.num_subcarriers;
  fr.num_symbols = num.symbols_per_slot;
  fr.num_rx = real.num_rx;
  fr.values.assign(static_cast<std::size_t>(fr.num_subcarriers) * fr.num_symbols * fr.num_rx, {});
  const double two_pi = 2.0 * std::numbers::pi;
  for (int l = 0; l < num.symbols_per_slot; ++l) {
    const int t_ref = num.symbol_start(l) + num.cp_length(l) + num.fft_size / 2;
    for (int rx = 0; rx < real.num_rx; ++rx) {
      for (int tap = 0; tap < real.num_taps; ++tap) {
        const Cplx g = real.gain(tap, rx, t_ref);
        const double d = real.tap_delays[tap];
        for (int k = 0; k < num.num_subcarriers; ++k) {
          const double f = num.frequency_index(k);
          fr.at(k, l, rx) += g * std::polar(1.0, -two_pi * f * d / num.fft_size);
        }
      }
    }
  }
}

std::vector<Waveform> apply_channel(const Waveform& tx, const ChannelRealization& real) {
  const auto n = static_cast<int>(tx.samples.size());
  if (real.num_samples < n) {
    throw SizeError("channel realization covers " + std::to_string(real.num_samples) +
                    " samples, waveform has " + std::to_string(n));
  }
  std::vector<Waveform> out(real.num_rx);
  for (int rx = 0; rx < real.num_rx; ++rx) {
    auto& y = out[rx];
    y.sample_rate = tx.sample_rate;
    y.cp_lengths = tx.cp_lengths;
    y.samples.assign(n, {});
    for (int tap = 0; tap < real.num_taps; ++tap) {
      const int d = real.tap_delays[tap];
      const Cplx* g = &real.gain(tap, rx, 0);
      for (int i = d; i < n; ++i) y.samples[i] += g[i] * tx.samples[i - d];
    }
  }
  return out;
}

NoisyWaveform add_awgn(const Waveform& rx, double snr_db, std::mt19937_64& rng) {
  if (rx.samples.empty()) throw SizeError("cannot add noise to an empty waveform");
  double power = 0.0;
  for (const auto& s : rx.samples) power += std::norm(s);
  power /= static_cast<double>(rx.samples.size());
  if (power <= 0.0) power = 1.0;
  NoisyWaveform out{rx, power / std::pow(10.0, snr_db / 10.0)};
  std::normal_distribution<double> gauss(0.0, std::sqrt(out.noise_var / 2.0));
  for (auto& s : out.waveform.samples) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    s += Cplx(re, im);
  }
  return out;
}

}  // namespace uavnr
