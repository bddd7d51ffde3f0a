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

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "uavnr/channel.hpp"
#include "uavnr/errors.hpp"

using namespace uavnr;

namespace {

ChannelConfig single_tap(double doppler, std::uint64_t seed, int rx = 1) {
  ChannelConfig c;
  c.profile = {{0.0, 0.0}};
  c.max_doppler = doppler;
  c.num_rx = rx;
  c.rng_seed = seed;
  return c;
}

Waveform random_waveform(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  Waveform w;
  w.samples.resize(n);
  for (auto& s : w.samples) s = Cplx(nd(rng), nd(rng));
  return w;
}

ChannelRealization manual_realization(std::vector<int> delays, std::vector<Cplx> gains, int n) {
  ChannelRealization r;
  r.num_taps = static_cast<int>(delays.size());
  r.num_rx = 1;
  r.num_samples = n;
  r.tap_delays = delays;
  for (auto g : gains) r.tap_gains.insert(r.tap_gains.end(), n, g);
  return r;
}

}  // namespace

TEST_CASE("channel: CDL-A table") {
  const auto p = cdl_a_profile();
  REQUIRE(p.size() == 23);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i].normalized_delay == test::kRefDelay[i]);
    CHECK(p[i].power_db == test::kRefPower[i]);
  }
  const ChannelConfig cfg;
  const auto pw = cfg.tap_powers();
  double sum = 0, ref_sum = 0;
  for (double db : test::kRefPower) ref_sum += std::pow(10.0, db / 10);
  for (std::size_t i = 0; i < pw.size(); ++i) {
    sum += pw[i];
    CHECK(pw[i] == doctest::Approx(std::pow(10.0, test::kRefPower[i] / 10) / ref_sum));
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  const auto d = cfg.tap_delays();
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d[i] == static_cast<int>(std::lround(test::kRefDelay[i] * 30e-9 * 15.36e6)));
  }
  CHECK(d.back() == 4);
}

TEST_CASE("channel: config validation") {
  ChannelConfig c;
  c.max_doppler = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ChannelConfig{};
  c.num_rx = 0;
  CHECK_THROWS_AS(FadingChannel{c}, ConfigError);
  c = ChannelConfig{};
  c.profile.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("channel: per-tap mean power matches the table") {
  // Ensemble over seeds; instants 10 ms apart are nearly uncorrelated at 300 Hz.
  ChannelConfig cfg;
  cfg.max_doppler = 300;
  const auto want = cfg.tap_powers();
  std::vector<double> acc(want.size(), 0.0);
  std::size_t count = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    cfg.rng_seed = s;
    const FadingChannel ch(cfg);
    for (int k = 0; k < 10; ++k) {
      for (int t = 0; t < ch.num_taps(); ++t) {
        for (int rx = 0; rx < cfg.num_rx; ++rx) acc[t] += std::norm(ch.tap_gain(t, rx, k * 153600));
      }
      count += cfg.num_rx;
    }
  }
  for (std::size_t t = 0; t < want.size(); ++t) {
    CAPTURE(t);
    CHECK(std::abs(acc[t] / count / want[t] - 1.0) < 0.05);
  }
}

TEST_CASE("channel: autocorrelation follows J0 at 300 Hz") {
  const double fd = 300, fs = 15.36e6;
  const std::vector<double> lags_s = {0.0, 2e-4, 5e-4, 1e-3, 1.5e-3, 2e-3, 3e-3, 4e-3};
  std::vector<Cplx> acc(lags_s.size());
  double power = 0;
  std::mt19937_64 rng(1);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    FadingChannel ch(single_tap(fd, s));
    for (int k = 0; k < 4; ++k) {
      const auto t0 = static_cast<std::int64_t>(rng() % 1000000);
      const Cplx g0 = ch.tap_gain(0, 0, t0);
      power += std::norm(g0);
      for (std::size_t i = 0; i < lags_s.size(); ++i) {
        const auto lag = static_cast<std::int64_t>(std::llround(lags_s[i] * fs));
        acc[i] += ch.tap_gain(0, 0, t0 + lag) * std::conj(g0);
      }
    }
  }
  for (std::size_t i = 0; i < lags_s.size(); ++i) {
    const double j0 = std::cyl_bessel_j(0.0, 2 * std::numbers::pi * fd * lags_s[i]);
    CAPTURE(lags_s[i]);
    CHECK(std::abs(acc[i].real() / power - j0) < 0.05);
    CHECK(std::abs(acc[i].imag() / power) < 0.05);
  }
}

TEST_CASE("channel: realize agrees with the exact tap gain") {
  ChannelConfig cfg;
  cfg.max_doppler = 750;
  cfg.rng_seed = 9;
  const FadingChannel ch(cfg);
  const auto r = ch.realize(123456, 20000);
  double err = 0;
  for (int t = 0; t < r.num_taps; ++t) {
    for (int rx = 0; rx < r.num_rx; ++rx) {
      for (int n = 0; n < r.num_samples; n += 7) {
        err = std::max(err, std::abs(r.gain(t, rx, n) - ch.tap_gain(t, rx, 123456 + n)));
      }
    }
  }
  CHECK(err < 1e-5);
}

TEST_CASE("channel: zero Doppler is constant in time") {
  ChannelConfig cfg;
  cfg.rng_seed = 4;
  const FadingChannel ch(cfg);
  const auto r = ch.realize_slot(3);
  for (int t = 0; t < r.num_taps; ++t) {
    for (int rx = 0; rx < r.num_rx; ++rx) {
      for (int n = 1; n < r.num_samples; ++n) CHECK_EQ(r.gain(t, rx, n), r.gain(t, rx, 0));
    }
  }
  const auto& fr = r.freq_response;
  double diff = 0;
  for (int rx = 0; rx < fr.num_rx; ++rx) {
    for (int l = 1; l < fr.num_symbols; ++l) {
      for (int k = 0; k < fr.num_subcarriers; ++k) {
        diff = std::max(diff, std::abs(fr.at(k, l, rx) - fr.at(k, 0, rx)));
      }
    }
  }
  CHECK(diff == 0.0);
}

TEST_CASE("channel: frequency response is the tap transform at mid-window") {
  ChannelConfig cfg;
  cfg.max_doppler = 500;
  cfg.rng_seed = 5;
  const OfdmNumerology num;
  const auto r = FadingChannel(cfg).realize_slot(2, num);
  for (int l : {0, 6, 13}) {
    const int t = num.symbol_start(l) + num.cp_length(l) + 512;
    for (int rx = 0; rx < 2; ++rx) {
      for (int k : {0, 200, 311, 312, 623}) {
        Cplx h = 0;
        for (int tap = 0; tap < r.num_taps; ++tap) {
          h += r.gain(tap, rx, t) *
               std::polar(1.0, -2 * std::numbers::pi * (k - 312) * r.tap_delays[tap] / 1024.0);
        }
        CHECK(std::abs(h - r.freq_response.at(k, l, rx)) < 1e-9);
      }
    }
  }
  CHECK(r.start_sample == 2 * 15360);
}

TEST_CASE("channel: seeded and reproducible") {
  ChannelConfig cfg;
  cfg.max_doppler = 300;
  cfg.rng_seed = 77;
  const auto a = realize_channel(cfg, 2000);
  const auto b = realize_channel(cfg, 2000);
  CHECK(a.tap_gains == b.tap_gains);
  cfg.rng_seed = 78;
  CHECK(realize_channel(cfg, 2000).tap_gains != a.tap_gains);
}

TEST_CASE("channel: antennas fade independently") {
  Cplx cross = 0;
  double p0 = 0, p1 = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    FadingChannel ch(single_tap(300, s, 2));
    const Cplx a = ch.tap_gain(0, 0, 1000), b = ch.tap_gain(0, 1, 1000);
    cross += a * std::conj(b);
    p0 += std::norm(a);
    p1 += std::norm(b);
  }
  CHECK(std::abs(cross) / std::sqrt(p0 * p1) < 0.1);
}

TEST_CASE("apply_channel: identity, impulse response, linearity") {
  std::mt19937_64 rng(6);
  const auto x = random_waveform(3000, rng);
  CHECK(apply_channel(x, manual_realization({0}, {1.0}, 3000))[0].samples == x.samples);

  Waveform imp;
  imp.samples.assign(50, 0.0);
  imp.samples[0] = 1.0;
  const Cplx g1(0.3, -0.4), g2(-0.1, 0.7);
  const auto y = apply_channel(imp, manual_realization({0, 3}, {g1, g2}, 50))[0].samples;
  for (int i = 0; i < 50; ++i) CHECK(y[i] == (i == 0 ? g1 : i == 3 ? g2 : Cplx(0)));

  ChannelConfig cfg;
  cfg.max_doppler = 400;
  cfg.rng_seed = 3;
  const auto real = realize_channel(cfg, 15360);
  const auto a = random_waveform(15360, rng), b = random_waveform(15360, rng);
  const Cplx ca(0.7, 0.2), cb(-1.3, 0.5);
  Waveform mix;
  mix.samples.resize(15360);
  for (int i = 0; i < 15360; ++i) mix.samples[i] = ca * a.samples[i] + cb * b.samples[i];
  const auto ya = apply_channel(a, real), yb = apply_channel(b, real), ym = apply_channel(mix, real);
  REQUIRE(ym.size() == 2);
  double err = 0;
  for (int rx = 0; rx < 2; ++rx) {
    for (int i = 0; i < 15360; ++i) {
      err = std::max(err, std::abs(ym[rx].samples[i] - ca * ya[rx].samples[i] - cb * yb[rx].samples[i]));
    }
  }
  CHECK(err < 1e-9);
  CHECK_THROWS_AS(apply_channel(random_waveform(15361, rng), real), SizeError);
}

TEST_CASE("awgn: measured SNR within 0.1 dB") {
  std::mt19937_64 rng(7);
  auto x = random_waveform(1000000, rng);
  for (auto& s : x.samples) s *= 3.0;
  for (double snr : {1.0, 10.0, 20.0}) {
    std::mt19937_64 nrng(static_cast<std::uint64_t>(snr));
    const auto y = add_awgn(x, snr, nrng);
    double ps = 0, pn = 0;
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
      ps += std::norm(x.samples[i]);
      pn += std::norm(y.waveform.samples[i] - x.samples[i]);
    }
    CHECK(std::abs(10 * std::log10(ps / pn) - snr) < 0.1);
    CHECK(y.noise_var == doctest::Approx(ps / x.samples.size() / std::pow(10, snr / 10)));
  }
}

TEST_CASE("awgn: silent input uses unit reference power") {
  Waveform z;
  z.samples.assign(1000, 0.0);
  std::mt19937_64 rng(8);
  CHECK(add_awgn(z, 10, rng).noise_var == doctest::Approx(0.1));
  CHECK_THROWS_AS(add_awgn(Waveform{}, 10, rng), SizeError);
}

TEST_CASE("awgn: same seed, same noise") {
  std::mt19937_64 rng(9);
  const auto x = random_waveform(1000, rng);
  std::mt19937_64 a(42), b(42);
  CHECK(add_awgn(x, 5, a).waveform.samples == add_awgn(x, 5, b).waveform.samples);
}
