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

// Tapped-delay-line fading channel built from the CDL-A cluster table of
// TR 38.901 (Table 7.7.1-1). Each cluster becomes one Rayleigh tap per receive
// antenna; the angular domain is not modelled.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "uavnr/phy_tx.hpp"
#include "uavnr/types.hpp"

namespace uavnr {

struct CdlCluster {
  double normalized_delay;
  double power_db;
};

/// The 23 CDL-A clusters.
std::span<const CdlCluster> cdl_a_profile();

struct ChannelConfig {
  std::vector<CdlCluster> profile{cdl_a_profile().begin(), cdl_a_profile().end()};
  double delay_spread = 30e-9;
  double max_doppler = 0.0;  // Hz
  int num_rx = 2;
  double snr_db = 20.0;
  std::uint64_t rng_seed = 0;
  double sample_rate = 15.36e6;
  int num_sinusoids = 32;

  /// Throws ConfigError.
  void validate() const;
  /// Linear tap powers normalized to unit sum.
  std::vector<double> tap_powers() const;
  /// Tap delays in samples (rounded to the nearest sample).
  std::vector<int> tap_delays() const;
};

/// Per-RE channel seen by the demodulator: values[(rx*symbols + l)*sc + k].
struct FrequencyResponse {
  int num_subcarriers = 0;
  int num_symbols = 0;
  int num_rx = 0;
  CVec values;

  const Cplx& at(int k, int l, int rx) const {
    return values[(static_cast<std::size_t>(rx) * num_symbols + l) * num_subcarriers + k];
  }
  Cplx& at(int k, int l, int rx) {
    return values[(static_cast<std::size_t>(rx) * num_symbols + l) * num_subcarriers + k];
  }
};

struct ChannelRealization {
  int num_taps = 0;
  int num_rx = 0;
  std::int64_t start_sample = 0;
  int num_samples = 0;
  std::vector<int> tap_delays;
  CVec tap_gains;  // [(tap*num_rx + rx)*num_samples + n]
  FrequencyResponse freq_response;

  const Cplx& gain(int tap, int rx, int n) const {
    return tap_gains[(static_cast<std::size_t>(tap) * num_rx + rx) * num_samples + n];
  }
};

/// Seeded sum-of-sinusoids Rayleigh processes, one per (tap, rx antenna).
/// Sinusoid arrival angles are stratified over the circle with a random
/// offset inside each stratum; phases are uniform. The ensemble
/// autocorrelation of each tap is P * J0(2 pi f_d tau).
class FadingChannel {
 public:
  explicit FadingChannel(ChannelConfig cfg);

  const ChannelConfig& config() const { return cfg_; }
  int num_taps() const { return static_cast<int>(powers_.size()); }

  Cplx tap_gain(int tap, int rx, std::int64_t sample) const;

  /// Tap gains for [start_sample, start_sample + num_samples).
  ChannelRealization realize(std::int64_t start_sample, int num_samples) const;

  /// One slot: tap gains plus the per-RE response evaluated at the middle of
  /// each symbol's FFT window.
  ChannelRealization realize_slot(std::int64_t slot_index,
                                  const OfdmNumerology& num = {}) const;

 private:
  struct Sinusoid {
    double omega;  // rad per sample
    double phase;
  };
  const std::vector<Sinusoid>& sinusoids(int tap, int rx) const {
    return sinusoids_[static_cast<std::size_t>(tap) * cfg_.num_rx + rx];
  }

  ChannelConfig cfg_;
  std::vector<double> powers_;
  std::vector<int> delays_;
  std::vector<std::vector<Sinusoid>> sinusoids_;
};

/// Realization of the first duration_samples samples.
ChannelRealization realize_channel(const ChannelConfig& cfg, int duration_samples);

/// Fills realization.freq_response for a slot starting at start_sample.
void compute_frequency_response(ChannelRealization& real, const OfdmNumerology& num);

/// Time-varying tapped-delay-line convolution, one output per rx antenna.
/// Throws SizeError when the realization is shorter than the waveform.
std::vector<Waveform> apply_channel(const Waveform& tx, const ChannelRealization& real);

struct NoisyWaveform {
  Waveform waveform;
  double noise_var = 0.0;  // N0 per complex sample
};

/// Complex AWGN with N0 = P_rx / 10^(snr/10), P_rx the mean sample power of
/// this waveform (unit power when the input is silent).
NoisyWaveform add_awgn(const Waveform& rx, double snr_db, std::mt19937_64& rng);

}  // namespace uavnr
