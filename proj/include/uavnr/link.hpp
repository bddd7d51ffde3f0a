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
#include <random>
#include <span>
#include <vector>

#include "uavnr/channel.hpp"
#include "uavnr/image.hpp"
#include "uavnr/ldpc.hpp"
#include "uavnr/phy_tx.hpp"
#include "uavnr/types.hpp"

namespace uavnr {

/// PUSCH link parameters. Defaults: rate 600/1024, normal CP, 1 tx / 2 rx,
/// mapping type A, FDD, 52 PRB at 15 kHz (10 MHz), 64-QAM, CDL-A with 30 ns
/// delay spread.
struct LinkConfig {
  double code_rate = 600.0 / 1024.0;
  int n_tx = 1;
  int n_rx = 2;
  int num_prb = 52;
  double scs_hz = 15e3;
  double bandwidth_hz = 10e6;
  int bits_per_symbol = 6;
  double delay_spread = 30e-9;
  double snr_db = 20.0;
  double doppler_hz = 0.0;
  int max_harq_retx = 0;
  int ldpc_max_iter = ldpc::kDefaultMaxIterations;
  std::uint64_t rng_seed = 1;
  int scrambling_id = 0;

  /// Throws ConfigError.
  void validate() const;
  GridLayout layout() const;
  OfdmNumerology numerology() const;
};

inline constexpr double kMinSnrDb = -20.0;
inline constexpr double kMaxSnrDb = 60.0;

struct Capacity {
  int G = 0;  // coded bits per slot
  int A = 0;  // info bits per transport block
};

/// G = data REs * Qm. A is the largest multiple of 8 with A + CRC within
/// floor(G * R) whose code-block split is even and liftable.
Capacity compute_capacity(const LinkConfig& cfg);

struct LinkReport {
  std::vector<bool> crc_pass;
  std::vector<int> retransmissions;
  double bler = 0.0;
  std::uint64_t bit_errors = 0;
  std::int64_t slots = 0;
};

struct LinkResult {
  ImagePayload received;
  LinkReport report;
};

/// Stop-and-wait uplink: one transport block per slot, the channel evolves
/// continuously across slots.
class UplinkSimulator {
 public:
  explicit UplinkSimulator(const LinkConfig& cfg);

  struct BlockOutcome {
    Bits bits;  // A decoded bits, delivered even when the CRC failed
    bool crc_ok = false;
    int retransmissions = 0;
  };

  const LinkConfig& config() const { return cfg_; }
  const Capacity& capacity() const { return capacity_; }
  const ldpc::TbCodingPlan& plan() const { return plan_; }
  std::int64_t slots_used() const { return slot_; }

  /// Sends one transport block of A bits with up to max_harq_retx
  /// retransmissions, combining LLRs across attempts.
  BlockOutcome transmit_block(std::span<const std::uint8_t> tb_bits);

  /// One slot through modulation, channel, noise, equalization and
  /// demapping. Returns G LLRs.
  LlrVec run_slot(std::span<const std::uint8_t> coded_bits);

 private:
  LinkConfig cfg_;
  Capacity capacity_;
  ldpc::TbCodingPlan plan_;
  GridLayout layout_;
  OfdmNumerology numerology_;
  FadingChannel channel_;
  std::mt19937_64 noise_rng_;
  std::int64_t slot_ = 0;
};

/// Whole-image transfer; deterministic for a given (image, cfg).
LinkResult transmit_image(const ImagePayload& image, const LinkConfig& cfg);

}  // namespace uavnr
