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

#include "uavnr/link.hpp"

#include <cmath>
#include <string>

#include "uavnr/errors.hpp"
#include "uavnr/phy_rx.hpp"
#include "uavnr/transport.hpp"

namespace uavnr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

ChannelConfig channel_config(const LinkConfig& cfg) {
  ChannelConfig ch;
  ch.delay_spread = cfg.delay_spread;
  ch.max_doppler = cfg.doppler_hz;
  ch.num_rx = cfg.n_rx;
  ch.snr_db = cfg.snr_db;
  ch.rng_seed = splitmix64(cfg.rng_seed ^ 0x6368616e6e656cull);
  ch.sample_rate = cfg.numerology().sample_rate;
  return ch;
}

}  // namespace

void LinkConfig::validate() const {
  if (!(code_rate > 0.0 && code_rate < 1.0)) throw ConfigError("code_rate must be in (0,1)");
  if (n_tx != 1) throw ConfigError("only a single transmit antenna is supported");
  if (n_rx < 1) throw ConfigError("n_rx must be >= 1");
  if (num_prb < 1 || num_prb * 12 >= 1024) throw ConfigError("num_prb must be in 1..85");
  if (scs_hz != 15e3) throw ConfigError("only 15 kHz subcarrier spacing is supported");
  if (bits_per_symbol < 1 || bits_per_symbol > 8) throw ConfigError("bits_per_symbol out of range");
  if (delay_spread < 0.0) throw ConfigError("delay_spread must be >= 0");
  if (!(snr_db >= kMinSnrDb && snr_db <= kMaxSnrDb)) {
    throw ConfigError("snr_db must be within [" + std::to_string(kMinSnrDb) + ", " +
                      std::to_string(kMaxSnrDb) + "]");
  }
  if (!(doppler_hz >= 0.0)) throw ConfigError("doppler_hz must be >= 0");
  if (max_harq_retx < 0) throw ConfigError("max_harq_retx must be >= 0");
  if (ldpc_max_iter < 1) throw ConfigError("ldpc_max_iter must be >= 1");
}

GridLayout LinkConfig::layout() const {
  GridLayout l;
  l.num_subcarriers = 12 * num_prb;
  return l;
}

OfdmNumerology LinkConfig::numerology() const {
  OfdmNumerology n;
  n.num_subcarriers = 12 * num_prb;
  return n;
}

Capacity compute_capacity(const LinkConfig& cfg) {
  Capacity cap;
  cap.G = cfg.layout().data_re_count() * cfg.bits_per_symbol;
  const int target = static_cast<int>(std::floor(cap.G * cfg.code_rate));
  for (int a = (target / 8) * 8; a >= 8; a -= 8) {
    const int crc = a > 3824 ? 24 : 16;
    if (a + crc > target) continue;
    try {
      const auto plan = ldpc::plan_transport_block(a, cfg.code_rate, cap.G, cfg.bits_per_symbol);
      // Byte-aligned segments, as the TBS tables guarantee.
      if (plan.C > 1 && plan.B % (8 * plan.C) != 0) continue;
      cap.A = a;
      return cap;
    } catch (const UnsupportedBlockSize&) {
      continue;
    }
  }
  throw ConfigError("no transport block size fits the allocation");
}

UplinkSimulator::UplinkSimulator(const LinkConfig& cfg)
    : cfg_(cfg),
      capacity_((cfg.validate(), compute_capacity(cfg))),
      plan_(ldpc::plan_transport_block(capacity_.A, cfg.code_rate, capacity_.G,
                                       cfg.bits_per_symbol)),
      layout_(cfg.layout()),
      numerology_(cfg.numerology()),
      channel_(channel_config(cfg)),
      noise_rng_(splitmix64(cfg.rng_seed ^ 0x6e6f697365ull)) {
  if (cfg_.bits_per_symbol != kQam64Bits) {
    throw ConfigError("the transmitter implements 64-QAM only");
  }
}

LlrVec UplinkSimulator::run_slot(std::span<const std::uint8_t> coded_bits) {
  if (static_cast<int>(coded_bits.size()) != capacity_.G) {
    throw SizeError("slot carries G=" + std::to_string(capacity_.G) + " coded bits");
  }
  const int slots_per_frame = 10;
  const auto dmrs = generate_dmrs(static_cast<int>(slot_ % slots_per_frame),
                                  cfg_.scrambling_id, layout_);
  const auto grid = map_to_grid(qam64_map(coded_bits), dmrs, layout_);
  const auto tx = ofdm_modulate(grid, numerology_);

  const auto real = channel_.realize_slot(slot_, numerology_);
  ++slot_;
  const auto faded = apply_channel(tx, real);

  // Each antenna has its own N0. Whitening grid and response by 1/sqrt(N0_i)
  // turns the combiner into the exact MMSE solution with unit noise.
  std::vector<Waveform> noisy;
  std::vector<double> noise_var;
  for (const auto& w : faded) {
    auto n = add_awgn(w, cfg_.snr_db, noise_rng_);
    noise_var.push_back(n.noise_var);
    noisy.push_back(std::move(n.waveform));
  }

  auto grids = ofdm_demodulate(noisy, numerology_);
  FrequencyResponse h = real.freq_response;
  for (int rx = 0; rx < h.num_rx; ++rx) {
    const double w = 1.0 / std::sqrt(noise_var[rx]);
    for (auto& v : grids[rx].re) v *= w;
    for (int l = 0; l < h.num_symbols; ++l) {
      for (int k = 0; k < h.num_subcarriers; ++k) h.at(k, l, rx) *= w;
    }
  }
  const auto eq = mmse_equalize(grids, h, 1.0, layout_);
  return soft_demap(eq);
}

UplinkSimulator::BlockOutcome UplinkSimulator::transmit_block(
    std::span<const std::uint8_t> tb_bits) {
  const auto blocks = ldpc::segment_code_blocks(tb_bits, plan_);
  std::vector<Bits> buffers;
  buffers.reserve(blocks.size());
  for (const auto& cb : blocks) buffers.push_back(ldpc::encode(cb, plan_.block));

  std::vector<LlrVec> soft(blocks.size());
  BlockOutcome out;
  for (int attempt = 0; attempt <= cfg_.max_harq_retx; ++attempt) {
    const int rv = ldpc::kRvSequence[attempt % ldpc::kRvSequence.size()];
    Bits coded;
    coded.reserve(capacity_.G);
    std::vector<ldpc::LdpcConfig> block_cfg(blocks.size(), plan_.block);
    for (std::size_t r = 0; r < blocks.size(); ++r) {
      block_cfg[r].E = plan_.E[r];
      block_cfg[r].rv = rv;
      const auto e = ldpc::rate_match(buffers[r], block_cfg[r]);
      coded.insert(coded.end(), e.begin(), e.end());
    }
    const LlrVec llrs = run_slot(coded);

    std::vector<Bits> decoded(blocks.size());
    std::size_t offset = 0;
    for (std::size_t r = 0; r < blocks.size(); ++r) {
      const auto e = std::span(llrs).subspan(offset, block_cfg[r].E);
      offset += block_cfg[r].E;
      ldpc::combine_soft(soft[r], ldpc::rate_recover(e, block_cfg[r]), block_cfg[r]);
      decoded[r] = ldpc::decode(soft[r], block_cfg[r], cfg_.ldpc_max_iter).bits;
    }
    auto tb = ldpc::desegment(decoded, plan_);
    out.bits = std::move(tb.tb_bits);
    out.crc_ok = tb.crc_ok;
    out.retransmissions = attempt;
    if (out.crc_ok) break;
  }
  return out;
}

LinkResult transmit_image(const ImagePayload& image, const LinkConfig& cfg) {
  const Bits payload = serialize_image(image);
  UplinkSimulator sim(cfg);
  auto tbs = segment_payload(payload, static_cast<std::size_t>(sim.capacity().A));

  LinkResult result;
  auto& rep = result.report;
  std::size_t failed = 0;
  for (auto& tb : tbs) {
    auto outcome = sim.transmit_block(tb.info_bits);
    const std::size_t valid = tb.info_bits.size() - tb.pad_count;
    for (std::size_t i = 0; i < valid; ++i) {
      rep.bit_errors += outcome.bits[i] != tb.info_bits[i];
    }
    rep.crc_pass.push_back(outcome.crc_ok);
    rep.retransmissions.push_back(outcome.retransmissions);
    failed += outcome.crc_ok ? 0 : 1;
    tb.info_bits = std::move(outcome.bits);
  }
  rep.bler = static_cast<double>(failed) / static_cast<double>(tbs.size());
  rep.slots = sim.slots_used();
  result.received = deserialize_image(desegment_payload(tbs, payload.size()), image.width,
                                      image.height, image.channels);
  return result;
}

}  // namespace uavnr
