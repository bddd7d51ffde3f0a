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

// NR uplink shared channel coding: transport-block CRC, code-block
// segmentation, quasi-cyclic LDPC encoding, circular-buffer rate matching and
// layered normalized min-sum decoding (TS 38.212 sections 5.1 to 5.4.2).

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "uavnr/crc.hpp"
#include "uavnr/types.hpp"

namespace uavnr::ldpc {

enum class BaseGraph { BG1 = 1, BG2 = 2 };

/// LLR assigned to filler positions during rate recovery.
inline constexpr Llr kFillerLlr = 1.0e6f;

/// Redundancy version order used for successive HARQ attempts.
inline constexpr std::array<int, 4> kRvSequence = {0, 2, 3, 1};

inline constexpr int kDefaultMaxIterations = 20;
inline constexpr float kMinSumScale = 0.75f;

/// Lifted parity-check matrix H for one (base graph, Zc) pair.
class LiftedCode {
 public:
  struct Edge {
    int col;    // base-graph column
    int shift;  // cyclic shift already reduced mod Zc
  };

  LiftedCode(BaseGraph bg, int lifting_size);

  BaseGraph base_graph() const { return bg_; }
  int lifting_size() const { return z_; }
  int set_index() const { return set_index_; }
  int base_rows() const { return static_cast<int>(rows_.size()); }
  int base_cols() const { return base_cols_; }
  /// Systematic base columns: 22 for BG1, 10 for BG2.
  int info_cols() const { return info_cols_; }
  const std::vector<Edge>& row(int r) const { return rows_[r]; }

  /// Number of unsatisfied parity checks for a full (base_cols*Zc) word.
  std::size_t syndrome_weight(std::span<const std::uint8_t> codeword) const;

 private:
  BaseGraph bg_;
  int z_;
  int set_index_;
  int base_cols_;
  int info_cols_;
  std::vector<std::vector<Edge>> rows_;
};

/// Shared, cached instance.
std::shared_ptr<const LiftedCode> lifted_code(BaseGraph bg, int lifting_size);

/// Index i_ls of the lifting-size set containing Zc, or -1.
int lifting_set_index(int lifting_size);

/// BG2 when A <= 292, A <= 3824 with R <= 0.67, or R <= 0.25.
BaseGraph select_base_graph(int tb_size, double code_rate);

struct LdpcConfig {
  BaseGraph base_graph = BaseGraph::BG1;
  int lifting_size = 0;  // Zc
  int K = 0;             // bits per code block including filler
  int K_prime = 0;       // info + CRC bits per code block
  int N = 0;             // circular buffer length, 66 Zc or 50 Zc
  double target_code_rate = 600.0 / 1024.0;
  int E = 0;   // rate-matched length
  int rv = 0;  // redundancy version 0..3

  int filler_count() const { return K - K_prime; }
  /// First filler position in circular-buffer coordinates.
  int filler_begin_in_buffer() const { return K_prime - 2 * lifting_size; }
  /// Start offset k0 of the redundancy version.
  int rv_offset() const;
  /// Smallest-Zc config for K' code-block bits; B (TB + CRC) picks the BG2
  /// systematic column count. Throws UnsupportedBlockSize.
  static LdpcConfig for_block(BaseGraph bg, int k_prime, int tb_crc_bits_B);
};

/// One code block: K bits, the tail [K', K) are zero filler bits.
struct CodeBlock {
  Bits bits;
  int filler_begin = 0;
  int filler_count = 0;
};

/// Coding layout of a transport block of A info bits.
struct TbCodingPlan {
  int A = 0;
  CrcType tb_crc = CrcType::Crc24A;
  int B = 0;                // A + TB CRC
  int C = 1;                // code blocks
  int cb_crc_length = 0;    // 24 when C > 1
  LdpcConfig block;         // E and rv left for the caller
  std::vector<int> E;       // rate-matched length per code block
  // Non-fatal notes, e.g. E too short to carry the transmitted systematic bits.
  std::vector<std::string> warnings;

  int payload_bits_per_block() const { return block.K_prime - cb_crc_length; }
};

/// Segmentation per TS 38.212 5.2.2 plus per-block E for G coded bits.
/// Throws UnsupportedBlockSize when K' cannot be lifted.
TbCodingPlan plan_transport_block(int tb_size, double code_rate, int coded_bits,
                                  int bits_per_symbol);

/// Appends TB CRC and splits into code blocks with CRC24B when C > 1.
std::vector<CodeBlock> segment_code_blocks(std::span<const std::uint8_t> tb_bits,
                                           const TbCodingPlan& plan);

/// Systematic QC-LDPC encoding. Returns the circular buffer d of length N,
/// i.e. the full codeword without its first 2 Zc systematic bits.
Bits encode(const CodeBlock& block, const LdpcConfig& cfg);

/// Full un-punctured codeword (first 2 Zc info bits followed by d).
Bits full_codeword(const CodeBlock& block, std::span<const std::uint8_t> buffer,
                   const LdpcConfig& cfg);

/// CRC attachment, segmentation and encoding of one transport block.
std::vector<Bits> segment_and_encode(std::span<const std::uint8_t> tb_bits,
                                     const TbCodingPlan& plan);

/// Circular-buffer bit selection of E bits starting at k0(rv), skipping filler.
Bits rate_match(std::span<const std::uint8_t> buffer, const LdpcConfig& cfg);

/// Circular-buffer positions visited by rate_match, in output order.
std::vector<int> rate_match_positions(const LdpcConfig& cfg);

/// Inverse of rate_match on soft values: repeated positions are summed,
/// unsent positions are 0 and filler positions hold kFillerLlr.
LlrVec rate_recover(std::span<const Llr> llrs, const LdpcConfig& cfg);

/// Adds a rate-recovered attempt into a HARQ soft buffer (filler kept fixed).
void combine_soft(LlrVec& soft_buffer, std::span<const Llr> recovered,
                  const LdpcConfig& cfg);

struct DecodeResult {
  Bits bits;  // K systematic bits, CRC and filler included
  bool parity_ok = false;
  int iterations = 0;
};

/// Layered normalized min-sum decoding of N buffer LLRs.
DecodeResult decode(std::span<const Llr> llrs, const LdpcConfig& cfg,
                    int max_iterations = kDefaultMaxIterations);

struct TbDecodeResult {
  Bits tb_bits;  // A bits, delivered whether or not the CRC passed
  bool crc_ok = false;
  std::vector<bool> block_crc_ok;
};

/// Strips code-block CRCs and filler, concatenates and checks the TB CRC.
TbDecodeResult desegment(std::span<const Bits> decoded_blocks,
                         const TbCodingPlan& plan);

}  // namespace uavnr::ldpc
