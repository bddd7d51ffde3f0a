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

#include "uavnr/ldpc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "ldpc_base_graphs.hpp"
#include "uavnr/errors.hpp"

namespace uavnr::ldpc {

namespace {

// TS 38.212 Table 5.3.2-1, one row per set index i_ls.
const std::vector<std::vector<int>> kLiftingSets = {
    {2, 4, 8, 16, 32, 64, 128, 256},
    {3, 6, 12, 24, 48, 96, 192, 384},
    {5, 10, 20, 40, 80, 160, 320},
    {7, 14, 28, 56, 112, 224},
    {9, 18, 36, 72, 144, 288},
    {11, 22, 44, 88, 176, 352},
    {13, 26, 52, 104, 208},
    {15, 30, 60, 120, 240},
};

constexpr int kMaxLifting = 384;
constexpr int kMaxTbSize = 1277992;

int max_code_block(BaseGraph bg) { return bg == BaseGraph::BG1 ? 8448 : 3840; }

int systematic_columns(BaseGraph bg, int tb_crc_bits_B) {
  if (bg == BaseGraph::BG1) return 22;
  if (tb_crc_bits_B > 640) return 10;
  if (tb_crc_bits_B > 560) return 9;
  if (tb_crc_bits_B > 192) return 8;
  return 6;
}

}  // namespace

int lifting_set_index(int lifting_size) {
  for (std::size_t i = 0; i < kLiftingSets.size(); ++i) {
    if (std::ranges::find(kLiftingSets[i], lifting_size) != kLiftingSets[i].end()) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

LiftedCode::LiftedCode(BaseGraph bg, int lifting_size)
    : bg_(bg), z_(lifting_size), set_index_(lifting_set_index(lifting_size)) {
  if (set_index_ < 0) {
    throw UnsupportedBlockSize("Zc=" + std::to_string(lifting_size) +
                               " is not a standard lifting size");
  }
  const bool bg1 = bg == BaseGraph::BG1;
  base_cols_ = bg1 ? 68 : 52;
  info_cols_ = bg1 ? 22 : 10;
  rows_.resize(bg1 ? 46 : 42);
  auto add = [&](const auto& table) {
    for (const auto& e : table) {
      rows_[e.row].push_back({e.col, static_cast<int>(e.shift[set_index_] % z_)});
    }
  };
  if (bg1) {
    add(detail::kBG1Entries);
  } else {
    add(detail::kBG2Entries);
  }
}

std::size_t LiftedCode::syndrome_weight(std::span<const std::uint8_t> cw) const {
  if (cw.size() != static_cast<std::size_t>(base_cols_) * z_) {
    throw SizeError("codeword length does not match the lifted code");
  }
  std::size_t weight = 0;
  std::vector<std::uint8_t> acc(z_);
  for (const auto& edges : rows_) {
    std::ranges::fill(acc, 0);
    for (const auto& e : edges) {
      const std::uint8_t* col = cw.data() + static_cast<std::size_t>(e.col) * z_;
      for (int z = 0; z < z_; ++z) acc[z] ^= col[(z + e.shift) % z_];
    }
    weight += static_cast<std::size_t>(std::ranges::count(acc, 1));
  }
  return weight;
}

std::shared_ptr<const LiftedCode> lifted_code(BaseGraph bg, int lifting_size) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const LiftedCode>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{static_cast<int>(bg), lifting_size}];
  if (!slot) slot = std::make_shared<const LiftedCode>(bg, lifting_size);
  return slot;
}

BaseGraph select_base_graph(int tb_size, double code_rate) {
  if (tb_size <= 292 || (tb_size <= 3824 && code_rate <= 0.67) || code_rate <= 0.25) {
    return BaseGraph::BG2;
  }
  return BaseGraph::BG1;
}

int LdpcConfig::rv_offset() const {
  if (rv == 0) return 0;
  const bool bg1 = base_graph == BaseGraph::BG1;
  static constexpr int kBg1[] = {0, 17, 33, 56};
  static constexpr int kBg2[] = {0, 13, 25, 43};
  const int num = bg1 ? kBg1[rv] : kBg2[rv];
  const long den = (bg1 ? 66L : 50L) * lifting_size;
  return static_cast<int>((static_cast<long>(num) * N) / den) * lifting_size;
}

LdpcConfig LdpcConfig::for_block(BaseGraph bg, int k_prime, int tb_crc_bits_B) {
  const int kb = systematic_columns(bg, tb_crc_bits_B);
  int best = std::numeric_limits<int>::max();
  for (const auto& set : kLiftingSets) {
    for (int z : set) {
      if (kb * z >= k_prime && z < best) best = z;
    }
  }
  if (best > kMaxLifting) {
    throw UnsupportedBlockSize("no lifting size covers K'=" + std::to_string(k_prime));
  }
  LdpcConfig cfg;
  cfg.base_graph = bg;
  cfg.lifting_size = best;
  cfg.K_prime = k_prime;
  cfg.K = (bg == BaseGraph::BG1 ? 22 : 10) * best;
  cfg.N = (bg == BaseGraph::BG1 ? 66 : 50) * best;
  cfg.E = cfg.N - cfg.filler_count();
  return cfg;
}

TbCodingPlan plan_transport_block(int tb_size, double code_rate, int coded_bits,
                                  int bits_per_symbol) {
  if (tb_size <= 0 || tb_size > kMaxTbSize) {
    throw UnsupportedBlockSize("transport block size " + std::to_string(tb_size) +
                               " outside 1.." + std::to_string(kMaxTbSize));
  }
  if (bits_per_symbol <= 0 || coded_bits <= 0 || coded_bits % bits_per_symbol != 0) {
    throw SizeError("coded bit budget must be a positive multiple of Qm");
  }
  TbCodingPlan plan;
  plan.A = tb_size;
  plan.tb_crc = tb_size > 3824 ? CrcType::Crc24A : CrcType::Crc16;
  plan.B = tb_size + crc_length(plan.tb_crc);
  const BaseGraph bg = select_base_graph(tb_size, code_rate);
  const int kcb = max_code_block(bg);
  int b_prime = plan.B;
  if (plan.B > kcb) {
    plan.cb_crc_length = 24;
    plan.C = (plan.B + (kcb - 24) - 1) / (kcb - 24);
    b_prime = plan.B + plan.C * 24;
  }
  if (b_prime % plan.C != 0) {
    throw UnsupportedBlockSize("B'=" + std::to_string(b_prime) +
                               " does not split evenly into " + std::to_string(plan.C) +
                               " code blocks");
  }
  plan.block = LdpcConfig::for_block(bg, b_prime / plan.C, plan.B);
  plan.block.target_code_rate = code_rate;

  const int symbols = coded_bits / bits_per_symbol;
  const int low = symbols / plan.C;
  const int split = plan.C - symbols % plan.C;
  plan.E.resize(plan.C);
  for (int r = 0; r < plan.C; ++r) {
    plan.E[r] = bits_per_symbol * (r < split ? low : low + 1);
  }
  const int self_decodable = plan.block.K_prime - 2 * plan.block.lifting_size;
  if (plan.E.front() < self_decodable) {
    plan.warnings.push_back("E=" + std::to_string(plan.E.front()) +
                            " is below the self-decodable length " +
                            std::to_string(self_decodable));
  }
  return plan;
}

std::vector<CodeBlock> segment_code_blocks(std::span<const std::uint8_t> tb_bits,
                                           const TbCodingPlan& plan) {
  if (static_cast<int>(tb_bits.size()) != plan.A) {
    throw SizeError("transport block has " + std::to_string(tb_bits.size()) +
                    " bits, plan expects " + std::to_string(plan.A));
  }
  const Bits with_crc = crc_attach(tb_bits, plan.tb_crc);
  const int per_block = plan.payload_bits_per_block();
  std::vector<CodeBlock> blocks(plan.C);
  for (int r = 0; r < plan.C; ++r) {
    auto seg = std::span(with_crc).subspan(static_cast<std::size_t>(r) * per_block, per_block);
    Bits bits = plan.C > 1 ? crc_attach(seg, CrcType::Crc24B) : Bits(seg.begin(), seg.end());
    bits.resize(plan.block.K, 0);
    blocks[r] = {std::move(bits), plan.block.K_prime, plan.block.filler_count()};
  }
  return blocks;
}

namespace {

// dst[z] ^= src[(z + shift) % Z]
inline void xor_shifted(std::uint8_t* dst, const std::uint8_t* src, int shift, int z) {
  const int head = z - shift;
  for (int i = 0; i < head; ++i) dst[i] ^= src[i + shift];
  for (int i = head; i < z; ++i) dst[i] ^= src[i - head];
}

}  // namespace

Bits encode(const CodeBlock& block, const LdpcConfig& cfg) {
  if (static_cast<int>(block.bits.size()) != cfg.K) {
    throw SizeError("code block has " + std::to_string(block.bits.size()) +
                    " bits, expected K=" + std::to_string(cfg.K));
  }
  const auto code = lifted_code(cfg.base_graph, cfg.lifting_size);
  const int z = cfg.lifting_size;
  const int kb = code->info_cols();
  Bits cw(static_cast<std::size_t>(code->base_cols()) * z, 0);
  std::copy(block.bits.begin(), block.bits.end(), cw.begin());
  auto col = [&](int c) { return cw.data() + static_cast<std::size_t>(c) * z; };

  // Core rows 0..3: lambda_r = systematic contribution.
  std::vector<Bits> lambda(4, Bits(z, 0));
  for (int r = 0; r < 4; ++r) {
    for (const auto& e : code->row(r)) {
      if (e.col < kb) xor_shifted(lambda[r].data(), col(e.col), e.shift, z);
    }
  }
  // Summing the four core rows cancels p1..p3 and the paired p0 shifts,
  // leaving P_b * p0 = sum(lambda).
  std::map<int, int> p0_shift_count;
  for (int r = 0; r < 4; ++r) {
    for (const auto& e : code->row(r)) {
      if (e.col == kb) ++p0_shift_count[e.shift];
    }
  }
  int unpaired = -1;
  for (auto [shift, count] : p0_shift_count) {
    if (count % 2 == 1) unpaired = shift;
  }
  if (unpaired < 0) throw Error("base graph core has no invertible p0 term");
  {
    Bits sum(z, 0);
    for (const auto& l : lambda) {
      for (int i = 0; i < z; ++i) sum[i] ^= l[i];
    }
    std::uint8_t* p0 = col(kb);
    for (int m = 0; m < z; ++m) p0[m] = sum[((m - unpaired) % z + z) % z];
  }
  // Remaining core parity by back substitution.
  std::vector<bool> known(4, false);
  known[0] = true;
  for (int pass = 0; pass < 4; ++pass) {
    for (int r = 0; r < 4; ++r) {
      int unknown = -1, unknown_shift = 0, missing = 0;
      for (const auto& e : code->row(r)) {
        if (e.col >= kb && e.col < kb + 4 && !known[e.col - kb]) {
          unknown = e.col;
          unknown_shift = e.shift;
          ++missing;
        }
      }
      if (missing != 1) continue;
      Bits acc = lambda[r];
      for (const auto& e : code->row(r)) {
        if (e.col >= kb && e.col < kb + 4 && e.col != unknown) {
          xor_shifted(acc.data(), col(e.col), e.shift, z);
        }
      }
      std::uint8_t* p = col(unknown);
      for (int i = 0; i < z; ++i) p[(i + unknown_shift) % z] = acc[i];
      known[unknown - kb] = true;
    }
  }
  // Extension rows: one degree-1 parity column each.
  for (int r = 4; r < code->base_rows(); ++r) {
    std::uint8_t* p = col(kb + r);
    for (const auto& e : code->row(r)) {
      if (e.col != kb + r) xor_shifted(p, col(e.col), e.shift, z);
    }
  }
  return Bits(cw.begin() + 2 * z, cw.end());
}

Bits full_codeword(const CodeBlock& block, std::span<const std::uint8_t> buffer,
                   const LdpcConfig& cfg) {
  const auto head = static_cast<std::size_t>(2 * cfg.lifting_size);
  Bits cw(block.bits.begin(), block.bits.begin() + head);
  cw.insert(cw.end(), buffer.begin(), buffer.end());
  return cw;
}

std::vector<Bits> segment_and_encode(std::span<const std::uint8_t> tb_bits,
                                     const TbCodingPlan& plan) {
  std::vector<Bits> out;
  for (const auto& cb : segment_code_blocks(tb_bits, plan)) {
    out.push_back(encode(cb, plan.block));
  }
  return out;
}

std::vector<int> rate_match_positions(const LdpcConfig& cfg) {
  if (cfg.E <= 0) throw SizeError("rate-matched length E must be positive");
  const int ncb = cfg.N;
  const int fill_lo = cfg.filler_begin_in_buffer();
  const int fill_hi = fill_lo + cfg.filler_count();
  std::vector<int> pos;
  pos.reserve(cfg.E);
  int j = cfg.rv_offset();
  while (static_cast<int>(pos.size()) < cfg.E) {
    const int idx = j % ncb;
    if (idx < fill_lo || idx >= fill_hi) pos.push_back(idx);
    ++j;
  }
  return pos;
}

Bits rate_match(std::span<const std::uint8_t> buffer, const LdpcConfig& cfg) {
  if (static_cast<int>(buffer.size()) != cfg.N) {
    throw SizeError("circular buffer length does not match N");
  }
  const auto pos = rate_match_positions(cfg);
  Bits out(pos.size());
  std::ranges::transform(pos, out.begin(), [&](int p) { return buffer[p]; });
  return out;
}

LlrVec rate_recover(std::span<const Llr> llrs, const LdpcConfig& cfg) {
  if (static_cast<int>(llrs.size()) != cfg.E) {
    throw SizeError("rate recovery got " + std::to_string(llrs.size()) +
                    " LLRs, expected E=" + std::to_string(cfg.E));
  }
  LlrVec out(cfg.N, 0.0f);
  const auto pos = rate_match_positions(cfg);
  for (std::size_t i = 0; i < pos.size(); ++i) out[pos[i]] += llrs[i];
  const int lo = cfg.filler_begin_in_buffer();
  std::fill(out.begin() + lo, out.begin() + lo + cfg.filler_count(), kFillerLlr);
  return out;
}

void combine_soft(LlrVec& soft_buffer, std::span<const Llr> recovered,
                  const LdpcConfig& cfg) {
  if (soft_buffer.empty()) soft_buffer.assign(cfg.N, 0.0f);
  if (static_cast<int>(soft_buffer.size()) != cfg.N ||
      static_cast<int>(recovered.size()) != cfg.N) {
    throw SizeError("soft buffer length does not match N");
  }
  for (int i = 0; i < cfg.N; ++i) soft_buffer[i] += recovered[i];
  const int lo = cfg.filler_begin_in_buffer();
  std::fill(soft_buffer.begin() + lo, soft_buffer.begin() + lo + cfg.filler_count(),
            kFillerLlr);
}

namespace {

// Check-node passes of the layered min-sum decoder over one contiguous run
// of a circulant. Sign and magnitude are handled as bit patterns so the loops
// vectorize without branches.
void check_gather(const float* __restrict c, const float* __restrict r, float* __restrict q,
                  std::uint32_t* __restrict sgn, float* __restrict min1, float* __restrict min2,
                  int* __restrict argmin, int n, int edge) {
  for (int i = 0; i < n; ++i) {
    const float v = c[i] - r[i];
    q[i] = v;
    const auto bits = std::bit_cast<std::uint32_t>(v);
    sgn[i] ^= bits & 0x80000000u;
    const float mag = std::bit_cast<float>(bits & 0x7fffffffu);
    const float m1 = min1[i];
    min2[i] = std::min(min2[i], std::max(m1, mag));
    const int lt = -static_cast<int>(mag < m1);
    argmin[i] = (edge & lt) | (argmin[i] & ~lt);
    min1[i] = std::min(m1, mag);
  }
}

void check_scatter(float* __restrict c, float* __restrict r, const float* __restrict q,
                   const std::uint32_t* __restrict sgn, const float* __restrict min1,
                   const float* __restrict min2, const int* __restrict argmin, int n, int edge) {
  for (int i = 0; i < n; ++i) {
    const auto own = static_cast<std::uint32_t>(-static_cast<int>(argmin[i] == edge));
    const std::uint32_t mag =
        (std::bit_cast<std::uint32_t>(min2[i]) & own) | (std::bit_cast<std::uint32_t>(min1[i]) & ~own);
    const std::uint32_t sign = (std::bit_cast<std::uint32_t>(q[i]) & 0x80000000u) ^ sgn[i];
    const float m = kMinSumScale * std::bit_cast<float>(mag | sign);
    r[i] = m;
    c[i] = q[i] + m;
  }
}

}  // namespace

DecodeResult decode(std::span<const Llr> llrs, const LdpcConfig& cfg,
                    int max_iterations) {
  if (static_cast<int>(llrs.size()) != cfg.N) {
    throw SizeError("decoder expects N=" + std::to_string(cfg.N) + " LLRs");
  }
  const auto code = lifted_code(cfg.base_graph, cfg.lifting_size);
  const int z = cfg.lifting_size;
  const int kb = code->info_cols();
  const std::size_t total = static_cast<std::size_t>(code->base_cols()) * z;

  std::vector<float> post(total, 0.0f);
  std::copy(llrs.begin(), llrs.end(), post.begin() + 2 * z);

  // A row whose degree-1 extension column is entirely erased sends zero
  // messages, so it can be dropped without changing the result.
  std::vector<int> active;
  for (int r = 0; r < code->base_rows(); ++r) {
    if (r < 4) {
      active.push_back(r);
      continue;
    }
    const float* p = post.data() + static_cast<std::size_t>(kb + r) * z;
    if (std::any_of(p, p + z, [](float v) { return v != 0.0f; })) active.push_back(r);
  }

  std::size_t max_deg = 0;
  std::vector<std::size_t> msg_offset(active.size() + 1, 0);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const std::size_t deg = code->row(active[a]).size();
    max_deg = std::max(max_deg, deg);
    msg_offset[a + 1] = msg_offset[a] + deg * z;
  }
  std::vector<float> msgs(msg_offset.back(), 0.0f);
  std::vector<float> q(max_deg * z);
  std::vector<float> min1(z), min2(z);
  std::vector<std::uint32_t> sgn(z);
  std::vector<int> argmin(z);
  std::vector<std::uint8_t> acc(z);

  // Circulant access c[(i + s) % z] is split into two contiguous runs so
  // the inner loops stay branch-free and vectorize.
  std::vector<std::uint8_t> hard(total);
  auto parity_satisfied = [&]() {
    for (std::size_t i = 0; i < total; ++i) hard[i] = post[i] < 0.0f;
    for (int r : active) {
      std::ranges::fill(acc, 0);
      for (const auto& e : code->row(r)) {
        const std::uint8_t* c = hard.data() + static_cast<std::size_t>(e.col) * z;
        const int split = z - e.shift;
        for (int i = 0; i < split; ++i) acc[i] ^= c[i + e.shift];
        for (int i = split; i < z; ++i) acc[i] ^= c[i - split];
      }
      if (std::ranges::any_of(acc, [](std::uint8_t v) { return v != 0; })) return false;
    }
    return true;
  };

  DecodeResult result;
  result.parity_ok = parity_satisfied();
  for (int it = 0; it < max_iterations && !result.parity_ok; ++it) {
    for (std::size_t a = 0; a < active.size(); ++a) {
      const auto& edges = code->row(active[a]);
      float* rmsg = msgs.data() + msg_offset[a];
      std::ranges::fill(min1, std::numeric_limits<float>::max());
      std::ranges::fill(min2, std::numeric_limits<float>::max());
      std::ranges::fill(sgn, 0u);
      for (std::size_t j = 0; j < edges.size(); ++j) {
        const float* c = post.data() + static_cast<std::size_t>(edges[j].col) * z;
        const float* rj = rmsg + j * z;
        float* qj = q.data() + j * z;
        const int s = edges[j].shift, split = z - s, e = static_cast<int>(j);
        check_gather(c + s, rj, qj, sgn.data(), min1.data(), min2.data(), argmin.data(), split, e);
        check_gather(c, rj + split, qj + split, sgn.data() + split, min1.data() + split,
                     min2.data() + split, argmin.data() + split, s, e);
      }
      for (std::size_t j = 0; j < edges.size(); ++j) {
        float* c = post.data() + static_cast<std::size_t>(edges[j].col) * z;
        float* rj = rmsg + j * z;
        const float* qj = q.data() + j * z;
        const int s = edges[j].shift, split = z - s, e = static_cast<int>(j);
        check_scatter(c + s, rj, qj, sgn.data(), min1.data(), min2.data(), argmin.data(), split, e);
        check_scatter(c, rj + split, qj + split, sgn.data() + split, min1.data() + split,
                      min2.data() + split, argmin.data() + split, s, e);
      }
    }
    result.iterations = it + 1;
    result.parity_ok = parity_satisfied();
  }

  result.bits.resize(cfg.K);
  for (int i = 0; i < cfg.K; ++i) result.bits[i] = post[i] < 0.0f ? 1 : 0;
  return result;
}

TbDecodeResult desegment(std::span<const Bits> decoded_blocks, const TbCodingPlan& plan) {
  if (static_cast<int>(decoded_blocks.size()) != plan.C) {
    throw SizeError("expected " + std::to_string(plan.C) + " decoded code blocks");
  }
  TbDecodeResult out;
  Bits tb;
  tb.reserve(plan.B);
  const int per_block = plan.payload_bits_per_block();
  for (const auto& cb : decoded_blocks) {
    if (static_cast<int>(cb.size()) < plan.block.K_prime) {
      throw SizeError("decoded code block shorter than K'");
    }
    if (plan.C > 1) {
      out.block_crc_ok.push_back(
          crc_check(std::span(cb).first(plan.block.K_prime), CrcType::Crc24B));
    }
    tb.insert(tb.end(), cb.begin(), cb.begin() + per_block);
  }
  out.crc_ok = crc_check(tb, plan.tb_crc);
  tb.resize(plan.A);
  out.tb_bits = std::move(tb);
  return out;
}

}  // namespace uavnr::ldpc
