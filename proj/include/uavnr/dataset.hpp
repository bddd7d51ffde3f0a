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

// Parameter sweeps over (image, SNR, Doppler) and the on-disk dataset layout:
//   <root>/clean/<stem>.png
//   <root>/snr<S>_dop<D>/<stem>.png
//   <root>/manifest.csv

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uavnr/image.hpp"
#include "uavnr/link.hpp"

namespace uavnr {

/// 64-bit FNV-1a over base seed, image id, SNR and Doppler (little-endian
/// integers, IEEE-754 doubles, raw id bytes).
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view image_id,
                          double snr_db, double doppler_hz);

/// Running 64-bit FNV-1a.
class Fnv1a {
 public:
  void update(std::span<const std::uint8_t> bytes);
  void update(std::string_view text);
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

struct SweepInput {
  std::string stem;
  ImagePayload image;
};

struct SweepTask {
  std::size_t image_index = 0;
  double snr_db = 0.0;
  double doppler_hz = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  SweepTask task;
  LinkResult link;
  double psnr_vs_clean = 0.0;
};

/// Tasks in image-major, then SNR, then Doppler order.
std::vector<SweepTask> plan_sweep(std::span<const SweepInput> inputs,
                                  std::span<const double> snr_list,
                                  std::span<const double> doppler_list,
                                  std::uint64_t base_seed);

/// Runs every task on a pool of worker threads. The sink is called once per
/// task, never concurrently. Results do not depend on the worker count.
void sweep(std::span<const SweepInput> inputs, std::span<const double> snr_list,
           std::span<const double> doppler_list, const LinkConfig& base,
           std::uint64_t base_seed, int workers,
           const std::function<void(SweepResult&&)>& sink);

/// Shortest round-trip decimal form; "inf" for +infinity.
std::string format_number(double v);

/// "snr<S>_dop<D>" with format_number values.
std::string point_dir_name(double snr_db, double doppler_hz);
std::optional<std::pair<double, double>> parse_point_dir_name(std::string_view name);

struct ManifestRow {
  std::string image_stem;
  int width = 0;
  int height = 0;
  double snr_db = 0.0;
  double doppler_hz = 0.0;
  std::uint64_t seed = 0;
  double bler = 0.0;
  std::uint64_t bit_errors = 0;
  double psnr_vs_clean = 0.0;
};

inline constexpr std::string_view kManifestHeader =
    "image_stem,width,height,snr_db,doppler_hz,seed,bler,bit_errors,psnr_vs_clean";

void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows);
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

/// FNV-1a over every regular file under root, in sorted relative-path order.
std::uint64_t dataset_digest(const std::filesystem::path& root);

}  // namespace uavnr
