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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uavnr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct GenerateOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path in_dir;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> snr;
  std::optional<std::vector<double>> doppler;
  std::optional<int> workers;
};

struct DenoiseOptions {
  std::string method;  // mean, median or bm3d
  std::filesystem::path in_dir;
  std::filesystem::path out_dir;
  std::optional<double> sigma;
  int window = 5;
  int workers = 1;
};

struct EvaluateOptions {
  std::filesystem::path clean_dir;
  std::filesystem::path test_dir;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> gt_masks;
  std::optional<std::filesystem::path> pred_masks;
  std::optional<std::filesystem::path> gt_boxes;
  std::optional<std::filesystem::path> pred_boxes;
};

// Each command throws uavnr::Error (or std::exception) on fatal problems and
// writes progress and warnings to `log`.
void cmd_generate(const GenerateOptions& opt, std::ostream& log);
void cmd_denoise(const DenoiseOptions& opt, std::ostream& log);
void cmd_evaluate(const EvaluateOptions& opt, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace uavnr::cli
