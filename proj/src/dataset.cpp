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

#include "uavnr/dataset.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "uavnr/errors.hpp"
#include "uavnr/metrics.hpp"

namespace uavnr {

namespace fs = std::filesystem;

namespace {

void put_u64(Fnv1a& h, std::uint64_t v) {
  std::array<std::uint8_t, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  h.update(b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(std::string_view s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <typename T>
T parse_integer(std::string_view s) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void Fnv1a::update(std::span<const std::uint8_t> bytes) {
  for (std::uint8_t b : bytes) {
    state_ ^= b;
    state_ *= 0x100000001b3ull;
  }
}

void Fnv1a::update(std::string_view text) {
  update(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view image_id, double snr_db,
                          double doppler_hz) {
  Fnv1a h;
  put_u64(h, base_seed);
  put_u64(h, image_id.size());
  h.update(image_id);
  put_u64(h, std::bit_cast<std::uint64_t>(snr_db));
  put_u64(h, std::bit_cast<std::uint64_t>(doppler_hz));
  return h.digest();
}

std::vector<SweepTask> plan_sweep(std::span<const SweepInput> inputs,
                                  std::span<const double> snr_list,
                                  std::span<const double> doppler_list,
                                  std::uint64_t base_seed) {
  if (inputs.empty() || snr_list.empty() || doppler_list.empty()) {
    throw ConfigError("sweep needs at least one image, SNR and Doppler value");
  }
  auto has_duplicates = [](std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::ranges::sort(s);
    return std::ranges::adjacent_find(s) != s.end();
  };
  if (has_duplicates(snr_list) || has_duplicates(doppler_list)) {
    throw ConfigError("SNR and Doppler lists must not repeat values");
  }
  std::set<std::string> stems;
  for (const auto& in : inputs) {
    if (!stems.insert(in.stem).second) throw ConfigError("duplicate image stem '" + in.stem + "'");
  }
  std::vector<SweepTask> tasks;
  tasks.reserve(inputs.size() * snr_list.size() * doppler_list.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (double snr : snr_list) {
      for (double dop : doppler_list) {
        tasks.push_back({i, snr, dop, derive_seed(base_seed, inputs[i].stem, snr, dop)});
      }
    }
  }
  return tasks;
}

void sweep(std::span<const SweepInput> inputs, std::span<const double> snr_list,
           std::span<const double> doppler_list, const LinkConfig& base,
           std::uint64_t base_seed, int workers,
           const std::function<void(SweepResult&&)>& sink) {
  const auto tasks = plan_sweep(inputs, snr_list, doppler_list, base_seed);
  for (const auto& t : tasks) {
    LinkConfig cfg = base;
    cfg.snr_db = t.snr_db;
    cfg.doppler_hz = t.doppler_hz;
    cfg.validate();
  }

  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard lock(sink_mutex);
        if (failure) return;
      }
      try {
        const auto& t = tasks[i];
        LinkConfig cfg = base;
        cfg.snr_db = t.snr_db;
        cfg.doppler_hz = t.doppler_hz;
        cfg.rng_seed = t.seed;
        const auto& clean = inputs[t.image_index].image;
        SweepResult r{t, transmit_image(clean, cfg), 0.0};
        r.psnr_vs_clean = metrics::psnr(clean, r.link.received);
        std::lock_guard lock(sink_mutex);
        sink(std::move(r));
      } catch (...) {
        std::lock_guard lock(sink_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int n = std::clamp(workers, 1, static_cast<int>(tasks.size()));
  std::vector<std::jthread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string point_dir_name(double snr_db, double doppler_hz) {
  return "snr" + format_number(snr_db) + "_dop" + format_number(doppler_hz);
}

std::optional<std::pair<double, double>> parse_point_dir_name(std::string_view name) {
  if (!name.starts_with("snr")) return std::nullopt;
  const auto sep = name.find("_dop");
  if (sep == std::string_view::npos) return std::nullopt;
  try {
    const double snr = parse_double(name.substr(3, sep - 3));
    const double dop = parse_double(name.substr(sep + 4));
    return std::pair{snr, dop};
  } catch (const ConfigError&) {
    return std::nullopt;
  }
}

void write_manifest(const fs::path& path, std::span<const ManifestRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << kManifestHeader << '\n';
  for (const auto& r : rows) {
    out << r.image_stem << ',' << r.width << ',' << r.height << ',' << format_number(r.snr_db)
        << ',' << format_number(r.doppler_hz) << ',' << r.seed << ',' << format_number(r.bler)
        << ',' << r.bit_errors << ',' << format_number(r.psnr_vs_clean) << '\n';
  }
  if (!out) throw Error("failed writing manifest " + path.string());
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty manifest " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kManifestHeader) throw ConfigError("unexpected manifest header in " + path.string());
  std::vector<ManifestRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw ConfigError("manifest row has " + std::to_string(f.size()) + " fields");
    ManifestRow r;
    r.image_stem = f[0];
    r.width = parse_integer<int>(f[1]);
    r.height = parse_integer<int>(f[2]);
    r.snr_db = parse_double(f[3]);
    r.doppler_hz = parse_double(f[4]);
    r.seed = parse_integer<std::uint64_t>(f[5]);
    r.bler = parse_double(f[6]);
    r.bit_errors = parse_integer<std::uint64_t>(f[7]);
    r.psnr_vs_clean = parse_double(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::uint64_t dataset_digest(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
  }
  std::ranges::sort(files, {}, [](const fs::path& p) { return p.generic_string(); });
  Fnv1a h;
  std::vector<char> buf(1 << 16);
  for (const auto& rel : files) {
    const auto name = rel.generic_string();
    put_u64(h, name.size());
    h.update(name);
    std::ifstream in(root / rel, std::ios::binary);
    if (!in) throw Error("cannot read " + (root / rel).string());
    put_u64(h, fs::file_size(root / rel));
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      const auto got = static_cast<std::size_t>(in.gcount());
      h.update(std::span(reinterpret_cast<const std::uint8_t*>(buf.data()), got));
    }
  }
  return h.digest();
}

}  // namespace uavnr
