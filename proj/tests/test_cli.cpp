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
#include <fstream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "test_util.hpp"
#include "uavnr/config.hpp"
#include "uavnr/dataset.hpp"
#include "uavnr/denoise.hpp"
#include "uavnr/errors.hpp"
#include "uavnr/metrics.hpp"

using namespace uavnr;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    rows.push_back(f);
  }
  return rows;
}

// Two small random RGB images plus one corrupt PNG.
fs::path make_inputs(const std::string& name) {
  const auto dir = test::scratch_dir(name);
  std::mt19937_64 rng(1);
  write_png(dir / "alpha.png", test::random_image(40, 24, 3, rng));
  write_png(dir / "beta.png", test::random_image(32, 32, 3, rng));
  std::ofstream(dir / "broken.png") << "not a png";
  std::ofstream(dir / "notes.txt") << "ignored";
  return dir;
}

void put(const fs::path& p, const ImagePayload& img) {
  fs::create_directories(p.parent_path());
  write_png(p, img);
}

int generate(const fs::path& in, const fs::path& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> args = {"generate", "--in", in.string(), "--out", out.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  return cli::run(args);
}

}  // namespace

TEST_CASE("config: defaults, keys and errors") {
  const auto d = parse_config("");
  CHECK(d.link.code_rate == doctest::Approx(600.0 / 1024.0));
  CHECK(d.snr_list == std::vector<double>{1, 2, 3, 4, 5, 6, 10, 15, 18, 20});
  CHECK(d.doppler_list == std::vector<double>{100, 300, 350, 400, 500, 750});
  CHECK(d.link.n_rx == 2);
  CHECK(d.link.num_prb == 52);

  const auto c = parse_config(
      "# comment\ncode_rate = 600/1024\nsnr_db = 1, 20\ndoppler_hz=300\nseed = 9 # trailing\n"
      "max_harq_retx = 1\nworkers = 3\nmodulation = 64qam\nchannel = CDL-A\n");
  CHECK(c.snr_list == std::vector<double>{1, 20});
  CHECK(c.doppler_list == std::vector<double>{300});
  CHECK(c.seed == 9);
  CHECK(c.workers == 3);
  CHECK(c.link.max_harq_retx == 1);

  CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("snr_db = 1, x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("snr_db = 90\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("doppler_hz = -5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seed\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/uavnr.cfg"), ConfigError);
  CHECK(parse_number_list("1,2.5, 3") == std::vector<double>{1, 2.5, 3});
  CHECK(config_keys().size() >= 15);
}

TEST_CASE("cli: usage errors exit with 1") {
  CHECK(cli::run(std::vector<std::string>{}) == cli::kExitUsage);
  CHECK(cli::run({"frobnicate"}) == cli::kExitUsage);
  CHECK(cli::run({"generate", "--in", "x"}) == cli::kExitUsage);
  CHECK(cli::run({"generate", "--config", "/nonexistent.cfg", "--in", "a", "--out", "b"}) ==
        cli::kExitUsage);
  CHECK(cli::run({"generate", "--in", "a", "--out", "b", "--seed", "-3"}) == cli::kExitUsage);
  CHECK(cli::run({"denoise", "--method", "gauss", "--in", "a", "--out", "b"}) == cli::kExitUsage);
  CHECK(cli::run({"denoise", "--method", "mean", "--in", "a", "--out", "b", "--window", "4"}) ==
        cli::kExitUsage);
  CHECK(cli::run({"--help"}) == cli::kExitOk);
}

TEST_CASE("cli: runtime errors exit with 2") {
  const auto out = test::scratch_dir("cli_rt");
  CHECK(generate("/nonexistent/dir", out / "ds") == cli::kExitRuntime);
  CHECK(cli::run({"evaluate", "--clean", "/nonexistent", "--in", out.string(), "--out",
                  (out / "r").string()}) == cli::kExitRuntime);
  const auto cfg = out / "bad.cfg";
  std::ofstream(cfg) << "unknown_key = 1\n";
  CHECK(cli::run({"generate", "--config", cfg.string(), "--in", out.string(), "--out",
                  (out / "ds").string()}) == cli::kExitRuntime);
}

TEST_CASE("cli generate: single point, layout and manifest") {
  const auto in = make_inputs("cli_in1");
  const auto out = test::scratch_dir("cli_gen1") / "ds";
  REQUIRE(generate(in, out, {"--snr", "20", "--doppler", "0", "--seed", "5"}) == cli::kExitOk);
  CHECK(fs::exists(out / "clean" / "alpha.png"));
  CHECK(fs::exists(out / "clean" / "beta.png"));
  CHECK_FALSE(fs::exists(out / "clean" / "broken.png"));
  CHECK(fs::exists(out / "snr20_dop0" / "alpha.png"));
  CHECK(fs::exists(out / "snr20_dop0" / "beta.png"));
  const auto rows = read_manifest(out / "manifest.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].image_stem == "alpha");
  CHECK(rows[0].width == 40);
  CHECK(rows[0].height == 24);
  CHECK(rows[0].seed == derive_seed(5, "alpha", 20, 0));
  CHECK(std::isinf(rows[0].psnr_vs_clean));
  CHECK(read_png(out / "snr20_dop0" / "alpha.png") == read_png(in / "alpha.png"));
}

TEST_CASE("cli generate: deterministic across runs and worker counts") {
  const auto in = make_inputs("cli_in2");
  const auto root = test::scratch_dir("cli_gen2");
  const auto cfg = root / "run.cfg";
  std::ofstream(cfg) << "snr_db = 1, 10\ndoppler_hz = 300, 750\nseed = 3\n";
  REQUIRE(generate(in, root / "a", {"--config", cfg.string()}) == cli::kExitOk);
  REQUIRE(generate(in, root / "b", {"--config", cfg.string()}) == cli::kExitOk);
  REQUIRE(generate(in, root / "c", {"--config", cfg.string(), "--workers", "3"}) == cli::kExitOk);
  const auto da = dataset_digest(root / "a");
  CHECK(da == dataset_digest(root / "b"));
  CHECK(da == dataset_digest(root / "c"));
  REQUIRE(generate(in, root / "d", {"--config", cfg.string(), "--seed", "4"}) == cli::kExitOk);
  CHECK(da != dataset_digest(root / "d"));

  // Every emitted image has exactly one manifest row.
  const auto rows = read_manifest(root / "a" / "manifest.csv");
  CHECK(rows.size() == 8);
  std::set<std::string> seen;
  for (const auto& r : rows) {
    const auto p = fs::path(point_dir_name(r.snr_db, r.doppler_hz)) / (r.image_stem + ".png");
    CHECK(fs::exists(root / "a" / p));
    CHECK(seen.insert(p.generic_string()).second);
  }
  std::size_t images = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    images += e.path().extension() == ".png" && e.path().parent_path().filename() != "clean";
  }
  CHECK(images == rows.size());
}

TEST_CASE("cli denoise: mirrors layout and matches the library") {
  const auto root = test::scratch_dir("cli_den");
  std::mt19937_64 rng(2);
  const auto noisy = test::add_gaussian_noise(test::random_image(30, 30, 3, rng), 20, rng);
  put(root / "in" / "snr1_dop300" / "n.png", noisy);
  put(root / "in" / "flat.png", ImagePayload(20, 20, 3, 90));
  std::ofstream(root / "in" / "manifest.csv") << kManifestHeader << '\n';

  REQUIRE(cli::run({"denoise", "--method", "median", "--in", (root / "in").string(), "--out",
                    (root / "med").string()}) == cli::kExitOk);
  CHECK(read_png(root / "med" / "snr1_dop300" / "n.png") == denoise::median_filter(noisy, 5));
  CHECK(fs::exists(root / "med" / "manifest.csv"));

  REQUIRE(cli::run({"denoise", "--method", "mean", "--window", "3", "--in", (root / "in").string(),
                    "--out", (root / "mean").string(), "--workers", "2"}) == cli::kExitOk);
  CHECK(read_png(root / "mean" / "flat.png") == ImagePayload(20, 20, 3, 90));
  CHECK(read_png(root / "mean" / "snr1_dop300" / "n.png") == denoise::mean_filter(noisy, 3));

  std::ostringstream log;
  cli::DenoiseOptions opt;
  opt.method = "bm3d";
  opt.in_dir = root / "in";
  opt.out_dir = root / "bm3d";
  cli::cmd_denoise(opt, log);
  const double est = denoise::estimate_sigma(noisy);
  CHECK(log.str().find("estimated sigma " + format_number(est)) != std::string::npos);
  CHECK(read_png(root / "bm3d" / "snr1_dop300" / "n.png") == denoise::bm3d(noisy, est));
  CHECK(read_png(root / "bm3d" / "flat.png") == ImagePayload(20, 20, 3, 90));

  opt.sigma = 12.0;
  opt.out_dir = root / "bm3d_fixed";
  std::ostringstream quiet;
  cli::cmd_denoise(opt, quiet);
  CHECK(read_png(root / "bm3d_fixed" / "snr1_dop300" / "n.png") == denoise::bm3d(noisy, 12.0));
  CHECK(quiet.str().find("estimated sigma") == std::string::npos);
}

TEST_CASE("cli evaluate: identity, grouping and task metrics") {
  const auto root = test::scratch_dir("cli_eval");
  std::mt19937_64 rng(3);
  std::vector<ImagePayload> clean;
  for (int i = 0; i < 3; ++i) {
    clean.push_back(test::random_image(24, 24, 3, rng));
    put(root / "clean" / ("s" + std::to_string(i) + ".png"), clean.back());
  }
  REQUIRE(cli::run({"evaluate", "--clean", (root / "clean").string(), "--in",
                    (root / "clean").string(), "--out", (root / "r0").string()}) == cli::kExitOk);
  auto per = read_csv(root / "r0" / "per_image.csv");
  REQUIRE(per.size() == 4);
  CHECK(per[0] == std::vector<std::string>{"group", "snr_db", "doppler_hz", "image_stem", "status",
                                           "psnr", "ssim", "iou"});
  for (std::size_t i = 1; i < per.size(); ++i) {
    CHECK(per[i][0] == "all");
    CHECK(per[i][4] == "ok");
    CHECK(per[i][5] == "inf");
    CHECK(per[i][6] == "1");
  }

  // Two SNR groups, one stray image without a clean reference.
  std::vector<double> psnr_g1;
  for (int i = 0; i < 3; ++i) {
    const auto a = test::add_gaussian_noise(clean[i], 30, rng);
    const auto b = test::add_gaussian_noise(clean[i], 5, rng);
    put(root / "ds" / "snr1_dop300" / ("s" + std::to_string(i) + ".png"), a);
    put(root / "ds" / "snr20_dop300" / ("s" + std::to_string(i) + ".png"), b);
    psnr_g1.push_back(metrics::psnr(clean[i], a));
  }
  put(root / "ds" / "snr1_dop300" / "stray.png", clean[0]);
  fs::copy(root / "clean", root / "ds" / "clean");

  // Masks and boxes for the 1 dB group only.
  for (int i = 0; i < 3; ++i) {
    ImagePayload m(24, 24, 1, 0);
    for (int y = 4; y < 14; ++y) {
      for (int x = 4; x < 14; ++x) m.at(x, y, 0) = 255;
    }
    put(root / "gt_masks" / ("s" + std::to_string(i) + ".png"), m);
    if (i == 0) {
      for (int y = 4; y < 14; ++y) m.at(14, y, 0) = 255;
    }
    put(root / "pred" / "snr1_dop300" / ("s" + std::to_string(i) + ".png"), m);
    fs::create_directories(root / "gt_boxes");
    std::ofstream(root / "gt_boxes" / ("s" + std::to_string(i) + ".txt")) << "0 4 4 14 14\n";
    std::ofstream(root / "pred" / "snr1_dop300" / ("s" + std::to_string(i) + ".txt"))
        << "0 4 4 14 14 0.9\n";
  }

  REQUIRE(cli::run({"evaluate", "--clean", (root / "ds" / "clean").string(), "--in",
                    (root / "ds").string(), "--out", (root / "r1").string(), "--gt-masks",
                    (root / "gt_masks").string(), "--pred-masks", (root / "pred").string(),
                    "--gt-boxes", (root / "gt_boxes").string(), "--pred-boxes",
                    (root / "pred").string()}) == cli::kExitOk);
  per = read_csv(root / "r1" / "per_image.csv");
  CHECK(per.size() == 1 + 7);
  int stray = 0;
  for (const auto& r : per) {
    if (r[3] == "stray") {
      CHECK(r[4] == "missing_clean");
      ++stray;
    }
    CHECK(r[0] != "clean");
  }
  CHECK(stray == 1);

  const auto sum = read_csv(root / "r1" / "summary.csv");
  REQUIRE(sum.size() == 3);
  CHECK(sum[0][0] == "group");
  CHECK(sum[1][0] == "snr1_dop300");
  CHECK(sum[1][1] == "1");
  CHECK(sum[1][2] == "300");
  CHECK(sum[1][3] == "3");
  const double mean_psnr = (psnr_g1[0] + psnr_g1[1] + psnr_g1[2]) / 3;
  CHECK(std::stod(sum[1][4]) == doctest::Approx(mean_psnr).epsilon(1e-12));
  CHECK(std::stod(sum[1][8]) == doctest::Approx((100.0 / 110.0 + 2.0) / 3).epsilon(1e-12));
  CHECK(std::stod(sum[1][9]) == doctest::Approx(1.0));
  CHECK(sum[2][0] == "snr20_dop300");
  CHECK(sum[2][8] == "");
}
