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

#include "commands.hpp"

#include <cctype>
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "uavnr/config.hpp"
#include "uavnr/dataset.hpp"
#include "uavnr/denoise.hpp"
#include "uavnr/errors.hpp"
#include "uavnr/image.hpp"
#include "uavnr/metrics.hpp"

namespace uavnr::cli {

namespace fs = std::filesystem;

namespace {

bool is_png(const fs::path& p) {
  auto ext = p.extension().string();
  std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

void require_dir(const fs::path& dir, const char* what) {
  if (!fs::is_directory(dir)) throw Error(std::string(what) + " directory not found: " + dir.string());
}

// PNG files directly inside dir, sorted by name.
std::vector<fs::path> list_pngs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_png(e.path())) out.push_back(e.path());
  }
  std::ranges::sort(out);
  return out;
}

// PNG files anywhere below dir, as sorted relative paths.
std::vector<fs::path> list_pngs_recursive(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && is_png(e.path())) out.push_back(fs::relative(e.path(), dir));
  }
  std::ranges::sort(out, {}, [](const fs::path& p) { return p.generic_string(); });
  return out;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  const int count = std::clamp<int>(workers, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::vector<std::jthread> pool;
  for (int w = 1; w < count; ++w) pool.emplace_back(body);
  body();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  return format_number(v);
}

}  // namespace

void cmd_generate(const GenerateOptions& opt, std::ostream& log) {
  RunConfig cfg = opt.config ? load_config(*opt.config) : RunConfig{};
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.snr) cfg.snr_list = *opt.snr;
  if (opt.doppler) cfg.doppler_list = *opt.doppler;
  if (opt.workers) cfg.workers = *opt.workers;
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  require_dir(opt.in_dir, "input");

  std::vector<SweepInput> inputs;
  for (const auto& p : list_pngs(opt.in_dir)) {
    try {
      inputs.push_back({p.stem().string(), read_png(p)});
    } catch (const std::exception& e) {
      log << "warning: skipping " << p.string() << ": " << e.what() << '\n';
    }
  }
  if (inputs.empty()) throw Error("no readable PNG images in " + opt.in_dir.string());

  fs::create_directories(opt.out_dir / "clean");
  for (const auto& in : inputs) write_png(opt.out_dir / "clean" / (in.stem + ".png"), in.image);
  for (double s : cfg.snr_list) {
    for (double d : cfg.doppler_list) fs::create_directories(opt.out_dir / point_dir_name(s, d));
  }

  const auto tasks = plan_sweep(inputs, cfg.snr_list, cfg.doppler_list, cfg.seed);
  std::vector<ManifestRow> rows(tasks.size());
  // Tasks are unique per (image, snr, doppler), so the index is recovered
  // from the task itself.
  std::map<std::tuple<std::size_t, double, double>, std::size_t> slot;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    slot[{tasks[i].image_index, tasks[i].snr_db, tasks[i].doppler_hz}] = i;
  }
  std::size_t done = 0;
  sweep(inputs, cfg.snr_list, cfg.doppler_list, cfg.link, cfg.seed, cfg.workers,
        [&](SweepResult&& r) {
          const auto& in = inputs[r.task.image_index];
          write_png(opt.out_dir / point_dir_name(r.task.snr_db, r.task.doppler_hz) / (in.stem + ".png"),
                    r.link.received);
          auto& row = rows[slot.at({r.task.image_index, r.task.snr_db, r.task.doppler_hz})];
          row = {in.stem,         in.image.width,    in.image.height,       r.task.snr_db,
                 r.task.doppler_hz, r.task.seed,     r.link.report.bler,    r.link.report.bit_errors,
                 r.psnr_vs_clean};
          ++done;
          log << "[" << done << "/" << tasks.size() << "] " << in.stem << " snr=" << format_number(r.task.snr_db)
              << " dop=" << format_number(r.task.doppler_hz) << " bler=" << format_number(r.link.report.bler)
              << " psnr=" << format_number(r.psnr_vs_clean) << '\n';
        });
  write_manifest(opt.out_dir / "manifest.csv", rows);
}

void cmd_denoise(const DenoiseOptions& opt, std::ostream& log) {
  if (opt.method != "mean" && opt.method != "median" && opt.method != "bm3d") {
    throw ConfigError("unknown method '" + opt.method + "'");
  }
  if (opt.sigma && !(*opt.sigma > 0.0)) throw ConfigError("sigma must be positive");
  require_dir(opt.in_dir, "input");
  const auto files = list_pngs_recursive(opt.in_dir);
  if (files.empty()) throw Error("no PNG images under " + opt.in_dir.string());

  std::mutex log_mutex;
  std::atomic<int> failures{0};
  parallel_for(files.size(), opt.workers, [&](std::size_t i) {
    const auto& rel = files[i];
    try {
      const auto img = read_png(opt.in_dir / rel);
      ImagePayload out;
      if (opt.method == "mean") {
        out = denoise::mean_filter(img, opt.window);
      } else if (opt.method == "median") {
        out = denoise::median_filter(img, opt.window);
      } else {
        const double sigma = opt.sigma ? *opt.sigma : denoise::estimate_sigma(img);
        if (!opt.sigma) {
          std::lock_guard lock(log_mutex);
          log << rel.generic_string() << ": estimated sigma " << format_number(sigma) << '\n';
        }
        // A clean input has no noise to remove.
        out = sigma > 0.0 ? denoise::bm3d(img, sigma) : img;
      }
      fs::create_directories((opt.out_dir / rel).parent_path());
      write_png(opt.out_dir / rel, out);
    } catch (const std::exception& e) {
      std::lock_guard lock(log_mutex);
      log << "warning: " << rel.generic_string() << ": " << e.what() << '\n';
      ++failures;
    }
  });
  if (fs::exists(opt.in_dir / "manifest.csv") && !fs::equivalent(opt.in_dir, opt.out_dir)) {
    fs::copy_file(opt.in_dir / "manifest.csv", opt.out_dir / "manifest.csv",
                  fs::copy_options::overwrite_existing);
  }
  if (failures > 0) throw Error(std::to_string(failures.load()) + " image(s) failed");
}

void cmd_evaluate(const EvaluateOptions& opt, std::ostream& log) {
  require_dir(opt.clean_dir, "clean");
  require_dir(opt.test_dir, "test");
  if (opt.gt_masks.has_value() != opt.pred_masks.has_value()) {
    throw ConfigError("--gt-masks and --pred-masks must be given together");
  }
  if (opt.gt_boxes.has_value() != opt.pred_boxes.has_value()) {
    throw ConfigError("--gt-boxes and --pred-boxes must be given together");
  }
  const bool with_masks = opt.gt_masks.has_value();
  const bool with_boxes = opt.gt_boxes.has_value();

  struct Row {
    std::string group;
    std::optional<std::pair<double, double>> point;
    std::string stem;
    std::string status = "ok";
    double psnr = std::numeric_limits<double>::quiet_NaN();
    double ssim = std::numeric_limits<double>::quiet_NaN();
    double iou = std::numeric_limits<double>::quiet_NaN();
    std::optional<metrics::ImageDetections> dets;
  };

  // A dataset root holds its own clean/ folder; it is the reference, not a test group.
  const bool separate_clean = !fs::equivalent(opt.clean_dir, opt.test_dir);
  std::vector<Row> rows;
  for (const auto& rel : list_pngs_recursive(opt.test_dir)) {
    if (separate_clean && !rel.parent_path().empty() &&
        fs::equivalent(opt.test_dir / rel.parent_path(), opt.clean_dir)) {
      continue;
    }
    Row r;
    const auto parent = rel.parent_path();
    r.group = parent.empty() ? "all" : parent.generic_string();
    r.point = parse_point_dir_name(parent.filename().string());
    r.stem = rel.stem().string();
    const auto clean_path = opt.clean_dir / (r.stem + ".png");
    try {
      if (!fs::exists(clean_path)) {
        r.status = "missing_clean";
      } else {
        const auto clean = read_png(clean_path);
        const auto test = read_png(opt.test_dir / rel);
        if (clean.width != test.width || clean.height != test.height) {
          r.status = "size_mismatch";
        } else {
          r.psnr = metrics::psnr(clean, test);
          r.ssim = metrics::ssim(clean, test);
        }
      }
      if (r.status == "ok" && with_masks) {
        const auto gt = *opt.gt_masks / (r.stem + ".png");
        const auto pred = *opt.pred_masks / rel;
        if (fs::exists(gt) && fs::exists(pred)) {
          r.iou = metrics::iou(metrics::read_mask(gt), metrics::read_mask(pred));
        } else {
          r.status = "missing_mask";
        }
      }
      if (r.status == "ok" && with_boxes) {
        const auto gt = *opt.gt_boxes / (r.stem + ".txt");
        auto pred = *opt.pred_boxes / rel;
        pred.replace_extension(".txt");
        metrics::ImageDetections d;
        if (fs::exists(gt)) {
          for (const auto& g : metrics::read_detections(gt)) d.ground_truth.push_back({g.class_id, g.box});
        }
        if (fs::exists(pred)) d.predictions = metrics::read_detections(pred);
        if (!fs::exists(gt) || !fs::exists(pred)) r.status = "missing_boxes";
        r.dets = std::move(d);
      }
    } catch (const std::exception& e) {
      r.status = "error";
      log << "warning: " << rel.generic_string() << ": " << e.what() << '\n';
    }
    if (r.status != "ok") log << "warning: " << rel.generic_string() << ": " << r.status << '\n';
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw Error("no PNG images under " + opt.test_dir.string());

  auto key = [](const Row& r) {
    return std::tuple{!r.point.has_value(), r.point ? r.point->first : 0.0,
                      r.point ? r.point->second : 0.0, r.group, r.stem};
  };
  std::ranges::sort(rows, {}, key);

  fs::create_directories(opt.out_dir);
  std::ofstream per(opt.out_dir / "per_image.csv", std::ios::binary);
  per << "group,snr_db,doppler_hz,image_stem,status,psnr,ssim,iou\n";
  for (const auto& r : rows) {
    per << r.group << ',' << (r.point ? format_number(r.point->first) : "") << ','
        << (r.point ? format_number(r.point->second) : "") << ',' << r.stem << ',' << r.status << ','
        << fmt(r.psnr) << ',' << fmt(r.ssim) << ',' << fmt(r.iou) << '\n';
  }

  std::ofstream sum(opt.out_dir / "summary.csv", std::ios::binary);
  sum << "group,snr_db,doppler_hz,count,psnr_mean,psnr_inf_count,psnr_finite_mean,ssim_mean,iou_mean,"
         "map50,map50_95\n";
  for (std::size_t b = 0; b < rows.size();) {
    std::size_t e = b;
    while (e < rows.size() && rows[e].group == rows[b].group) ++e;
    std::vector<double> psnr, finite, ssim, iou;
    std::vector<metrics::ImageDetections> corpus;
    int inf_count = 0;
    for (std::size_t i = b; i < e; ++i) {
      const auto& r = rows[i];
      if (r.status != "ok" && r.status != "missing_mask" && r.status != "missing_boxes") continue;
      psnr.push_back(r.psnr);
      if (std::isinf(r.psnr)) {
        ++inf_count;
      } else {
        finite.push_back(r.psnr);
      }
      ssim.push_back(r.ssim);
      if (!std::isnan(r.iou)) iou.push_back(r.iou);
      if (r.dets) corpus.push_back(*r.dets);
    }
    std::string map50, map50_95;
    if (with_boxes) {
      const auto m = metrics::mean_ap(corpus);
      map50 = format_number(m.map50);
      map50_95 = format_number(m.map50_95);
      if (!m.note.empty()) log << "note: group " << rows[b].group << ": " << m.note << '\n';
    }
    const auto& first = rows[b];
    sum << first.group << ',' << (first.point ? format_number(first.point->first) : "") << ','
        << (first.point ? format_number(first.point->second) : "") << ',' << psnr.size() << ','
        << fmt(mean(psnr)) << ',' << inf_count << ',' << fmt(mean(finite)) << ',' << fmt(mean(ssim))
        << ',' << fmt(mean(iou)) << ',' << map50 << ',' << map50_95 << '\n';
    b = e;
  }
  if (!per || !sum) throw Error("failed writing reports to " + opt.out_dir.string());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"uavnr: simulate image transfer over a 5G NR uplink, denoise and evaluate"};
  app.require_subcommand(1);

  GenerateOptions gen;
  std::string config, seed;
  std::vector<double> snr, doppler;
  int gen_workers = 0;
  auto* g = app.add_subcommand("generate", "Sweep images over SNR and Doppler into a dataset");
  g->add_option("--config", config, "key=value configuration file")->check(CLI::ExistingFile);
  g->add_option("--in", gen.in_dir, "Directory of clean PNG images")->required();
  g->add_option("--out", gen.out_dir, "Dataset root to create")->required();
  g->add_option("--seed", seed, "Base seed (overrides the config)");
  g->add_option("--snr", snr, "SNR list in dB (overrides the config)")->delimiter(',');
  g->add_option("--doppler", doppler, "Doppler list in Hz (overrides the config)")->delimiter(',');
  g->add_option("--workers", gen_workers, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);

  DenoiseOptions den;
  double sigma = 0.0;
  auto* d = app.add_subcommand("denoise", "Apply a classical denoiser to every PNG under a directory");
  d->add_option("--method", den.method, "mean, median or bm3d")
      ->required()
      ->check(CLI::IsMember({"mean", "median", "bm3d"}));
  d->add_option("--in", den.in_dir, "Input directory (searched recursively)")->required();
  d->add_option("--out", den.out_dir, "Output directory, mirrors the input layout")->required();
  auto* sigma_opt = d->add_option("--sigma", sigma, "BM3D noise level on the 0..255 scale (estimated if omitted)")
                        ->check(CLI::PositiveNumber);
  d->add_option("--window", den.window, "Mean/median window size (odd)")->capture_default_str();
  d->add_option("--workers", den.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  EvaluateOptions ev;
  std::string gt_masks, pred_masks, gt_boxes, pred_boxes;
  auto* e = app.add_subcommand("evaluate", "Score test images against their clean originals");
  e->add_option("--clean", ev.clean_dir, "Directory of clean PNG images")->required();
  e->add_option("--in", ev.test_dir, "Test images, optionally grouped in snr<S>_dop<D> folders")->required();
  e->add_option("--out", ev.out_dir, "Report directory")->required();
  e->add_option("--gt-masks", gt_masks, "Reference masks, <stem>.png");
  e->add_option("--pred-masks", pred_masks, "Predicted masks mirroring the test layout");
  e->add_option("--gt-boxes", gt_boxes, "Reference boxes, <stem>.txt");
  e->add_option("--pred-boxes", pred_boxes, "Predicted boxes mirroring the test layout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) {
      if (!config.empty()) gen.config = config;
      if (!seed.empty()) {
        try {
          std::size_t used = 0;
          gen.seed = std::stoull(seed, &used);
          if (used != seed.size() || !std::isdigit(static_cast<unsigned char>(seed.front()))) throw std::invalid_argument(seed);
        } catch (const std::logic_error&) {
          std::cerr << "error: --seed must be a non-negative integer\n";
          return kExitUsage;
        }
      }
      if (!snr.empty()) gen.snr = snr;
      if (!doppler.empty()) gen.doppler = doppler;
      if (gen_workers > 0) gen.workers = gen_workers;
      cmd_generate(gen, std::cerr);
    } else if (*d) {
      if (*sigma_opt) den.sigma = sigma;
      if (den.window < 3 || den.window % 2 == 0) {
        std::cerr << "error: --window must be odd and >= 3\n";
        return kExitUsage;
      }
      cmd_denoise(den, std::cerr);
    } else if (*e) {
      if (!gt_masks.empty()) ev.gt_masks = gt_masks;
      if (!pred_masks.empty()) ev.pred_masks = pred_masks;
      if (!gt_boxes.empty()) ev.gt_boxes = gt_boxes;
      if (!pred_boxes.empty()) ev.pred_boxes = pred_boxes;
      cmd_evaluate(ev, std::cerr);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("uavnr");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace uavnr::cli
