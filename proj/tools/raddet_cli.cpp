// Copyright 2026 The RadDet Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: gen, eval, render, inspect, nist-annotate.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include "raddet/raddet.hpp"

namespace fs = std::filesystem;
using namespace raddet;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct GenArgs {
  std::string config;
  std::string env;
  std::vector<std::string> presets;
  std::int64_t frames = -1;
  std::string splits;
  std::int64_t train = -1, val = -1, test = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int workers = 0;
  std::vector<int> snr;
  bool emit_iq = false;
  bool emit_grid = false;
};

std::ifstream open_input(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open " + p.string());
  return f;
}

int cmd_gen(const GenArgs& a) {
  ConfigOverrides o;
  if (!a.config.empty()) {
    auto f = open_input(a.config);
    o = parse_config_text(f);
  }
  if (!a.env.empty()) {
    o.env = parse_env(a.env);
    if (!o.env) throw ConfigError("--env: expected 1t or 9t, got '" + a.env + "'");
  }
  if (!a.presets.empty()) {
    std::vector<PresetSize> p;
    for (const auto& s : a.presets)
      for (auto x : parse_preset_list(s)) p.push_back(x);
    o.presets = p;
  }
  if (a.frames >= 0) {
    o.n_frames = a.frames;
    if (!a.config.empty() && a.splits.empty() && a.train < 0) o.split_sizes.reset();
  }
  if (!a.splits.empty()) {
    auto parts = detail::split(a.splits, ',');
    if (parts.size() != 3) throw ConfigError("--splits: expected train,val,test");
    std::array<std::int64_t, 3> s{};
    for (std::size_t k = 0; k < 3; ++k) {
      auto v = detail::parse_double(detail::trim(parts[k]));
      if (!v || *v != std::floor(*v)) throw ConfigError("--splits: '" + parts[k] + "' is not an integer");
      s[k] = static_cast<std::int64_t>(*v);
    }
    o.split_sizes = s;
  }
  if (a.train >= 0 || a.val >= 0 || a.test >= 0) {
    if (a.train < 0 || a.val < 0 || a.test < 0) throw ConfigError("--train, --val and --test must be given together");
    o.split_sizes = std::array<std::int64_t, 3>{a.train, a.val, a.test};
  }
  if (a.seed_set) o.global_seed = a.seed;
  if (!a.snr.empty()) o.snr_levels = a.snr;
  if (a.emit_iq) o.emit_raw_iq = true;
  if (a.emit_grid) o.emit_raw_grid = true;
  if (!a.out.empty()) {
    o.output_root = a.out;
  } else if (!o.output_root) {
    const char* env = std::getenv("RADDET_OUT");
    o.output_root = env && *env ? fs::path(env) : fs::path("raddet_out");
  }

  DatasetConfig c = resolve_config(o);
  validate(c);
  const int workers = a.workers > 0 ? a.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const GenerateReport rep = generate(c, workers);

  std::map<int, std::int64_t> per_snr;
  std::int64_t complete = 0;
  for (const auto& r : rep.rows) {
    ++per_snr[r.snr_db];
    complete += r.complete;
  }
  std::printf("generated %lld frames (%lld complete) into %s\n", static_cast<long long>(rep.rows.size()),
              static_cast<long long>(complete), c.output_root.string().c_str());
  for (const auto& [snr, n] : per_snr) std::printf("  snr %+d dB: %lld frames\n", snr, static_cast<long long>(n));
  if (rep.dropped_boxes) std::printf("  dropped %lld fully clipped boxes\n", static_cast<long long>(rep.dropped_boxes));
  const double n = static_cast<double>(rep.rows.size());
  std::printf("elapsed %.3f s, %.2f frames/s, %.1f ms/frame wall, %.1f ms/frame per worker (%d workers)\n",
              rep.elapsed_s, n / rep.elapsed_s, 1e3 * rep.elapsed_s / n, 1e3 * rep.elapsed_s * workers / n, workers);
  for (const auto& e : rep.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  return rep.errors.empty() ? 0 : kExitRuntime;
}

int cmd_eval(const std::string& pred, const std::string& root, const std::string& split_s, const std::string& out) {
  const auto split = parse_split(split_s);
  if (!split) throw ConfigError("--split: expected train, val or test");
  if (!fs::exists(pred)) throw IoError("predictions file not found: " + pred);
  if (!fs::exists(fs::path(root) / "manifest.csv")) throw IoError("manifest not found: " + (fs::path(root) / "manifest.csv").string());
  const auto dets = read_predictions(pred);
  const auto gt = load_ground_truth(root, *split);
  const APResult r = map_suite(dets, gt.boxes, gt.frame_snr);

  auto pct = [](std::optional<double> v) { return v ? *v * 100 : 0.0; };
  std::printf("frames %zu, ground truth %zu, detections %zu\n", gt.frame_snr.size(), gt.boxes.size(), dets.size());
  std::printf("all        mAP50 %6.2f  mAP50:95 %6.2f\n", pct(r.overall.map50), pct(r.overall.map50_95));
  for (const auto& [snr, sr] : r.per_snr)
    std::printf("snr %+4d   mAP50 %6.2f  mAP50:95 %6.2f\n", snr, pct(sr.map50), pct(sr.map50_95));
  std::printf("snr mean   mAP50 %6.2f  mAP50:95 %6.2f\n", pct(r.cross_snr_map50), pct(r.cross_snr_map50_95));
  if (!out.empty()) {
    write_text(out, format_results_csv(r));
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

int cmd_render(const std::string& grid, const std::string& iq, const std::string& preset_s, const std::string& family_s,
               const std::string& boxes, const std::string& out) {
  if (grid.empty() == iq.empty()) throw ConfigError("give exactly one of --grid or --iq");
  Spectrogram s;
  if (!grid.empty()) {
    if (!fs::exists(grid)) throw IoError("grid file not found: " + grid);
    s = decode_grid(read_bytes(grid));
  } else {
    const auto size = parse_preset_size(preset_s);
    if (!size) throw ConfigError("--preset: expected S, M or L");
    PresetFamily fam;
    if (family_s == "raddet") {
      fam = PresetFamily::RadDet;
    } else if (family_s == "nist") {
      fam = PresetFamily::Nist;
    } else {
      throw ConfigError("--dataset: expected raddet or nist");
    }
    const ResolutionPreset p = make_preset(fam, *size);
    if (!fs::exists(iq)) throw IoError("iq file not found: " + iq);
    const IqBuffer buf = decode_iq_f32(read_bytes(iq), p.sample_rate);
    s = make_spectrogram(buf.samples, p);
  }
  GrayImage img = to_image(s);
  if (!boxes.empty()) {
    if (!fs::exists(boxes)) throw IoError("labels file not found: " + boxes);
    const auto b = read_labels(boxes);
    burn_boxes(img, b);
  }
  write_bytes(out, encode_png(img));
  std::printf("wrote %s (%d x %d)\n", out.c_str(), img.width, img.height);
  return 0;
}

int cmd_inspect(const std::string& root, const std::string& frame) {
  const fs::path m = fs::path(root) / "manifest.csv";
  if (!fs::exists(m)) throw IoError("manifest not found: " + m.string());
  for (const ManifestRow& r : read_manifest(m)) {
    if (r.frame_id != frame) continue;
    std::string classes;
    for (auto c : r.classes) classes += (classes.empty() ? "" : ",") + std::string(class_name(c));
    std::printf("frame %s  index %lld  split %s  env %s  snr %+d dB  seed %llu  %s\n", r.frame_id.c_str(),
                static_cast<long long>(r.index), std::string(split_name(r.split)).c_str(),
                std::string(env_name(r.env)).c_str(), r.snr_db, static_cast<unsigned long long>(r.seed),
                r.complete ? "complete" : "INCOMPLETE");
    std::printf("emitters %d: %s\n", r.emitter_count, classes.empty() ? "-" : classes.c_str());
    for (std::size_t p = 0; p < 3; ++p)
      if (!r.image[p].empty()) std::printf("preset %s: %s\n", std::string(preset_size_name(static_cast<PresetSize>(p))).c_str(), r.image[p].c_str());
    const std::string label = r.any_label();
    const auto boxes = label.empty() ? std::vector<Annotation>{} : read_labels(fs::path(root) / label);
    std::printf("%zu annotations\n", boxes.size());
    for (const auto& b : boxes)
      std::printf("  %-10s %s", std::string(class_name(radar_class_from_id(b.class_id))).c_str(),
                  format_label_line(b).c_str());
    return 0;
  }
  throw InputError("frame '" + frame + "' not in " + m.string());
}

int cmd_nist(const std::string& meta, const std::string& out) {
  auto f = open_input(meta);
  const auto recs = parse_nist_metadata(f);
  std::set<std::string> seen;
  for (const auto& r : recs)
    if (!seen.insert(r.frame_id).second)
      throw InputError("frame '" + r.frame_id + "' appears twice; NIST frames hold at most one radar");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out + ": " + ec.message());
  for (const auto& r : recs) {
    const Annotation a = annotate_nist(r);
    write_text(fs::path(out) / (r.frame_id + ".txt"), format_label_line(a));
  }
  std::printf("wrote %zu label files to %s\n", recs.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic radar spectrogram dataset tools"};
  app.require_subcommand(1);

  GenArgs g;
  auto* gen = app.add_subcommand("gen", "Generate a dataset");
  gen->add_option("--config", g.config, "key=value config file; flags override it");
  gen->add_option("--env", g.env, "Density environment: 1t or 9t");
  gen->add_option("--preset", g.presets, "Resolution preset S, M or L (repeatable or comma list)");
  gen->add_option("--frames", g.frames, "Total frame count");
  gen->add_option("--splits", g.splits, "train,val,test frame counts");
  gen->add_option("--train", g.train, "Training frames");
  gen->add_option("--val", g.val, "Validation frames");
  gen->add_option("--test", g.test, "Test frames");
  auto* seed_opt = gen->add_option("--seed", g.seed, "Global seed");
  gen->add_option("--out", g.out, "Output root (default: $RADDET_OUT or ./raddet_out)");
  gen->add_option("--workers", g.workers, "Worker threads (default: hardware concurrency)");
  gen->add_option("--snr", g.snr, "SNR levels in dB (repeatable)")->delimiter(',');
  gen->add_flag("--emit-iq", g.emit_iq, "Also write raw float32 I/Q");
  gen->add_flag("--emit-grid", g.emit_grid, "Also write raw spectrogram grids");

  std::string pred, root, split = "test", csv;
  auto* ev = app.add_subcommand("eval", "Score predictions against a generated split");
  ev->add_option("--pred", pred, "Predictions: frame_id class_id confidence x_c y_c w h")->required();
  ev->add_option("--root", root, "Dataset root")->required();
  ev->add_option("--split", split, "train, val or test");
  ev->add_option("--out", csv, "Write per-class results CSV");

  std::string grid, iq, preset = "S", family = "raddet", boxes, png;
  auto* rd = app.add_subcommand("render", "Render a grid or I/Q file to PNG");
  rd->add_option("--grid", grid, "Raw grid file");
  rd->add_option("--iq", iq, "Raw float32 I/Q file");
  rd->add_option("--preset", preset, "Preset for --iq: S, M or L");
  rd->add_option("--dataset", family, "Preset family for --iq: raddet or nist");
  rd->add_option("--boxes", boxes, "Label file to overlay");
  rd->add_option("--out", png, "Output PNG")->required();

  std::string frame;
  auto* in = app.add_subcommand("inspect", "Show one frame's manifest row and labels");
  in->add_option("--root", root, "Dataset root")->required();
  in->add_option("--frame", frame, "Frame id")->required();

  std::string meta, nist_out;
  auto* na = app.add_subcommand("nist-annotate", "Convert NIST-CBRS metadata CSV to label files");
  na->add_option("--meta", meta, "Metadata CSV")->required();
  na->add_option("--out", nist_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*gen) return cmd_gen(g);
    if (*ev) return cmd_eval(pred, root, split, csv);
    if (*rd) return cmd_render(grid, iq, preset, family, boxes, png);
    if (*in) return cmd_inspect(root, frame);
    if (*na) return cmd_nist(meta, nist_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
