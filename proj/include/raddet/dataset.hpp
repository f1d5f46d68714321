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

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "raddet/annotate.hpp"
#include "raddet/error.hpp"
#include "raddet/render.hpp"
#include "raddet/rng.hpp"
#include "raddet/scene.hpp"
#include "raddet/spectrogram.hpp"
#include "raddet/types.hpp"

namespace raddet {

enum class Split { Train = 0, Val = 1, Test = 2 };

inline constexpr std::array<std::string_view, 3> kSplitNames = {"train", "val", "test"};

inline std::string_view split_name(Split s) { return kSplitNames[static_cast<std::size_t>(s)]; }

inline std::optional<Split> parse_split(std::string_view s) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i)
    if (kSplitNames[i] == s) return static_cast<Split>(i);
  return std::nullopt;
}

inline constexpr std::array<std::int64_t, 3> kDefaultSplits = {20000, 14000, 6000};
inline constexpr std::int64_t kDefaultFrames = 40000;

struct DatasetConfig {
  Env env = Env::Dense9T;
  std::vector<PresetSize> presets = {PresetSize::S, PresetSize::M, PresetSize::L};
  std::int64_t n_frames = kDefaultFrames;
  std::array<std::int64_t, 3> split_sizes = kDefaultSplits;
  std::vector<int> snr_levels{kSnrLevels.begin(), kSnrLevels.end()};
  std::uint64_t global_seed = 0;
  std::filesystem::path output_root = "raddet_out";
  bool emit_raw_iq = false;
  bool emit_raw_grid = false;
};

// Splits n in the 20000:14000:6000 ratio by largest remainder.
inline std::array<std::int64_t, 3> default_splits(std::int64_t n) {
  std::array<std::int64_t, 3> out{};
  std::array<std::int64_t, 3> rem{};
  std::int64_t used = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = n * kDefaultSplits[k] / kDefaultFrames;
    rem[k] = n * kDefaultSplits[k] % kDefaultFrames;
    used += out[k];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rem[a] > rem[b]; });
  for (std::int64_t i = 0; i < n - used; ++i) ++out[order[static_cast<std::size_t>(i)]];
  return out;
}

inline void validate(const DatasetConfig& c) {
  if (c.n_frames <= 0) throw ConfigError("frames must be positive");
  if (c.env == Env::NistLike)
    throw ConfigError("env 'nist' cannot be generated; use nist-annotate on NIST metadata");
  std::int64_t sum = 0;
  for (auto s : c.split_sizes) {
    if (s < 0) throw ConfigError("split sizes must be non-negative");
    sum += s;
  }
  if (sum != c.n_frames)
    throw ConfigError("split sizes " + std::to_string(c.split_sizes[0]) + "+" +
                      std::to_string(c.split_sizes[1]) + "+" + std::to_string(c.split_sizes[2]) + " = " +
                      std::to_string(sum) + " do not sum to frames = " + std::to_string(c.n_frames));
  if (c.presets.empty()) throw ConfigError("at least one preset is required");
  if (c.snr_levels.empty()) throw ConfigError("at least one SNR level is required");
  for (int s : c.snr_levels)
    if (!is_snr_level(s))
      throw ConfigError("snr level " + std::to_string(s) + " not in {-20, -12, -4, 4, 12, 20}");
  auto levels = c.snr_levels;
  std::sort(levels.begin(), levels.end());
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end())
    throw ConfigError("duplicate SNR level");
}

struct PlannedFrame {
  std::int64_t index = 0;
  Split split = Split::Train;
  int snr_db = 0;
  Env env = Env::Dense9T;
};

// Assigns every frame an SNR level and a split.
//
// Level counts differ by at most one (the first n % L levels take the
// extra frame). The level x split table is a controlled rounding of
// count_l * split_k / n: every cell is the floor or floor + 1 of its ideal
// share, rows sum to the level counts and columns to the split sizes.
// Frames are numbered split by split, cycling through the levels.
inline std::vector<PlannedFrame> plan(const DatasetConfig& c) {
  validate(c);
  const std::int64_t n = c.n_frames;
  const std::size_t L = c.snr_levels.size();
  std::vector<std::int64_t> level_count(L);
  for (std::size_t l = 0; l < L; ++l)
    level_count[l] = n / static_cast<std::int64_t>(L) + (static_cast<std::int64_t>(l) < n % static_cast<std::int64_t>(L));

  std::vector<std::array<std::int64_t, 3>> cell(L), rem(L);
  std::array<std::int64_t, 3> col_need = c.split_sizes;
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t k = 0; k < 3; ++k) {
      cell[l][k] = level_count[l] * c.split_sizes[k] / n;
      rem[l][k] = level_count[l] * c.split_sizes[k] % n;
      col_need[k] -= cell[l][k];
    }
  }
  // Only cells with a fractional share may be rounded up. Greedy first: each
  // row hands its missing frames to the splits with the largest outstanding
  // demand (ties: larger remainder, then lower split). Rows the greedy
  // cannot finish are completed along augmenting paths, which always
  // succeeds because a controlled rounding exists.
  std::vector<std::int64_t> row_need(L);
  std::vector<std::array<bool, 3>> up(L, {false, false, false});
  for (std::size_t l = 0; l < L; ++l) {
    row_need[l] = level_count[l] - (cell[l][0] + cell[l][1] + cell[l][2]);
    std::array<std::size_t, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (col_need[a] != col_need[b]) return col_need[a] > col_need[b];
      if (rem[l][a] != rem[l][b]) return rem[l][a] > rem[l][b];
      return a < b;
    });
    for (std::size_t k : order) {
      if (row_need[l] == 0) break;
      if (col_need[k] <= 0 || rem[l][k] == 0) continue;
      up[l][k] = true;
      --col_need[k];
      --row_need[l];
    }
  }
  for (std::size_t l0 = 0; l0 < L; ++l0) {
    while (row_need[l0] > 0) {
      // BFS over rows; moving from row a to row b through split k means a
      // takes k's increment and b gives it up.
      std::vector<std::ptrdiff_t> prev_row(L, -1);
      std::vector<std::size_t> via(L, 0);
      std::vector<bool> seen(L, false);
      std::vector<std::size_t> queue = {l0};
      seen[l0] = true;
      std::optional<std::pair<std::size_t, std::size_t>> end;  // (row, split with spare need)
      for (std::size_t qi = 0; qi < queue.size() && !end; ++qi) {
        const std::size_t a = queue[qi];
        for (std::size_t k = 0; k < 3 && !end; ++k) {
          if (up[a][k] || rem[a][k] == 0) continue;
          if (col_need[k] > 0) {
            end = {a, k};
            break;
          }
          for (std::size_t b = 0; b < L; ++b) {
            if (seen[b] || !up[b][k]) continue;
            seen[b] = true;
            prev_row[b] = static_cast<std::ptrdiff_t>(a);
            via[b] = k;
            queue.push_back(b);
          }
        }
      }
      if (!end) throw std::logic_error("plan: controlled rounding failed");
      auto [row, k] = *end;
      up[row][k] = true;
      --col_need[k];
      while (row != l0) {
        const std::size_t kk = via[row];
        up[row][kk] = false;
        row = static_cast<std::size_t>(prev_row[row]);
        up[row][kk] = true;
      }
      --row_need[l0];
    }
  }
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t k = 0; k < 3; ++k) cell[l][k] += up[l][k];

  std::vector<PlannedFrame> out;
  out.reserve(static_cast<std::size_t>(n));
  std::int64_t index = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<std::int64_t> left(L);
    std::int64_t remaining = 0;
    for (std::size_t l = 0; l < L; ++l) remaining += (left[l] = cell[l][k]);
    while (remaining > 0) {
      for (std::size_t l = 0; l < L; ++l) {
        if (left[l] == 0) continue;
        --left[l];
        --remaining;
        out.push_back({index++, static_cast<Split>(k), c.snr_levels[l], c.env});
      }
    }
  }
  return out;
}

// Zero-padded decimal frame index, at least six digits.
inline std::string frame_id_for(std::int64_t index, std::int64_t n_frames) {
  const int width = std::max<int>(6, static_cast<int>(std::to_string(std::max<std::int64_t>(n_frames - 1, 0)).size()));
  std::string s = std::to_string(index);
  return std::string(static_cast<std::size_t>(std::max<int>(0, width - static_cast<int>(s.size()))), '0') + s;
}

// ---- config echo / config files ------------------------------------------

namespace detail {

inline std::string join_presets(const std::vector<PresetSize>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += preset_size_name(p[i]);
  }
  return s;
}

template <typename T>
std::string join_numbers(const T& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::vector<PresetSize> canonical_presets(std::vector<PresetSize> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

}  // namespace detail

// Canonical key-sorted "key=value" lines.
inline std::string config_echo(const DatasetConfig& c) {
  std::map<std::string, std::string> kv;
  kv["emit_raw_grid"] = c.emit_raw_grid ? "true" : "false";
  kv["emit_raw_iq"] = c.emit_raw_iq ? "true" : "false";
  kv["env"] = std::string(env_name(c.env));
  kv["frames"] = std::to_string(c.n_frames);
  kv["global_seed"] = std::to_string(c.global_seed);
  kv["presets"] = detail::join_presets(detail::canonical_presets(c.presets));
  kv["rng"] = kRngAlgorithm;
  kv["seed_mix"] = kSeedMixAlgorithm;
  kv["snr_levels"] = detail::join_numbers(c.snr_levels);
  kv["splits"] = detail::join_numbers(c.split_sizes);
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  return s;
}

// Parsed but not yet validated key-value settings. Absent keys stay unset
// so callers can layer command-line overrides on top.
struct ConfigOverrides {
  std::optional<Env> env;
  std::optional<std::vector<PresetSize>> presets;
  std::optional<std::int64_t> n_frames;
  std::optional<std::array<std::int64_t, 3>> split_sizes;
  std::optional<std::vector<int>> snr_levels;
  std::optional<std::uint64_t> global_seed;
  std::optional<std::filesystem::path> output_root;
  std::optional<bool> emit_raw_iq;
  std::optional<bool> emit_raw_grid;
};

namespace detail {

inline std::int64_t parse_int(const std::string& v, std::size_t line, const std::string& key) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ParseError(line, key + ": not an integer: '" + v + "'");
  }
  if (used != v.size()) throw ParseError(line, key + ": not an integer: '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& v, std::size_t line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(line, key + ": expected true or false, got '" + v + "'");
}

}  // namespace detail

inline std::vector<PresetSize> parse_preset_list(const std::string& v) {
  std::vector<PresetSize> out;
  for (const auto& tok : detail::split(v, ',')) {
    auto p = parse_preset_size(detail::trim(tok));
    if (!p) throw ConfigError("unknown preset '" + tok + "' (expected S, M or L)");
    out.push_back(*p);
  }
  return out;
}

inline ConfigOverrides parse_config_text(std::istream& in) {
  ConfigOverrides o;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    try {
      if (key == "env") {
        o.env = parse_env(val);
        if (!o.env) throw ParseError(lineno, "env: expected 1t or 9t, got '" + val + "'");
      } else if (key == "presets") {
        o.presets = parse_preset_list(val);
      } else if (key == "frames") {
        o.n_frames = detail::parse_int(val, lineno, key);
      } else if (key == "splits") {
        auto parts = detail::split(val, ',');
        if (parts.size() != 3) throw ParseError(lineno, "splits: expected train,val,test");
        std::array<std::int64_t, 3> s{};
        for (std::size_t k = 0; k < 3; ++k) s[k] = detail::parse_int(detail::trim(parts[k]), lineno, key);
        o.split_sizes = s;
      } else if (key == "snr_levels") {
        std::vector<int> levels;
        for (const auto& p : detail::split(val, ','))
          levels.push_back(static_cast<int>(detail::parse_int(detail::trim(p), lineno, key)));
        o.snr_levels = levels;
      } else if (key == "global_seed" || key == "seed") {
        std::size_t used = 0;
        unsigned long long x = 0;
        try {
          x = std::stoull(val, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != val.size() || val[0] == '-')
          throw ParseError(lineno, key + ": not an unsigned integer: '" + val + "'");
        o.global_seed = x;
      } else if (key == "out") {
        o.output_root = val;
      } else if (key == "emit_raw_iq") {
        o.emit_raw_iq = detail::parse_bool(val, lineno, key);
      } else if (key == "emit_raw_grid") {
        o.emit_raw_grid = detail::parse_bool(val, lineno, key);
      } else if (key == "rng") {
        if (val != kRngAlgorithm) throw ParseError(lineno, "rng: only " + std::string(kRngAlgorithm) + " is supported");
      } else if (key == "seed_mix") {
        if (val != kSeedMixAlgorithm)
          throw ParseError(lineno, "seed_mix: only " + std::string(kSeedMixAlgorithm) + " is supported");
      } else {
        throw ParseError(lineno, "unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return o;
}

// Fills unset split sizes from the frame count.
inline DatasetConfig resolve_config(const ConfigOverrides& o) {
  DatasetConfig c;
  if (o.env) c.env = *o.env;
  if (o.presets) c.presets = *o.presets;
  if (o.n_frames) c.n_frames = *o.n_frames;
  c.split_sizes = o.split_sizes ? *o.split_sizes : default_splits(std::max<std::int64_t>(c.n_frames, 0));
  if (o.snr_levels) c.snr_levels = *o.snr_levels;
  if (o.global_seed) c.global_seed = *o.global_seed;
  if (o.output_root) c.output_root = *o.output_root;
  if (o.emit_raw_iq) c.emit_raw_iq = *o.emit_raw_iq;
  if (o.emit_raw_grid) c.emit_raw_grid = *o.emit_raw_grid;
  c.presets = detail::canonical_presets(c.presets);
  return c;
}

// ---- manifest ---------------------------------------------------------------

inline constexpr std::array<std::string_view, 17> kManifestColumns = {
    "frame_id", "index",   "split",   "env",     "snr_db",  "emitter_count", "annotation_count",
    "classes",  "seed",    "status",  "image_S", "label_S", "image_M",       "label_M",
    "image_L",  "label_L", "iq"};

struct ManifestRow {
  std::string frame_id;
  std::int64_t index = 0;
  Split split = Split::Train;
  Env env = Env::Dense9T;
  int snr_db = 0;
  int emitter_count = 0;
  int annotation_count = 0;
  std::vector<RadarClass> classes;
  std::uint64_t seed = 0;
  bool complete = false;
  std::array<std::string, 3> image;  // indexed by PresetSize; empty when absent
  std::array<std::string, 3> label;
  std::string iq;

  // First available label path, relative to the dataset root.
  std::string any_label() const {
    for (const auto& l : label)
      if (!l.empty()) return l;
    return {};
  }
};

inline std::string format_manifest(std::span<const ManifestRow> rows) {
  std::string s;
  for (std::size_t i = 0; i < kManifestColumns.size(); ++i) {
    if (i) s += ',';
    s += kManifestColumns[i];
  }
  s += '\n';
  for (const ManifestRow& r : rows) {
    std::string classes;
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
      if (i) classes += ';';
      classes += class_name(r.classes[i]);
    }
    s += r.frame_id + ',' + std::to_string(r.index) + ',' + std::string(split_name(r.split)) + ',' +
         std::string(env_name(r.env)) + ',' + std::to_string(r.snr_db) + ',' + std::to_string(r.emitter_count) +
         ',' + std::to_string(r.annotation_count) + ',' + classes + ',' + std::to_string(r.seed) + ',' +
         (r.complete ? "ok" : "incomplete");
    for (std::size_t p = 0; p < 3; ++p) s += ',' + r.image[p] + ',' + r.label[p];
    s += ',' + r.iq + '\n';
  }
  return s;
}

inline std::vector<ManifestRow> parse_manifest(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(1, "empty manifest");
  auto header = detail::split(detail::trim(line), ',');
  if (header.size() != kManifestColumns.size() ||
      !std::equal(header.begin(), header.end(), kManifestColumns.begin()))
    throw ParseError(1, "manifest header does not match the expected columns");
  std::vector<ManifestRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split(detail::trim(line), ',');
    if (f.size() != kManifestColumns.size())
      throw ParseError(lineno, "expected " + std::to_string(kManifestColumns.size()) + " fields");
    ManifestRow r;
    r.frame_id = f[0];
    r.index = detail::parse_int(f[1], lineno, "index");
    auto sp = parse_split(f[2]);
    if (!sp) throw ParseError(lineno, "unknown split '" + f[2] + "'");
    r.split = *sp;
    auto env = parse_env(f[3]);
    if (!env) throw ParseError(lineno, "unknown env '" + f[3] + "'");
    r.env = *env;
    r.snr_db = static_cast<int>(detail::parse_int(f[4], lineno, "snr_db"));
    r.emitter_count = static_cast<int>(detail::parse_int(f[5], lineno, "emitter_count"));
    r.annotation_count = static_cast<int>(detail::parse_int(f[6], lineno, "annotation_count"));
    if (!f[7].empty()) {
      for (const auto& name : detail::split(f[7], ';')) {
        auto cls = parse_radar_class(name);
        if (!cls) throw ParseError(lineno, "unknown class '" + name + "'");
        r.classes.push_back(*cls);
      }
    }
    try {
      r.seed = std::stoull(f[8]);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad seed '" + f[8] + "'");
    }
    r.complete = f[9] == "ok";
    for (std::size_t p = 0; p < 3; ++p) {
      r.image[p] = f[10 + 2 * p];
      r.label[p] = f[11 + 2 * p];
    }
    r.iq = f[16];
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return parse_manifest(f);
}

// ---- file output --------------------------------------------------------------

inline void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Interleaved little-endian float32 I, Q pairs.
inline std::vector<std::uint8_t> encode_iq_f32(std::span<const Sample> iq) {
  std::vector<std::uint8_t> b;
  b.reserve(iq.size() * 8);
  for (const Sample& s : iq) {
    detail::put_u32(b, std::bit_cast<std::uint32_t>(static_cast<float>(s.real())));
    detail::put_u32(b, std::bit_cast<std::uint32_t>(static_cast<float>(s.imag())));
  }
  return b;
}

inline IqBuffer decode_iq_f32(std::span<const std::uint8_t> b, double sample_rate) {
  if (b.size() % 8 != 0) throw DomainError("iq file: size is not a multiple of 8 bytes");
  IqBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(b.size() / 8);
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    out.samples[i] = {std::bit_cast<float>(detail::get_u32(b, 8 * i)),
                      std::bit_cast<float>(detail::get_u32(b, 8 * i + 4))};
  return out;
}

// Relative path of one artifact: <env>/<preset>/<split>/<kind>/<id>.<ext>.
inline std::filesystem::path artifact_path(Env env, PresetSize preset, Split split, std::string_view kind,
                                           const std::string& frame_id, std::string_view ext) {
  return std::filesystem::path(std::string(env_name(env))) / std::string(preset_size_name(preset)) /
         std::string(split_name(split)) / std::string(kind) / (frame_id + "." + std::string(ext));
}

// ---- generation -------------------------------------------------------------------

struct GenerateReport {
  std::vector<ManifestRow> rows;
  std::vector<std::string> errors;  // one message per incomplete frame
  std::int64_t dropped_boxes = 0;
  double elapsed_s = 0;
};

// Produces one frame's artifacts and manifest row. I/O failures leave the
// row marked incomplete and are reported through `error`.
inline ManifestRow generate_frame(const DatasetConfig& c, const PlannedFrame& pf, std::string* error,
                                  int* dropped) {
  namespace fs = std::filesystem;
  ManifestRow row;
  row.index = pf.index;
  row.frame_id = frame_id_for(pf.index, c.n_frames);
  row.split = pf.split;
  row.env = pf.env;
  row.snr_db = pf.snr_db;
  row.seed = frame_seed(c.global_seed, static_cast<std::uint64_t>(pf.index));

  const FrameBundle b = synthesize_frame(pf.env, pf.snr_db, row.seed, kRadDetGeometry);
  row.emitter_count = static_cast<int>(b.frame.emitters.size());
  for (const auto& e : b.frame.emitters) row.classes.push_back(e.cls);
  const FrameAnnotations ann = annotate_frame(b.frame.emitters, kRadDetGeometry.duration, kRadDetGeometry.sample_rate);
  row.annotation_count = static_cast<int>(ann.boxes.size());
  *dropped = ann.dropped;
  const std::string labels = format_labels(ann.boxes);

  try {
    for (PresetSize size : c.presets) {
      const auto p = static_cast<std::size_t>(size);
      const ResolutionPreset preset = make_preset(PresetFamily::RadDet, size);
      const Spectrogram spec = make_spectrogram(b.frame.iq.samples, preset);
      const fs::path img = artifact_path(pf.env, size, pf.split, "images", row.frame_id, "png");
      const fs::path lab = artifact_path(pf.env, size, pf.split, "labels", row.frame_id, "txt");
      write_bytes(c.output_root / img, render(spec));
      write_text(c.output_root / lab, labels);
      row.image[p] = img.generic_string();
      row.label[p] = lab.generic_string();
      if (c.emit_raw_grid)
        write_bytes(c.output_root / artifact_path(pf.env, size, pf.split, "grids", row.frame_id, "grid"),
                    encode_grid(spec));
    }
    if (c.emit_raw_iq) {
      const fs::path iq = artifact_path(pf.env, c.presets.front(), pf.split, "iq", row.frame_id, "iqf32");
      write_bytes(c.output_root / iq, encode_iq_f32(b.frame.iq.samples));
      row.iq = iq.generic_string();
    }
    row.complete = true;
  } catch (const std::exception& e) {
    *error = row.frame_id + ": " + e.what();
    row.complete = false;
  }
  return row;
}

inline void make_directories(const DatasetConfig& c) {
  namespace fs = std::filesystem;
  std::error_code ec;
  for (PresetSize size : c.presets) {
    for (std::size_t s = 0; s < 3; ++s) {
      std::vector<std::string_view> kinds = {"images", "labels"};
      if (c.emit_raw_grid) kinds.push_back("grids");
      if (c.emit_raw_iq && size == c.presets.front()) kinds.push_back("iq");
      for (auto kind : kinds) {
        const fs::path d = c.output_root / std::string(env_name(c.env)) / std::string(preset_size_name(size)) /
                           std::string(kSplitNames[s]) / std::string(kind);
        fs::create_directories(d, ec);
        if (ec) throw IoError("cannot create directory " + d.string() + ": " + ec.message());
      }
    }
  }
}

// Runs the whole pipeline for every planned frame on `workers` threads.
// Output bytes do not depend on the worker count: each frame depends only
// on (global_seed, frame index) and the manifest is assembled in index
// order.
inline GenerateReport generate(DatasetConfig c, int workers = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  c.presets = detail::canonical_presets(c.presets);
  const std::vector<PlannedFrame> frames = plan(c);
  make_directories(c);
  write_text(c.output_root / "config.txt", config_echo(c));

  GenerateReport report;
  report.rows.resize(frames.size());
  std::vector<std::string> errors(frames.size());
  std::vector<int> dropped(frames.size(), 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < frames.size(); i = next++) {
      try {
        report.rows[i] = generate_frame(c, frames[i], &errors[i], &dropped[i]);
      } catch (const std::exception& e) {
        ManifestRow& r = report.rows[i];
        r.index = frames[i].index;
        r.frame_id = frame_id_for(frames[i].index, c.n_frames);
        r.split = frames[i].split;
        r.env = frames[i].env;
        r.snr_db = frames[i].snr_db;
        errors[i] = r.frame_id + ": " + e.what();
      }
    }
  };
  workers = std::max(1, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!errors[i].empty()) report.errors.push_back(errors[i]);
    report.dropped_boxes += dropped[i];
  }
  write_text(c.output_root / "manifest.csv", format_manifest(report.rows));
  report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace raddet
