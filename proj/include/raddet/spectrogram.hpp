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
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raddet/error.hpp"
#include "raddet/fft.hpp"
#include "raddet/types.hpp"
#include "raddet/waveform.hpp"

namespace raddet {

enum class PresetFamily { RadDet, Nist };
enum class PresetSize { S, M, L };

inline std::string_view preset_size_name(PresetSize s) {
  switch (s) {
    case PresetSize::S: return "S";
    case PresetSize::M: return "M";
    case PresetSize::L: return "L";
  }
  return "?";
}

inline std::optional<PresetSize> parse_preset_size(std::string_view s) {
  if (s == "S" || s == "s") return PresetSize::S;
  if (s == "M" || s == "m") return PresetSize::M;
  if (s == "L" || s == "l") return PresetSize::L;
  return std::nullopt;
}

inline constexpr std::uint32_t kCustomPresetId = 255;

// STFT and max-hold dimensioning for one output resolution.
//
// The hop is floor(N / (dim_t * n_pool)) and n_overlap = n_seg - hop, so
// the STFT yields at least dim_t * n_pool columns; the surplus trailing
// columns are dropped. When that hop exceeds n_seg the overlap is 0 and
// missing tail segments are zero-padded.
struct ResolutionPreset {
  PresetFamily family = PresetFamily::RadDet;
  PresetSize size = PresetSize::S;
  std::uint32_t id = kCustomPresetId;
  int dim_t = 0;
  int dim_f = 0;  // = n_seg = FFT length
  int n_pool = 0;
  int n_seg = 0;
  int n_overlap = 0;
  double sample_rate = 0;
  std::int64_t n_samples = 0;

  int hop() const { return n_seg - n_overlap; }
  std::int64_t pooled_columns() const { return static_cast<std::int64_t>(dim_t) * n_pool; }
  // Width of one output time bin.
  double time_res() const { return static_cast<double>(hop()) * n_pool / sample_rate; }
  double freq_res() const { return sample_rate / dim_f; }
};

inline ResolutionPreset custom_preset(int dim_t, int n_seg, int n_pool, const FrameGeometry& geo) {
  if (dim_t <= 0 || n_seg <= 0 || n_pool <= 0)
    throw DomainError("preset dimensions must be positive");
  ResolutionPreset p;
  p.dim_t = dim_t;
  p.dim_f = n_seg;
  p.n_seg = n_seg;
  p.n_pool = n_pool;
  p.sample_rate = geo.sample_rate;
  p.n_samples = geo.n_samples();
  const std::int64_t hop = p.n_samples / p.pooled_columns();
  if (hop <= 0) throw DomainError("preset needs more output columns than input samples");
  p.n_overlap = hop < n_seg ? static_cast<int>(n_seg - hop) : 0;
  return p;
}

// Tabulated presets: RadDet (500 MHz, 1e6 samples) S/M/L = 128/75,
// 256/19, 512/4; NIST (10 MHz, 8e5 samples) S/M/L = 128/60, 256/30, 512/15.
inline ResolutionPreset make_preset(PresetFamily family, PresetSize size) {
  static constexpr int kDims[3] = {128, 256, 512};
  static constexpr int kRadDetPool[3] = {75, 19, 4};
  static constexpr int kNistPool[3] = {60, 30, 15};
  const auto i = static_cast<std::size_t>(size);
  const bool nist = family == PresetFamily::Nist;
  ResolutionPreset p = custom_preset(kDims[i], kDims[i], nist ? kNistPool[i] : kRadDetPool[i],
                                     nist ? kNistGeometry : kRadDetGeometry);
  p.family = family;
  p.size = size;
  p.id = static_cast<std::uint32_t>(i + (nist ? 3 : 0));
  return p;
}

inline ResolutionPreset preset_from_id(std::uint32_t id) {
  if (id > 5) throw DomainError("unknown preset id " + std::to_string(id));
  return make_preset(id >= 3 ? PresetFamily::Nist : PresetFamily::RadDet,
                     static_cast<PresetSize>(id % 3));
}

inline constexpr double kDbFloor = -120.0;

// Per-column STFT magnitudes in dB. Column-major: bin b of column c is
// db[c * n_bins + b]. Bins are centred: bin n_bins/2 is 0 Hz.
struct StftColumns {
  std::int64_t n_cols = 0;
  int n_bins = 0;
  std::vector<double> db;

  std::span<const double> column(std::int64_t c) const {
    return {db.data() + c * n_bins, static_cast<std::size_t>(n_bins)};
  }
};

// Frequency of a centred bin.
inline double bin_frequency(int bin, int n_bins, double sample_rate) {
  return (bin - n_bins / 2) * sample_rate / n_bins;
}

// Centred bin whose centre is nearest to f.
inline int frequency_bin(double f, int n_bins, double sample_rate) {
  auto b = static_cast<int>(std::lround(f * n_bins / sample_rate)) + n_bins / 2;
  return std::clamp(b, 0, n_bins - 1);
}

namespace detail {

inline std::int64_t stft_column_count(std::int64_t n, const ResolutionPreset& p) {
  if (n < p.n_seg)
    throw DomainError("stft: input of " + std::to_string(n) + " samples is shorter than n_seg " +
                      std::to_string(p.n_seg));
  const std::int64_t natural = (n - p.n_overlap) / p.hop();
  return p.n_overlap == 0 ? std::max(natural, p.pooled_columns()) : natural;
}

// Centred power spectrum of the segment starting at `begin`; samples past
// the end of the input count as zero.
inline void segment_power(std::span<const Sample> iq, std::int64_t begin, ForwardFft& fft,
                          std::span<double> power) {
  auto in = fft.input();
  const auto n = static_cast<std::int64_t>(in.size());
  const auto avail = std::clamp<std::int64_t>(static_cast<std::int64_t>(iq.size()) - begin, 0, n);
  std::copy_n(iq.begin() + std::min<std::int64_t>(begin, static_cast<std::int64_t>(iq.size())), avail,
              in.begin());
  std::fill(in.begin() + avail, in.end(), std::complex<double>{0, 0});
  auto out = fft.execute();
  const std::int64_t shift = n - n / 2;
  for (std::int64_t i = 0; i < n; ++i)
    power[static_cast<std::size_t>(i)] = std::norm(out[static_cast<std::size_t>((i + shift) % n)]);
}

inline double power_db(double p, double floor_db) { return std::max(10.0 * std::log10(p), floor_db); }

inline double floor_for(double max_power) {
  return max_power > 0 ? 10.0 * std::log10(max_power) + kDbFloor : kDbFloor;
}

}  // namespace detail

// Rectangular-window STFT magnitudes in dB, floored at 120 dB below the
// largest bin of the whole frame.
inline StftColumns stft_magnitude(std::span<const Sample> iq, const ResolutionPreset& preset) {
  const std::int64_t n_cols = detail::stft_column_count(static_cast<std::int64_t>(iq.size()), preset);
  StftColumns out;
  out.n_cols = n_cols;
  out.n_bins = preset.n_seg;
  out.db.resize(static_cast<std::size_t>(n_cols * preset.n_seg));

  ForwardFft fft(static_cast<std::size_t>(preset.n_seg));
  double max_power = 0;
  for (std::int64_t c = 0; c < n_cols; ++c) {
    std::span<double> col(out.db.data() + c * preset.n_seg, static_cast<std::size_t>(preset.n_seg));
    detail::segment_power(iq, c * preset.hop(), fft, col);
    for (double v : col) max_power = std::max(max_power, v);
  }
  const double floor_db = detail::floor_for(max_power);
  for (double& v : out.db) v = detail::power_db(v, floor_db);
  return out;
}

// Time x frequency grid, time-major: value (t, f) is grid[t * dim_f + f].
// Frequency bin 0 is the most negative frequency.
struct Spectrogram {
  int dim_t = 0;
  int dim_f = 0;
  std::vector<double> grid;
  double time_res = 0;
  double freq_res = 0;
  ResolutionPreset preset;

  double at(int t, int f) const { return grid[static_cast<std::size_t>(t) * dim_f + f]; }
};

// Max over each run of n_pool consecutive columns, without normalization.
// Columns past dim_t * n_pool are ignored.
inline std::vector<double> max_hold_pool(const StftColumns& cols, int dim_t, int n_pool) {
  const std::int64_t need = static_cast<std::int64_t>(dim_t) * n_pool;
  if (cols.n_cols < need)
    throw DomainError("max_hold: need " + std::to_string(need) + " columns, have " +
                      std::to_string(cols.n_cols));
  std::vector<double> out(static_cast<std::size_t>(dim_t) * cols.n_bins,
                          -std::numeric_limits<double>::infinity());
  for (int t = 0; t < dim_t; ++t) {
    double* dst = out.data() + static_cast<std::size_t>(t) * cols.n_bins;
    for (int k = 0; k < n_pool; ++k) {
      auto src = cols.column(static_cast<std::int64_t>(t) * n_pool + k);
      for (int f = 0; f < cols.n_bins; ++f) dst[f] = std::max(dst[f], src[static_cast<std::size_t>(f)]);
    }
  }
  return out;
}

// Min-max rescale to [0, 1]; a constant grid becomes all zeros.
inline void normalize_min_max(std::vector<double>& g) {
  if (g.empty()) return;
  auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  const double a = *lo, b = *hi;
  if (b <= a) {
    std::fill(g.begin(), g.end(), 0.0);
    return;
  }
  const double scale = 1.0 / (b - a);
  for (double& v : g) v = (v - a) * scale;
}

inline Spectrogram max_hold(const StftColumns& cols, const ResolutionPreset& preset) {
  Spectrogram s;
  s.dim_t = preset.dim_t;
  s.dim_f = cols.n_bins;
  s.grid = max_hold_pool(cols, preset.dim_t, preset.n_pool);
  normalize_min_max(s.grid);
  s.time_res = preset.time_res();
  s.freq_res = preset.freq_res();
  s.preset = preset;
  return s;
}

// Single-pass max-hold spectrogram. Pools linear power and converts only
// the pooled grid to dB; because the dB map and floor are monotone the
// result equals max_hold(stft_magnitude(iq)) bit for bit.
inline Spectrogram make_spectrogram(std::span<const Sample> iq, const ResolutionPreset& preset) {
  const std::int64_t n_cols = detail::stft_column_count(static_cast<std::int64_t>(iq.size()), preset);
  if (n_cols < preset.pooled_columns())
    throw DomainError("max_hold: need " + std::to_string(preset.pooled_columns()) +
                      " columns, have " + std::to_string(n_cols));
  const int nb = preset.n_seg;
  Spectrogram s;
  s.dim_t = preset.dim_t;
  s.dim_f = nb;
  s.grid.assign(static_cast<std::size_t>(preset.dim_t) * nb, 0.0);
  s.time_res = preset.time_res();
  s.freq_res = preset.freq_res();
  s.preset = preset;

  ForwardFft fft(static_cast<std::size_t>(nb));
  std::vector<double> col(static_cast<std::size_t>(nb));
  double max_power = 0;
  for (std::int64_t c = 0; c < n_cols; ++c) {
    detail::segment_power(iq, c * preset.hop(), fft, col);
    for (double v : col) max_power = std::max(max_power, v);
    if (c >= preset.pooled_columns()) continue;
    double* dst = s.grid.data() + static_cast<std::size_t>(c / preset.n_pool) * nb;
    for (int f = 0; f < nb; ++f) dst[f] = std::max(dst[f], col[static_cast<std::size_t>(f)]);
  }
  const double floor_db = detail::floor_for(max_power);
  for (double& v : s.grid) v = detail::power_db(v, floor_db);
  normalize_min_max(s.grid);
  return s;
}

// Raw grid file: 16-byte header (magic "RDSG", dim_t, dim_f, preset id as
// little-endian uint32) followed by dim_t * dim_f little-endian float32
// values, time-major.
inline constexpr char kGridMagic[4] = {'R', 'D', 'S', 'G'};

namespace detail {
inline void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[off + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}
}  // namespace detail

inline std::vector<std::uint8_t> encode_grid(const Spectrogram& s) {
  std::vector<std::uint8_t> b;
  b.reserve(16 + s.grid.size() * 4);
  b.insert(b.end(), kGridMagic, kGridMagic + 4);
  detail::put_u32(b, static_cast<std::uint32_t>(s.dim_t));
  detail::put_u32(b, static_cast<std::uint32_t>(s.dim_f));
  detail::put_u32(b, s.preset.id);
  for (double v : s.grid) detail::put_u32(b, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return b;
}

// Inverse of encode_grid. Resolution fields are filled for tabulated presets.
inline Spectrogram decode_grid(std::span<const std::uint8_t> b) {
  if (b.size() < 16 || std::memcmp(b.data(), kGridMagic, 4) != 0)
    throw DomainError("grid file: bad magic or truncated header");
  Spectrogram s;
  s.dim_t = static_cast<int>(detail::get_u32(b, 4));
  s.dim_f = static_cast<int>(detail::get_u32(b, 8));
  const std::uint32_t id = detail::get_u32(b, 12);
  const std::size_t n = static_cast<std::size_t>(s.dim_t) * static_cast<std::size_t>(s.dim_f);
  if (b.size() != 16 + 4 * n) throw DomainError("grid file: payload size does not match header");
  s.grid.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.grid[i] = std::bit_cast<float>(detail::get_u32(b, 16 + 4 * i));
  if (id <= 5) {
    s.preset = preset_from_id(id);
    s.time_res = s.preset.time_res();
    s.freq_res = s.preset.freq_res();
  } else {
    s.preset.id = id;
    s.preset.dim_t = s.dim_t;
    s.preset.dim_f = s.dim_f;
  }
  return s;
}

}  // namespace raddet
