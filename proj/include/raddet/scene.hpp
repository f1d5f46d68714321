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
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "raddet/error.hpp"
#include "raddet/phase_code.hpp"
#include "raddet/rng.hpp"
#include "raddet/types.hpp"
#include "raddet/waveform.hpp"

namespace raddet {

// One radar emission placed in a frame.
struct EmitterInstance {
  RadarClass cls = RadarClass::Rect;
  WaveformParams params;
  double t_s = 0;  // s, start within the frame
  double f_c = 0;  // Hz, baseband-relative centre frequency
  std::int64_t start_sample = 0;
};

struct Frame {
  IqBuffer iq;
  double duration = 0;
  double snr_db = 0;
  std::vector<EmitterInstance> emitters;
  Env env = Env::Dense9T;
  std::string frame_id;
  std::uint64_t seed = 0;
};

// Parameter grids. A grid U(a, b, c) has the values a, a + c, ..., b.
namespace grid {
inline constexpr double kPulseWidthMinUs = 1, kPulseWidthMaxUs = 100;
inline constexpr double kPrfMinKhz = 10, kPrfMaxKhz = 50;
inline constexpr int kPulsesMin = 2, kPulsesMax = 10;
inline constexpr double kChirpBwMinMhz = 10, kChirpBwMaxMhz = 100;
inline constexpr double kChirpLenMinUs = 10, kChirpLenMaxUs = 100, kChirpLenStepUs = 10;
inline constexpr int kChirpsMin = 1, kChirpsMax = 20;
inline constexpr int kPhiStepsEachSide = 45;  // pi/4 at pi/180 resolution
inline constexpr double kCentreStepHz = 10e6;
inline constexpr double kDutyLimit = 0.9;  // pulse (or chirp) must fit in 0.9 of the PRI
}  // namespace grid

namespace detail {

inline double draw_grid(Rng& rng, double lo, double hi, double step) {
  const auto steps = static_cast<std::int64_t>(std::llround((hi - lo) / step));
  return lo + static_cast<double>(rng.uniform_int(0, steps)) * step;
}

template <typename T>
T draw_from(Rng& rng, const std::vector<T>& set) {
  return set[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(set.size()) - 1))];
}

}  // namespace detail

// Draws the class parameters from their grids. The draw order is fixed
// and documented here because it defines dataset reproducibility:
//   phi, f_c, then class fields, then the start sample.
inline EmitterInstance sample_emitter(RadarClass cls, Rng& rng,
                                      const FrameGeometry& geo = kRadDetGeometry) {
  EmitterInstance e;
  e.cls = cls;
  WaveformParams& p = e.params;
  p.cls = cls;
  p.phi = static_cast<double>(rng.uniform_int(-grid::kPhiStepsEachSide, grid::kPhiStepsEachSide)) *
          (kPi / 180.0);

  const auto centre_steps = static_cast<std::int64_t>(std::llround(geo.sample_rate / grid::kCentreStepHz));
  e.f_c = -geo.sample_rate / 2 + static_cast<double>(rng.uniform_int(0, centre_steps)) * grid::kCentreStepHz;

  if (cls == RadarClass::LFM || cls == RadarClass::FMCW) {
    p.b_chirp = detail::draw_grid(rng, grid::kChirpBwMinMhz, grid::kChirpBwMaxMhz, 1) * 1e6;
    p.n_chirp = static_cast<int>(rng.uniform_int(grid::kChirpsMin, grid::kChirpsMax));
    if (cls == RadarClass::LFM) {
      // Chirp length and repetition are redrawn together: the longest
      // chirps cannot fit any PRI on the grid.
      do {
        p.t_chirp = detail::draw_grid(rng, grid::kChirpLenMinUs, grid::kChirpLenMaxUs,
                                      grid::kChirpLenStepUs) * 1e-6;
        p.f_prf = detail::draw_grid(rng, grid::kPrfMinKhz, grid::kPrfMaxKhz, 1) * 1e3;
      } while (p.t_chirp >= grid::kDutyLimit / p.f_prf);
    } else {
      p.t_chirp = detail::draw_grid(rng, grid::kChirpLenMinUs, grid::kChirpLenMaxUs,
                                    grid::kChirpLenStepUs) * 1e-6;
    }
  } else {
    p.f_prf = detail::draw_grid(rng, grid::kPrfMinKhz, grid::kPrfMaxKhz, 1) * 1e3;
    p.n_pulse = static_cast<int>(rng.uniform_int(grid::kPulsesMin, grid::kPulsesMax));
    do {
      p.t_pw = detail::draw_grid(rng, grid::kPulseWidthMinUs, grid::kPulseWidthMaxUs, 1) * 1e-6;
    } while (p.t_pw >= grid::kDutyLimit / p.f_prf);

    if (auto fam = code_family_for(cls)) {
      const int n_chip = detail::draw_from(rng, allowed_chip_counts(*fam));
      std::optional<int> root;
      if (*fam == CodeFamily::ZadoffChu) root = detail::draw_from(rng, zadoff_chu_roots(n_chip));
      p.phase_code = code_generate(*fam, n_chip, root);
    }
  }

  // Start sample: uniform over placements that keep the emission inside
  // the frame; long emissions start anywhere and are truncated.
  const std::int64_t n_frame = geo.n_samples();
  const std::int64_t len = emission_samples(p, geo.sample_rate);
  e.start_sample = len <= n_frame ? rng.uniform_int(0, n_frame - len) : rng.uniform_int(0, n_frame - 1);
  e.t_s = static_cast<double>(e.start_sample) / geo.sample_rate;
  return e;
}

inline RadarClass draw_class(Rng& rng) {
  return static_cast<RadarClass>(rng.uniform_int(0, kNumRadarClasses - 1));
}

// Sparse1T: empty with probability 0.5, else one emitter.
// Dense9T: empty with probability 0.1, else 1..9 emitters (uniform count),
// classes drawn uniformly with replacement.
inline std::vector<EmitterInstance> sample_scene(Env env, Rng& rng,
                                                 const FrameGeometry& geo = kRadDetGeometry) {
  std::vector<EmitterInstance> out;
  switch (env) {
    case Env::Sparse1T:
      if (rng.bernoulli(0.5)) return out;
      out.push_back(sample_emitter(draw_class(rng), rng, geo));
      return out;
    case Env::Dense9T: {
      if (rng.bernoulli(0.1)) return out;
      const auto k = rng.uniform_int(1, 9);
      for (std::int64_t i = 0; i < k; ++i) out.push_back(sample_emitter(draw_class(rng), rng, geo));
      return out;
    }
    case Env::NistLike: break;
  }
  throw DomainError("sample_scene: environment must be 1t or 9t");
}

// Adds wave * exp(j 2 pi f_c n / fs) into frame starting at `start`,
// truncating at the frame end. The oscillator is re-anchored every block
// so phase error stays at rounding level.
inline void mix_into(std::span<Sample> frame, std::span<const Sample> wave, std::int64_t start,
                     double f_c, double sample_rate) {
  constexpr std::int64_t kBlock = 256;
  const auto n_frame = static_cast<std::int64_t>(frame.size());
  if (start >= n_frame || start < 0) return;
  const std::int64_t n = std::min<std::int64_t>(static_cast<std::int64_t>(wave.size()), n_frame - start);
  const double cycles_per_sample = f_c / sample_rate;
  const Sample step = std::polar(1.0, kTwoPi * cycles_per_sample);
  for (std::int64_t b = 0; b < n; b += kBlock) {
    const double cyc = std::fmod(cycles_per_sample * static_cast<double>(b), 1.0);
    Sample rot = std::polar(1.0, kTwoPi * cyc);
    const std::int64_t e = std::min(n, b + kBlock);
    for (std::int64_t i = b; i < e; ++i) {
      const Sample w = wave[static_cast<std::size_t>(i)];
      if (w != Sample{0, 0}) frame[static_cast<std::size_t>(start + i)] += w * rot;
      rot *= step;
    }
  }
}

// Sums every emitter, frequency-shifted to f_c and delayed to its start
// sample, into a zeroed frame. Samples beyond the frame end are dropped.
inline IqBuffer compose_frame(std::span<const EmitterInstance> emitters, double duration,
                              double sample_rate) {
  IqBuffer out;
  out.sample_rate = sample_rate;
  const FrameGeometry geo{sample_rate, duration};
  out.samples.assign(static_cast<std::size_t>(geo.n_samples()), Sample{0, 0});
  for (const EmitterInstance& e : emitters) {
    const IqBuffer wave = synthesize(e.params, sample_rate);
    mix_into(out.samples, wave.samples, e.start_sample, e.f_c, sample_rate);
  }
  return out;
}

// 1 where at least one emitter transmits.
inline std::vector<std::uint8_t> active_mask(std::span<const EmitterInstance> emitters,
                                             std::int64_t n_samples, double sample_rate) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n_samples), 0);
  for (const EmitterInstance& e : emitters) {
    for (const SampleSpan& s : active_spans(e.params, sample_rate)) {
      const std::int64_t b = std::clamp<std::int64_t>(e.start_sample + s.begin, 0, n_samples);
      const std::int64_t en = std::clamp<std::int64_t>(e.start_sample + s.end, 0, n_samples);
      std::fill(mask.begin() + b, mask.begin() + en, std::uint8_t{1});
    }
  }
  return mask;
}

// Mean |x|^2 over masked samples; 0 when the mask is empty.
inline double active_power(std::span<const Sample> x, std::span<const std::uint8_t> mask) {
  double acc = 0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!mask[i]) continue;
    acc += std::norm(x[i]);
    ++count;
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

// Returns clean + n, n circularly-symmetric white Gaussian with variance
// sigma^2 = P / 10^(snr/10), P the mean clean power over active samples.
// Frames with no active samples get unit-power noise. snr_db = +inf adds
// nothing.
inline IqBuffer add_awgn(const IqBuffer& clean, std::span<const std::uint8_t> active, double snr_db,
                         Rng& rng) {
  if (std::isinf(snr_db) && snr_db > 0) return clean;
  if (!is_snr_level(snr_db))
    throw DomainError("add_awgn: snr_db " + std::to_string(snr_db) +
                      " not in {-20, -12, -4, 4, 12, 20}");
  if (active.size() != clean.size()) throw DomainError("add_awgn: mask length differs from frame");

  const double p_sig = active_power(clean.samples, active);
  const double variance = p_sig > 0 ? p_sig / std::pow(10.0, snr_db / 10.0) : 1.0;

  IqBuffer out = clean;
  for (Sample& s : out.samples) s += rng.complex_normal(variance);
  return out;
}

// 10 log10(P_active(clean) / mean |noisy - clean|^2) with noise power
// measured over the whole frame.
inline double measure_snr_db(std::span<const Sample> clean, std::span<const Sample> noisy,
                             std::span<const std::uint8_t> active) {
  double noise = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) noise += std::norm(noisy[i] - clean[i]);
  noise /= static_cast<double>(clean.size());
  return 10.0 * std::log10(active_power(clean, active) / noise);
}

// Everything produced for one frame before spectrogram conversion.
struct FrameBundle {
  Frame frame;
  IqBuffer clean;
  std::vector<std::uint8_t> active;
};

// Scene, composition and noise for one frame, all drawn from a single
// stream seeded with `seed`.
inline FrameBundle synthesize_frame(Env env, double snr_db, std::uint64_t seed,
                                    const FrameGeometry& geo = kRadDetGeometry) {
  Rng rng(seed);
  FrameBundle b;
  b.frame.env = env;
  b.frame.snr_db = snr_db;
  b.frame.seed = seed;
  b.frame.duration = geo.duration;
  b.frame.emitters = sample_scene(env, rng, geo);
  b.clean = compose_frame(b.frame.emitters, geo.duration, geo.sample_rate);
  b.active = active_mask(b.frame.emitters, geo.n_samples(), geo.sample_rate);
  b.frame.iq = add_awgn(b.clean, b.active, snr_db, rng);
  return b;
}

}  // namespace raddet
