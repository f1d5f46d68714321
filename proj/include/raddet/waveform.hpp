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

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "raddet/error.hpp"
#include "raddet/phase_code.hpp"
#include "raddet/types.hpp"

namespace raddet {

using Sample = std::complex<double>;

// Complex baseband samples at a fixed rate.
struct IqBuffer {
  std::vector<Sample> samples;
  double sample_rate = 0;

  std::size_t size() const { return samples.size(); }
};

// Parameters of one emission. Only the fields used by the class are set:
// pulsed and phase-coded classes use t_pw, f_prf and n_pulse; LFM uses
// b_chirp, t_chirp, n_chirp and f_prf (chirp repetition); FMCW uses
// b_chirp, t_chirp and n_chirp.
struct WaveformParams {
  RadarClass cls = RadarClass::Rect;
  double t_pw = 0;     // s
  double f_prf = 0;    // Hz
  int n_pulse = 0;
  double b_chirp = 0;  // Hz
  double t_chirp = 0;  // s
  int n_chirp = 0;
  std::optional<PhaseCode> phase_code;
  double phi = 0;      // rad
};

// Half-open sample range [begin, end).
struct SampleSpan {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t length() const { return end - begin; }
};

// Continuous emission duration in seconds: from the leading edge of the
// first pulse/chirp to the trailing edge of the last one.
inline double emission_duration(const WaveformParams& p) {
  switch (p.cls) {
    case RadarClass::FMCW: return p.n_chirp * p.t_chirp;
    case RadarClass::LFM: return (p.n_chirp - 1) / p.f_prf + p.t_chirp;
    default: return (p.n_pulse - 1) / p.f_prf + p.t_pw;
  }
}

// Sample ranges of every pulse (or chirp), relative to the emission start.
// Edges are rounded half-up to the nearest sample.
inline std::vector<SampleSpan> active_spans(const WaveformParams& p, double sample_rate) {
  std::vector<SampleSpan> spans;
  if (p.cls == RadarClass::FMCW) {
    spans.reserve(static_cast<std::size_t>(p.n_chirp));
    for (int k = 0; k < p.n_chirp; ++k)
      spans.push_back({round_half_up(k * p.t_chirp * sample_rate),
                       round_half_up((k + 1) * p.t_chirp * sample_rate)});
    return spans;
  }
  const bool lfm = p.cls == RadarClass::LFM;
  const int count = lfm ? p.n_chirp : p.n_pulse;
  const double width = lfm ? p.t_chirp : p.t_pw;
  spans.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t0 = k / p.f_prf;
    spans.push_back({round_half_up(t0 * sample_rate), round_half_up((t0 + width) * sample_rate)});
  }
  return spans;
}

// Buffer length in samples; ends at the trailing edge of the last pulse.
inline std::int64_t emission_samples(const WaveformParams& p, double sample_rate) {
  auto spans = active_spans(p, sample_rate);
  return spans.empty() ? 0 : spans.back().end;
}

// Pulse train: n_pulse unit-envelope pulses of width t_pw at interval
// 1/f_prf. Phase-coded classes split each pulse into n_chip equal chips.
inline IqBuffer synth_pulsed(const WaveformParams& p, double sample_rate) {
  if (is_chirped(p.cls))
    throw DomainError("synth_pulsed: class " + std::string(class_name(p.cls)) + " is chirped");
  if (p.t_pw <= 0 || p.f_prf <= 0 || p.n_pulse < 1)
    throw DomainError("synth_pulsed: t_pw, f_prf and n_pulse must be positive");
  if (p.t_pw * p.f_prf >= 1.0)
    throw DomainError("synth_pulsed: t_pw >= 1/f_prf gives overlapping pulses");

  const PhaseCode* code = nullptr;
  if (is_phase_coded(p.cls)) {
    if (!p.phase_code) throw DomainError("synth_pulsed: phase-coded class without a phase code");
    code = &*p.phase_code;
  }

  IqBuffer out;
  out.sample_rate = sample_rate;
  out.samples.assign(static_cast<std::size_t>(emission_samples(p, sample_rate)), Sample{0, 0});

  const auto spans = active_spans(p, sample_rate);
  for (int k = 0; k < p.n_pulse; ++k) {
    const SampleSpan& s = spans[static_cast<std::size_t>(k)];
    if (!code) {
      const Sample v = std::polar(1.0, p.phi);
      for (std::int64_t n = s.begin; n < s.end; ++n) out.samples[static_cast<std::size_t>(n)] = v;
      continue;
    }
    const double t0 = k / p.f_prf;
    const double t_chip = p.t_pw / code->n_chip;
    for (int c = 0; c < code->n_chip; ++c) {
      std::int64_t b = round_half_up((t0 + c * t_chip) * sample_rate);
      std::int64_t e = c + 1 == code->n_chip ? s.end
                                             : round_half_up((t0 + (c + 1) * t_chip) * sample_rate);
      const Sample v = std::polar(1.0, p.phi + code->chips[static_cast<std::size_t>(c)]);
      for (std::int64_t n = b; n < e; ++n) out.samples[static_cast<std::size_t>(n)] = v;
    }
  }
  return out;
}

// Sawtooth chirps sweeping -b_chirp/2 to +b_chirp/2 over t_chirp. With
// contiguous set (FMCW) chirps follow back to back; otherwise (LFM) chirp k
// starts at k/f_prf.
inline IqBuffer synth_chirped(const WaveformParams& p, double sample_rate, bool contiguous) {
  if (!is_chirped(p.cls))
    throw DomainError("synth_chirped: class " + std::string(class_name(p.cls)) + " is not chirped");
  if (p.b_chirp <= 0 || p.t_chirp <= 0 || p.n_chirp < 1)
    throw DomainError("synth_chirped: b_chirp, t_chirp and n_chirp must be positive");
  if (p.b_chirp > sample_rate)
    throw DomainError("synth_chirped: b_chirp exceeds the sample rate");

  WaveformParams q = p;
  q.cls = contiguous ? RadarClass::FMCW : RadarClass::LFM;
  if (!contiguous) {
    if (p.f_prf <= 0) throw DomainError("synth_chirped: LFM requires a positive f_prf");
    if (p.t_chirp * p.f_prf >= 1.0)
      throw DomainError("synth_chirped: t_chirp >= 1/f_prf gives overlapping chirps");
  }

  IqBuffer out;
  out.sample_rate = sample_rate;
  out.samples.assign(static_cast<std::size_t>(emission_samples(q, sample_rate)), Sample{0, 0});

  const double rate = p.b_chirp / p.t_chirp;  // Hz/s
  for (const SampleSpan& s : active_spans(q, sample_rate)) {
    for (std::int64_t n = s.begin; n < s.end; ++n) {
      const double t = static_cast<double>(n - s.begin) / sample_rate;
      const double theta = kTwoPi * (-0.5 * p.b_chirp * t + 0.5 * rate * t * t) + p.phi;
      out.samples[static_cast<std::size_t>(n)] = std::polar(1.0, theta);
    }
  }
  return out;
}

// Baseband waveform for any class.
inline IqBuffer synthesize(const WaveformParams& p, double sample_rate) {
  switch (p.cls) {
    case RadarClass::FMCW: return synth_chirped(p, sample_rate, true);
    case RadarClass::LFM: return synth_chirped(p, sample_rate, false);
    default: return synth_pulsed(p, sample_rate);
  }
}

}  // namespace raddet
