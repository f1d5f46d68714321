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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "raddet/error.hpp"
#include "raddet/scene.hpp"
#include "raddet/types.hpp"
#include "raddet/waveform.hpp"

namespace raddet {

// YOLO box: class id plus normalized centre and size. x runs along time,
// y along frequency with y = 0 at +fs/2 (top row of the rendered image).
struct Annotation {
  int class_id = 0;
  double x_c = 0, y_c = 0, w = 0, h = 0;
};

// Uncertainty padding on 1/t bandwidth estimates, as a fraction of 1/t.
inline constexpr double kBandwidthPadding = 0.5;

// Occupied bandwidth: the chirp bandwidth for LFM/FMCW; otherwise
// (1 + 0.5)/t with t the pulse width (Rect) or chip width (phase-coded).
inline double est_bandwidth(const WaveformParams& p) {
  if (is_chirped(p.cls)) return p.b_chirp;
  double t = p.t_pw;
  if (is_phase_coded(p.cls)) {
    if (!p.phase_code) throw DomainError("est_bandwidth: phase-coded class without a phase code");
    t /= p.phase_code->n_chip;
  }
  return (1.0 + kBandwidthPadding) / t;
}

inline double est_bandwidth(const EmitterInstance& e) { return est_bandwidth(e.params); }

namespace detail {

// Builds a box from absolute extents, clipping to [0, duration] x
// [-fs/2, fs/2]. Returns nullopt when nothing is left.
inline std::optional<Annotation> box_from_extents(int class_id, double t0, double t1, double f_lo,
                                                  double f_hi, double duration, double fs) {
  t0 = std::clamp(t0, 0.0, duration);
  t1 = std::clamp(t1, 0.0, duration);
  f_lo = std::clamp(f_lo, -fs / 2, fs / 2);
  f_hi = std::clamp(f_hi, -fs / 2, fs / 2);
  if (t1 <= t0 || f_hi <= f_lo) return std::nullopt;
  const double x0 = t0 / duration, x1 = t1 / duration;
  const double y0 = std::clamp((fs / 2 - f_hi) / fs, 0.0, 1.0);
  const double y1 = std::clamp((fs / 2 - f_lo) / fs, 0.0, 1.0);
  Annotation a;
  a.class_id = class_id;
  a.x_c = 0.5 * (x0 + x1);
  a.w = x1 - x0;
  a.y_c = 0.5 * (y0 + y1);
  a.h = y1 - y0;
  return a;
}

}  // namespace detail

// Time extent [t_s, t_s + D] with D the emission duration, frequency
// extent f_c -/+ B/2, both clipped and normalized.
inline std::optional<Annotation> bbox_for_emitter(const EmitterInstance& e, double frame_duration,
                                                  double fs) {
  const double b = est_bandwidth(e);
  return detail::box_from_extents(class_id(e.cls), e.t_s, e.t_s + emission_duration(e.params),
                                  e.f_c - b / 2, e.f_c + b / 2, frame_duration, fs);
}

struct FrameAnnotations {
  std::vector<Annotation> boxes;
  int dropped = 0;  // emitters whose box clipped to nothing
};

inline FrameAnnotations annotate_frame(std::span<const EmitterInstance> emitters,
                                       double frame_duration, double fs) {
  FrameAnnotations out;
  for (const EmitterInstance& e : emitters) {
    if (auto a = bbox_for_emitter(e, frame_duration, fs))
      out.boxes.push_back(*a);
    else
      ++out.dropped;
  }
  return out;
}

// ---- NIST-CBRS metadata transform -----------------------------------------

enum class NistClass { P0N1 = 0, P0N2 = 1, Q3N1 = 2, Q3N2 = 3, Q3N3 = 4 };

inline constexpr std::array<std::string_view, 5> kNistClassNames = {"P0N1", "P0N2", "Q3N1", "Q3N2",
                                                                    "Q3N3"};

inline bool is_nist_chirped(NistClass c) { return static_cast<int>(c) >= 2; }

// Accepts "P0N1", "P0N#1" or the numeric id.
inline std::optional<NistClass> parse_nist_class(std::string_view s) {
  std::string key;
  for (char ch : s)
    if (ch != '#') key.push_back(ch);
  for (std::size_t i = 0; i < kNistClassNames.size(); ++i)
    if (kNistClassNames[i] == key || std::to_string(i) == key) return static_cast<NistClass>(i);
  return std::nullopt;
}

// One NIST-CBRS waveform's metadata in SI units. P0N classes need t_pw,
// Q3N classes need b_chirp.
struct NistRecord {
  std::string frame_id;
  NistClass cls = NistClass::P0N1;
  std::optional<double> t_s;
  std::optional<double> f_c;
  std::optional<double> t_pw;
  std::optional<double> b_chirp;
  std::optional<double> f_prf;
  std::optional<double> n_pulses;
};

// Box for one NIST waveform: time [t_s, t_s + N/f_prf], frequency
// f_c -/+ B/2 with B = b_chirp (Q3N) or 1.5/t_pw (P0N), normalized to the
// 80 ms x 10 MHz frame.
inline Annotation annotate_nist(const NistRecord& r, const FrameGeometry& geo = kNistGeometry) {
  auto need = [&](const std::optional<double>& v, const char* field) {
    if (!v)
      throw SchemaError("NIST record '" + r.frame_id + "' (" +
                        std::string(kNistClassNames[static_cast<std::size_t>(r.cls)]) +
                        "): missing field " + field);
    return *v;
  };
  const double t_s = need(r.t_s, "t_s");
  const double f_c = need(r.f_c, "f_c");
  const double f_prf = need(r.f_prf, "f_prf");
  const double n = need(r.n_pulses, "n_pulses");
  const double b = is_nist_chirped(r.cls) ? need(r.b_chirp, "b_chirp")
                                          : (1.0 + kBandwidthPadding) / need(r.t_pw, "t_pw");
  if (f_prf <= 0 || n <= 0 || b <= 0)
    throw DomainError("NIST record '" + r.frame_id + "': f_prf, n_pulses and bandwidth must be positive");
  auto a = detail::box_from_extents(static_cast<int>(r.cls), t_s, t_s + n / f_prf, f_c - b / 2, f_c + b / 2,
                                    geo.duration, geo.sample_rate);
  if (!a) throw DomainError("NIST record '" + r.frame_id + "': box lies outside the frame");
  return *a;
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (true) {
    const std::size_t e = s.find(sep, b);
    out.emplace_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// Metadata CSV: header row naming at least frame_id and class, plus any of
// t_s, f_c, t_pw, b_chirp, f_prf, n_pulses (SI units). Empty cells are
// missing values.
inline std::vector<NistRecord> parse_nist_metadata(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::trim(line).empty()) {
      header = detail::split(detail::trim(line), ',');
      break;
    }
  }
  if (header.empty()) throw ParseError(lineno ? lineno : 1, "missing metadata header");
  for (auto& h : header) h = detail::trim(h);
  auto col = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto c_id = col("frame_id"), c_cls = col("class");
  if (!c_id) throw ParseError(lineno, "header lacks column frame_id");
  if (!c_cls) throw ParseError(lineno, "header lacks column class");
  const std::array<std::string_view, 6> numeric = {"t_s", "f_c", "t_pw", "b_chirp", "f_prf", "n_pulses"};

  std::vector<NistRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split(line, ',');
    if (cells.size() != header.size())
      throw ParseError(lineno, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(cells.size()));
    for (auto& c : cells) c = detail::trim(c);
    NistRecord r;
    r.frame_id = cells[*c_id];
    if (r.frame_id.empty()) throw ParseError(lineno, "empty frame_id");
    auto cls = parse_nist_class(cells[*c_cls]);
    if (!cls) throw ParseError(lineno, "unknown NIST class '" + cells[*c_cls] + "'");
    r.cls = *cls;
    std::array<std::optional<double>*, 6> dst = {&r.t_s, &r.f_c, &r.t_pw, &r.b_chirp, &r.f_prf, &r.n_pulses};
    for (std::size_t k = 0; k < numeric.size(); ++k) {
      auto ci = col(numeric[k]);
      if (!ci || cells[*ci].empty()) continue;
      auto v = detail::parse_double(cells[*ci]);
      if (!v) throw ParseError(lineno, "field " + std::string(numeric[k]) + " is not a number");
      *dst[k] = *v;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---- YOLO label files ------------------------------------------------------

inline std::string format_label_line(const Annotation& a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f\n", a.class_id, a.x_c, a.y_c, a.w, a.h);
  return buf;
}

inline std::string format_labels(std::span<const Annotation> boxes) {
  std::string s;
  for (const auto& a : boxes) s += format_label_line(a);
  return s;
}

inline std::vector<Annotation> parse_labels(std::istream& in) {
  std::vector<Annotation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    std::istringstream ss(line);
    Annotation a;
    std::string extra;
    if (!(ss >> a.class_id >> a.x_c >> a.y_c >> a.w >> a.h))
      throw ParseError(lineno, "expected 'class_id x_c y_c w h'");
    if (ss >> extra) throw ParseError(lineno, "trailing field '" + extra + "'");
    out.push_back(a);
  }
  return out;
}

inline void write_labels(std::span<const Annotation> boxes, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  const std::string s = format_labels(boxes);
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

inline std::vector<Annotation> read_labels(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return parse_labels(f);
}

}  // namespace raddet
