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

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "raddet/error.hpp"

namespace raddet {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// The eleven radar classes. Enumerator values are the label class ids.
enum class RadarClass : int {
  Barker = 0,
  FMCW = 1,
  Frank = 2,
  LFM = 3,
  P1 = 4,
  P2 = 5,
  P3 = 6,
  P4 = 7,
  Px = 8,
  Rect = 9,
  ZadoffChu = 10,
};

inline constexpr int kNumRadarClasses = 11;

inline constexpr std::array<std::string_view, kNumRadarClasses> kRadarClassNames = {
    "Barker", "FMCW", "Frank", "LFM", "P1", "P2",
    "P3",     "P4",   "Px",    "Rect", "ZadoffChu"};

inline constexpr int class_id(RadarClass c) { return static_cast<int>(c); }

inline std::string_view class_name(RadarClass c) {
  return kRadarClassNames[static_cast<std::size_t>(c)];
}

inline RadarClass radar_class_from_id(int id) {
  if (id < 0 || id >= kNumRadarClasses)
    throw DomainError("radar class id out of range [0, 10]: " + std::to_string(id));
  return static_cast<RadarClass>(id);
}

inline std::optional<RadarClass> parse_radar_class(std::string_view name) {
  for (int i = 0; i < kNumRadarClasses; ++i)
    if (kRadarClassNames[static_cast<std::size_t>(i)] == name) return static_cast<RadarClass>(i);
  return std::nullopt;
}

inline constexpr bool is_chirped(RadarClass c) {
  return c == RadarClass::LFM || c == RadarClass::FMCW;
}

inline constexpr bool is_phase_coded(RadarClass c) {
  return !is_chirped(c) && c != RadarClass::Rect;
}

// Scene density environment.
enum class Env { Sparse1T, Dense9T, NistLike };

inline std::string_view env_name(Env e) {
  switch (e) {
    case Env::Sparse1T: return "1t";
    case Env::Dense9T: return "9t";
    case Env::NistLike: return "nist";
  }
  return "?";
}

inline std::optional<Env> parse_env(std::string_view s) {
  if (s == "1t" || s == "1T" || s == "sparse") return Env::Sparse1T;
  if (s == "9t" || s == "9T" || s == "dense") return Env::Dense9T;
  if (s == "nist") return Env::NistLike;
  return std::nullopt;
}

// Frame SNR grid: -20 to 20 dB in 8 dB steps.
inline constexpr std::array<int, 6> kSnrLevels = {-20, -12, -4, 4, 12, 20};

inline bool is_snr_level(double snr_db) {
  for (int s : kSnrLevels)
    if (snr_db == static_cast<double>(s)) return true;
  return false;
}

// Sampling geometry of one frame.
struct FrameGeometry {
  double sample_rate = 500e6;
  double duration = 2e-3;

  std::int64_t n_samples() const {
    return static_cast<std::int64_t>(std::floor(duration * sample_rate + 0.5));
  }
};

inline constexpr FrameGeometry kRadDetGeometry{500e6, 2e-3};
inline constexpr FrameGeometry kNistGeometry{10e6, 80e-3};

// Round-half-up to the nearest sample index.
inline std::int64_t round_half_up(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5));
}

}  // namespace raddet
