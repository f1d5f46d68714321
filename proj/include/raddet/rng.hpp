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
#include <random>

#include "raddet/error.hpp"
#include "raddet/types.hpp"

namespace raddet {

inline constexpr const char* kRngAlgorithm = "mt19937_64";
inline constexpr const char* kSeedMixAlgorithm = "splitmix64-fmix";

// SplitMix64 finalizer. A bijection on 64-bit words.
inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-frame seed: mix(global ^ mix(index + golden)). Both mixes are
// bijective, so distinct indices at a fixed global seed (and distinct
// global seeds at a fixed index) never collide.
inline constexpr std::uint64_t frame_seed(std::uint64_t global_seed, std::uint64_t frame_index) {
  return splitmix64_mix(global_seed ^ splitmix64_mix(frame_index + 0x9e3779b97f4a7c15ULL));
}

namespace detail {

inline constexpr double kZigguratR = 3.6541528853610088;
inline constexpr double kZigguratV = 0.00492867323399;

// Layer edges x[0..256] (x[0] = V / f(r), x[1] = r, x[256] = 0) and the
// acceptance ratios x[i+1] / x[i] for f(x) = exp(-x^2 / 2).
struct ZigguratTables {
  double x[257];
  double ratio[256];
};

inline const ZigguratTables& ziggurat() {
  static const ZigguratTables t = [] {
    ZigguratTables z{};
    const double f_r = std::exp(-0.5 * kZigguratR * kZigguratR);
    z.x[0] = kZigguratV / f_r;
    z.x[1] = kZigguratR;
    for (int i = 2; i < 256; ++i)
      z.x[i] = std::sqrt(-2.0 * std::log(kZigguratV / z.x[i - 1] + std::exp(-0.5 * z.x[i - 1] * z.x[i - 1])));
    z.x[256] = 0.0;
    for (int i = 0; i < 256; ++i) z.ratio[i] = z.x[i + 1] / z.x[i];
    return z;
  }();
  return t;
}

}  // namespace detail

// Random stream with platform-independent distributions. The engine is
// fully specified by the standard; the distribution mappings below are
// written out so that results do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [lo, hi], unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw DomainError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ULL;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span + 1ULL) % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  // Standard normal variate by the 256-layer ziggurat method. One engine
  // draw supplies both the layer index (low 8 bits) and the signed
  // abscissa (high 53 bits).
  double normal() {
    const auto& z = detail::ziggurat();
    for (;;) {
      const std::uint64_t d = engine_();
      const std::size_t i = d & 0xff;
      const double u = 2.0 * (static_cast<double>(d >> 11) * 0x1.0p-53) - 1.0;
      if (std::abs(u) < z.ratio[i]) return u * z.x[i];
      if (i == 0) return normal_tail(u < 0);
      const double x = u * z.x[i];
      const double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - x * x));
      const double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - x * x));
      if (f1 + uniform01() * (f0 - f1) < 1.0) return x;
    }
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    return {s * re, s * normal()};
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  // Marsaglia's tail sampler beyond the base layer edge r.
  double normal_tail(bool negative) {
    const double r = detail::kZigguratR;
    double x, y;
    do {
      x = std::log(1.0 - uniform01()) / r;
      y = std::log(1.0 - uniform01());
    } while (-2.0 * y < x * x);
    return negative ? x - r : r - x;
  }

  std::mt19937_64 engine_;
};

}  // namespace raddet
