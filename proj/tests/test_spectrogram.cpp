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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "raddet/scene.hpp"
#include "raddet/spectrogram.hpp"

using namespace raddet;

namespace {

std::vector<Sample> noise(std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> x(static_cast<std::size_t>(n));
  for (auto& s : x) s = rng.complex_normal(1.0);
  return x;
}

std::vector<Sample> tone(std::int64_t n, double cycles_per_sample) {
  std::vector<Sample> x(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] = std::polar(1.0, kTwoPi * std::fmod(cycles_per_sample * i, 1.0));
  return x;
}

int argmax(std::span<const double> v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST(Preset, DimensionsForAllSix) {
  for (auto fam : {PresetFamily::RadDet, PresetFamily::Nist}) {
    const auto geo = fam == PresetFamily::Nist ? kNistGeometry : kRadDetGeometry;
    const auto x = noise(geo.n_samples(), 3);
    for (auto size : {PresetSize::S, PresetSize::M, PresetSize::L}) {
      const auto p = make_preset(fam, size);
      const int dim = 128 << static_cast<int>(size);
      const auto s = make_spectrogram(x, p);
      EXPECT_EQ(s.dim_t, dim);
      EXPECT_EQ(s.dim_f, dim);
      EXPECT_EQ(s.grid.size(), static_cast<std::size_t>(dim) * dim);
      // Pooled columns cover the frame up to less than one output bin.
      const std::int64_t covered = (p.pooled_columns() - 1) * p.hop() + p.n_seg;
      EXPECT_LT(std::abs(geo.n_samples() - covered), static_cast<std::int64_t>(p.hop()) * p.n_pool + p.n_seg);
      EXPECT_EQ(preset_from_id(p.id).n_pool, p.n_pool);
    }
  }
}

TEST(Preset, RadDetSmallResolution) {
  const auto p = make_preset(PresetFamily::RadDet, PresetSize::S);
  EXPECT_EQ(p.hop(), 104);
  EXPECT_NEAR(p.time_res(), 15.6e-6, 1e-12);
  EXPECT_NEAR(p.freq_res(), 3.90625e6, 1e-6);
}

TEST(Preset, HopAndOverlap) {
  struct Row {
    PresetFamily f;
    PresetSize s;
    int hop, overlap;
  };
  const Row rows[] = {{PresetFamily::RadDet, PresetSize::S, 104, 24}, {PresetFamily::RadDet, PresetSize::M, 205, 51},
                      {PresetFamily::RadDet, PresetSize::L, 488, 24}, {PresetFamily::Nist, PresetSize::S, 104, 24},
                      {PresetFamily::Nist, PresetSize::M, 104, 152},  {PresetFamily::Nist, PresetSize::L, 104, 408}};
  for (const auto& r : rows) {
    const auto p = make_preset(r.f, r.s);
    EXPECT_EQ(p.hop(), r.hop);
    EXPECT_EQ(p.n_overlap, r.overlap);
  }
}

TEST(Stft, MatchesDirectDft) {
  for (std::int64_t n : {200, 100}) {  // no overlap with zero-padded tail; overlapping
    const FrameGeometry geo{1000.0, static_cast<double>(n) / 1000.0};
    const auto p = custom_preset(4, 16, 2, geo);
    const auto x = noise(n, 9);
    const auto cols = stft_magnitude(x, p);
    ASSERT_GE(cols.n_cols, 8);
    for (std::int64_t c = 0; c < cols.n_cols; ++c) {
      std::vector<oracle::cd> seg(16, 0);
      for (int i = 0; i < 16; ++i) {
        const std::int64_t k = c * p.hop() + i;
        if (k < n) seg[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(k)];
      }
      const auto X = oracle::dft(seg);
      for (int b = 0; b < 16; ++b) {
        // Centred bin b holds frequency (b - 8) * fs / 16.
        const double want = 10 * std::log10(std::norm(X[static_cast<std::size_t>((b - 8 + 16) % 16)]));
        ASSERT_NEAR(cols.column(c)[static_cast<std::size_t>(b)], want, 1e-9) << "n " << n << " col " << c;
      }
    }
  }
}

TEST(Stft, ToneLandsInItsBin) {
  const auto p = make_preset(PresetFamily::RadDet, PresetSize::S);
  for (int k : {-20, 0, 5, 63}) {
    const auto x = tone(kRadDetGeometry.n_samples(), static_cast<double>(k) / p.n_seg);
    const auto cols = stft_magnitude(x, p);
    const int want = frequency_bin(k * p.freq_res(), p.n_seg, p.sample_rate);
    EXPECT_EQ(want, 64 + k);
    for (std::int64_t c = 0; c < cols.n_cols; ++c) ASSERT_EQ(argmax(cols.column(c)), want) << "col " << c;
  }
}

TEST(Stft, SilenceIsFloor) {
  const auto p = make_preset(PresetFamily::RadDet, PresetSize::M);
  const std::vector<Sample> x(static_cast<std::size_t>(kRadDetGeometry.n_samples()), Sample(0, 0));
  const auto cols = stft_magnitude(x, p);
  for (double v : cols.db) ASSERT_EQ(v, kDbFloor);
}

TEST(Stft, FloorIsRelativeToPeak) {
  const auto p = make_preset(PresetFamily::RadDet, PresetSize::S);
  auto x = tone(kRadDetGeometry.n_samples(), 0.25);
  const auto cols = stft_magnitude(x, p);
  const double top = *std::max_element(cols.db.begin(), cols.db.end());
  const double low = *std::min_element(cols.db.begin(), cols.db.end());
  EXPECT_NEAR(top, 20 * std::log10(128.0), 1e-9);
  EXPECT_NEAR(low, top - 120, 1e-9);
}

TEST(Stft, RectPulseMainLobe) {
  // 10 us pulse: null-to-null width 2 / t_pw = 0.2 MHz.
  WaveformParams w;
  w.cls = RadarClass::Rect;
  w.t_pw = 10e-6;
  w.f_prf = 10e3;
  w.n_pulse = 1;
  auto pulse = synthesize(w, 500e6).samples;
  std::vector<Sample> x(1'000'000, Sample(0, 0));
  std::copy(pulse.begin(), pulse.end(), x.begin() + 100'000);

  // Preset L: 0.98 MHz bins cannot resolve the 0.2 MHz lobe, so columns
  // inside the pulse put it in one bin.
  const auto pl = make_preset(PresetFamily::RadDet, PresetSize::L);
  const auto cols = stft_magnitude(x, pl);
  int inside = 0;
  for (std::int64_t c = 0; c < cols.n_cols; ++c) {
    const std::int64_t b = c * pl.hop();
    if (b < 100'000 || b + pl.n_seg > 105'000) continue;
    ++inside;
    const auto col = cols.column(c);
    const int peak = argmax(col);
    EXPECT_EQ(peak, pl.n_seg / 2);
    int width = 0;
    for (double v : col) width += v > col[static_cast<std::size_t>(peak)] - 20;
    EXPECT_NEAR(width * pl.freq_res(), 0.2e6, pl.freq_res());
  }
  EXPECT_GT(inside, 0);

  // With 50 kHz bins and the pulse inside one segment the lobe is resolved:
  // the first nulls sit exactly at +/- 100 kHz.
  const auto fine = custom_preset(100, 10'000, 1, kRadDetGeometry);
  std::vector<Sample> y(1'000'000, Sample(0, 0));
  std::copy(pulse.begin(), pulse.end(), y.begin());
  const auto fc = stft_magnitude(y, fine);
  const auto col = fc.column(0);
  const int centre = argmax(col);
  int lo = centre, hi = centre;
  while (lo > 0 && col[static_cast<std::size_t>(lo - 1)] < col[static_cast<std::size_t>(lo)]) --lo;
  while (hi + 1 < fine.n_seg && col[static_cast<std::size_t>(hi + 1)] < col[static_cast<std::size_t>(hi)]) ++hi;
  EXPECT_NEAR((hi - lo) * fine.freq_res(), 0.2e6, fine.freq_res());
}

TEST(Stft, TooShortInput) {
  const auto p = make_preset(PresetFamily::RadDet, PresetSize::S);
  EXPECT_THROW(stft_magnitude(std::vector<Sample>(100), p), DomainError);
}

// ---- max-hold ------------------------------------------------------------------

TEST(MaxHold, ToyPairsMatchOracle) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-50, 0);
  StftColumns cols;
  cols.n_cols = 8;
  cols.n_bins = 4;
  std::vector<std::vector<double>> ref(8, std::vector<double>(4));
  for (int c = 0; c < 8; ++c)
    for (int f = 0; f < 4; ++f) {
      ref[c][f] = u(gen);
      cols.db.push_back(ref[c][f]);
    }
  const auto got = max_hold_pool(cols, 4, 2);
  const auto want = oracle::pool(ref, 4, 2);
  for (int t = 0; t < 4; ++t)
    for (int f = 0; f < 4; ++f) EXPECT_EQ(got[static_cast<std::size_t>(t * 4 + f)], want[t][f]);
}

TEST(MaxHold, RandomGridsMatchOracle) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim_t = std::uniform_int_distribution<int>(1, 6)(gen);
    const int n_pool = std::uniform_int_distribution<int>(1, 5)(gen);
    const int bins = std::uniform_int_distribution<int>(1, 7)(gen);
    const int extra = std::uniform_int_distribution<int>(0, 3)(gen);
    StftColumns cols;
    cols.n_cols = dim_t * n_pool + extra;
    cols.n_bins = bins;
    std::vector<std::vector<double>> ref(static_cast<std::size_t>(cols.n_cols), std::vector<double>(bins));
    for (auto& c : ref)
      for (auto& v : c) {
        v = std::uniform_int_distribution<int>(-120, 0)(gen);  // ties are likely
        cols.db.push_back(v);
      }
    const auto got = max_hold_pool(cols, dim_t, n_pool);
    const auto want = oracle::pool(ref, dim_t, n_pool);
    for (int t = 0; t < dim_t; ++t)
      for (int f = 0; f < bins; ++f) ASSERT_EQ(got[static_cast<std::size_t>(t * bins + f)], want[t][f]);
  }
}

TEST(MaxHold, UnitPoolIsIdentity) {
  StftColumns cols;
  cols.n_cols = 5;
  cols.n_bins = 3;
  for (int i = 0; i < 15; ++i) cols.db.push_back(i * 0.5 - 3);
  EXPECT_EQ(max_hold_pool(cols, 5, 1), cols.db);
}

TEST(MaxHold, TooFewColumns) {
  StftColumns cols;
  cols.n_cols = 5;
  cols.n_bins = 1;
  cols.db.assign(5, 0.0);
  try {
    max_hold_pool(cols, 3, 2);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("need 6 columns, have 5"), std::string::npos) << e.what();
  }
}

TEST(MaxHold, FusedEqualsTwoStep) {
  const auto b = synthesize_frame(Env::Dense9T, 4, 2024);
  for (auto size : {PresetSize::S, PresetSize::M}) {
    const auto p = make_preset(PresetFamily::RadDet, size);
    const auto fused = make_spectrogram(b.frame.iq.samples, p);
    const auto two = max_hold(stft_magnitude(b.frame.iq.samples, p), p);
    EXPECT_EQ(fused.grid, two.grid);
  }
}

TEST(MaxHold, NormalizedRange) {
  const auto b = synthesize_frame(Env::Sparse1T, 20, 5);
  const auto s = make_spectrogram(b.frame.iq.samples, make_preset(PresetFamily::RadDet, PresetSize::S));
  EXPECT_EQ(*std::min_element(s.grid.begin(), s.grid.end()), 0.0);
  EXPECT_EQ(*std::max_element(s.grid.begin(), s.grid.end()), 1.0);
  std::vector<double> flat(10, 3.0);
  normalize_min_max(flat);
  for (double v : flat) EXPECT_EQ(v, 0.0);
}

TEST(MaxHold, PoolingIsMonotone) {
  // Raising the input can only raise each pooled value.
  std::mt19937_64 gen(8);
  StftColumns a;
  a.n_cols = 12;
  a.n_bins = 5;
  for (int i = 0; i < 60; ++i) a.db.push_back(std::uniform_real_distribution<double>(-10, 0)(gen));
  StftColumns b = a;
  for (auto& v : b.db) v += std::uniform_real_distribution<double>(0, 1)(gen);
  const auto pa = max_hold_pool(a, 4, 3), pb = max_hold_pool(b, 4, 3);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_LE(pa[i], pb[i]);
}

TEST(Grid, RoundTrip) {
  const auto b = synthesize_frame(Env::Dense9T, 12, 9);
  const auto s = make_spectrogram(b.frame.iq.samples, make_preset(PresetFamily::RadDet, PresetSize::S));
  const auto bytes = encode_grid(s);
  EXPECT_EQ(bytes.size(), 16u + 4u * 128 * 128);
  const auto d = decode_grid(bytes);
  EXPECT_EQ(d.dim_t, 128);
  EXPECT_EQ(d.dim_f, 128);
  EXPECT_EQ(d.preset.id, 0u);
  for (std::size_t i = 0; i < s.grid.size(); ++i) ASSERT_EQ(d.grid[i], static_cast<double>(static_cast<float>(s.grid[i])));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_grid(bad), DomainError);
  bad = bytes;
  bad.pop_back();
  EXPECT_THROW(decode_grid(bad), DomainError);
}
