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

#include <unordered_set>

#include "oracles.hpp"
#include "raddet/phase_code.hpp"
#include "raddet/rng.hpp"
#include "raddet/waveform.hpp"

using namespace raddet;

namespace {

constexpr double kFs = 500e6;

WaveformParams rect(double t_pw, double f_prf, int n_pulse) {
  WaveformParams p;
  p.cls = RadarClass::Rect;
  p.t_pw = t_pw;
  p.f_prf = f_prf;
  p.n_pulse = n_pulse;
  return p;
}

WaveformParams chirp(RadarClass cls, double b, double t, int n, double f_prf = 0) {
  WaveformParams p;
  p.cls = cls;
  p.b_chirp = b;
  p.t_chirp = t;
  p.n_chirp = n;
  p.f_prf = f_prf;
  return p;
}

}  // namespace

// ---- phase codes ---------------------------------------------------------------

TEST(PhaseCode, Barker13Autocorrelation) {
  const auto code = code_generate(CodeFamily::Barker, 13);
  const auto r = oracle::aperiodic_acf(oracle::unit_chips(code.chips));
  EXPECT_NEAR(r[0], 13.0, 1e-12);
  for (std::size_t lag = 1; lag < r.size(); ++lag) EXPECT_LE(r[lag], 1.0 + 1e-12) << "lag " << lag;
}

TEST(PhaseCode, BarkerPeakToSidelobeEqualsLength) {
  for (int n : {5, 7, 11, 13}) {
    const auto r = oracle::aperiodic_acf(oracle::unit_chips(code_generate(CodeFamily::Barker, n).chips));
    const double side = *std::max_element(r.begin() + 1, r.end());
    EXPECT_NEAR(r[0] / side, n, 1e-9) << "n " << n;
  }
}

TEST(PhaseCode, ZadoffChuLengthOne) {
  const auto code = code_generate(CodeFamily::ZadoffChu, 1, 1);
  ASSERT_EQ(code.chips.size(), 1u);
  EXPECT_EQ(code.chips[0], 0.0);
}

TEST(PhaseCode, ZadoffChuIsCazac) {
  for (int n : allowed_chip_counts(CodeFamily::ZadoffChu)) {
    for (int u : zadoff_chu_roots(n)) {
      const auto c = oracle::unit_chips(code_generate(CodeFamily::ZadoffChu, n, u).chips);
      for (const auto& z : c) EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
      const auto r = oracle::periodic_acf(c);
      for (int lag = 1; lag < n; ++lag) EXPECT_LT(r[lag], 1e-9) << "n " << n << " u " << u << " lag " << lag;
    }
  }
}

TEST(PhaseCode, Frank16IsDftMatrix) {
  const auto code = code_generate(CodeFamily::Frank, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double expect = 2 * oracle::pi / 4 * i * j;
      const auto got = std::polar(1.0, code.chips[static_cast<std::size_t>(i * 4 + j)]);
      EXPECT_NEAR(std::abs(got - std::polar(1.0, expect)), 0.0, 1e-12);
    }
  // Row i is the conjugate of DFT basis vector i: its DFT is 4 at bin i.
  for (int i = 0; i < 4; ++i) {
    std::vector<oracle::cd> row;
    for (int j = 0; j < 4; ++j) row.push_back(std::polar(1.0, code.chips[static_cast<std::size_t>(i * 4 + j)]));
    const auto X = oracle::dft(row);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(X[k]), k == i ? 4.0 : 0.0, 1e-9);
  }
}

TEST(PhaseCode, ChipsWrappedAndCounted) {
  for (auto fam : {CodeFamily::Barker, CodeFamily::Frank, CodeFamily::P1, CodeFamily::P2, CodeFamily::P3,
                   CodeFamily::P4, CodeFamily::Px, CodeFamily::ZadoffChu}) {
    for (int n : allowed_chip_counts(fam)) {
      const auto code = code_generate(fam, n);
      ASSERT_EQ(code.chips.size(), static_cast<std::size_t>(n));
      for (double c : code.chips) {
        EXPECT_GE(c, -oracle::pi);
        EXPECT_LT(c, oracle::pi);
      }
      EXPECT_EQ(code.chips, code_generate(fam, n).chips);
    }
  }
}

TEST(PhaseCode, PolyphaseCodesHaveLowSidelobes) {
  // Pulse-compression codes of length N keep aperiodic sidelobes well
  // below the peak; a wrong formula typically gives sidelobes near N.
  for (auto fam : {CodeFamily::Frank, CodeFamily::P1, CodeFamily::P2, CodeFamily::Px, CodeFamily::P3,
                   CodeFamily::P4}) {
    const auto r = oracle::aperiodic_acf(oracle::unit_chips(code_generate(fam, 16).chips));
    const double side = *std::max_element(r.begin() + 1, r.end());
    EXPECT_LT(side, 0.35 * r[0]) << family_name(fam);
  }
}

TEST(PhaseCode, P3P4MatchClosedForm) {
  const int n = 7;
  const auto p3 = code_generate(CodeFamily::P3, n).chips;
  const auto p4 = code_generate(CodeFamily::P4, n).chips;
  for (int k = 0; k < n; ++k) {
    EXPECT_NEAR(std::abs(std::polar(1.0, p3[k]) - std::polar(1.0, oracle::pi * k * k / n)), 0, 1e-12);
    EXPECT_NEAR(std::abs(std::polar(1.0, p4[k]) - std::polar(1.0, oracle::pi * k * k / n - oracle::pi * k)), 0,
                1e-12);
  }
}

TEST(PhaseCode, InvalidLengthNamesAllowedSet) {
  try {
    code_generate(CodeFamily::Barker, 6);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("{5, 7, 11, 13}"), std::string::npos) << e.what();
  }
  EXPECT_THROW(code_generate(CodeFamily::P2, 9), DomainError);
  EXPECT_THROW(code_generate(CodeFamily::ZadoffChu, 9, 3), DomainError);  // gcd(3, 9) = 3
  EXPECT_THROW(code_generate(CodeFamily::ZadoffChu, 4), DomainError);
  EXPECT_THROW(code_generate(CodeFamily::P3, 17), DomainError);
}

// ---- pulsed waveforms ------------------------------------------------------------

TEST(Waveform, RectTwoPulses) {
  const auto buf = synthesize(rect(10e-6, 50e3, 2), kFs);
  ASSERT_EQ(buf.size(), 15000u);
  for (std::size_t i = 0; i < 15000; ++i) {
    const bool on = i < 5000 || i >= 10000;
    if (on)
      ASSERT_NEAR(std::abs(buf.samples[i]), 1.0, 1e-12) << i;
    else
      ASSERT_EQ(buf.samples[i], Sample(0, 0)) << i;
  }
}

TEST(Waveform, RectMidPulseIsOne) {
  const auto buf = synthesize(rect(10e-6, 50e3, 2), kFs);
  EXPECT_EQ(buf.samples[2500], Sample(1, 0));
}

TEST(Waveform, Barker13PiecewiseConstant) {
  WaveformParams p = rect(13e-6, 20e3, 1);
  p.cls = RadarClass::Barker;
  p.phase_code = code_generate(CodeFamily::Barker, 13);
  p.phi = 0.3;
  const auto buf = synthesize(p, kFs);
  ASSERT_EQ(buf.size(), 6500u);
  const std::size_t chip = 500;
  for (std::size_t c = 0; c < 13; ++c) {
    const double ph0 = std::arg(buf.samples[c * chip]);
    const double rel = std::remainder(ph0 - p.phi, oracle::pi);
    EXPECT_NEAR(rel, 0.0, 1e-9) << "chip " << c;
    for (std::size_t i = c * chip; i < (c + 1) * chip; ++i)
      ASSERT_NEAR(std::abs(buf.samples[i] - buf.samples[c * chip]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(buf.samples[c * chip] - std::polar(1.0, p.phase_code->chips[c] + p.phi)), 0, 1e-12);
  }
}

TEST(Waveform, PulseMustFitInPri) {
  EXPECT_THROW(synthesize(rect(20e-6, 50e3, 2), kFs), DomainError);
  EXPECT_THROW(synthesize(rect(20e-6, 60e3, 2), kFs), DomainError);
}

// ---- chirped waveforms ---------------------------------------------------------

TEST(Waveform, FmcwContiguousAndCentred) {
  const auto p = chirp(RadarClass::FMCW, 100e6, 10e-6, 3);
  const auto buf = synthesize(p, kFs);
  ASSERT_EQ(buf.size(), 15000u);
  for (const auto& s : buf.samples) ASSERT_NEAR(std::abs(s), 1.0, 1e-12);
  for (int k = 0; k < 3; ++k) {
    const std::size_t mid = static_cast<std::size_t>(k * 5000 + 2500);
    EXPECT_NEAR(oracle::inst_freq(buf.samples, mid, kFs), 0.0, 0.01 * p.b_chirp) << "chirp " << k;
  }
}

TEST(Waveform, LfmStartsAtOne) {
  const auto buf = synthesize(chirp(RadarClass::LFM, 50e6, 20e-6, 1, 10e3), kFs);
  EXPECT_EQ(buf.samples[0], Sample(1, 0));
}

TEST(Waveform, LfmChirpsAtPri) {
  const auto p = chirp(RadarClass::LFM, 50e6, 20e-6, 3, 25e3);
  const auto buf = synthesize(p, kFs);
  ASSERT_EQ(buf.size(), static_cast<std::size_t>(2 * 20000 + 10000));
  EXPECT_NEAR(std::abs(buf.samples[9999]), 1.0, 1e-12);
  EXPECT_EQ(buf.samples[10000], Sample(0, 0));
  EXPECT_EQ(buf.samples[19999], Sample(0, 0));
  EXPECT_NEAR(std::abs(buf.samples[20000]), 1.0, 1e-12);
}

TEST(Waveform, ChirpSlopeMatches) {
  for (auto cls : {RadarClass::LFM, RadarClass::FMCW}) {
    const auto p = chirp(cls, 60e6, 30e-6, 2, 20e3);
    const auto buf = synthesize(p, kFs);
    std::vector<double> t, f;
    for (std::size_t i = 100; i + 100 < 15000; i += 10) {
      t.push_back(static_cast<double>(i) / kFs);
      f.push_back(oracle::inst_freq(buf.samples, i, kFs));
    }
    const double slope = oracle::ls_slope(t, f);
    EXPECT_NEAR(slope / (p.b_chirp / p.t_chirp), 1.0, 0.01) << class_name(cls);
    EXPECT_NEAR(f.front(), -p.b_chirp / 2, 0.02 * p.b_chirp);
  }
}

TEST(Waveform, ChirpOccupiedBandwidth) {
  const auto buf = synthesize(chirp(RadarClass::LFM, 10e6, 10e-6, 1, 10e3), kFs);
  const double bw = oracle::occupied_bandwidth(buf.samples, kFs, 0.99, 8192);
  EXPECT_NEAR(bw, 10e6, 0.2 * 10e6);
}

TEST(Waveform, ActiveSpansMatchSamples) {
  WaveformParams p = rect(7.3e-6, 33e3, 4);
  const auto buf = synthesize(p, kFs);
  std::int64_t on = 0;
  for (const auto& s : buf.samples) on += std::abs(s) > 0.5;
  std::int64_t span_total = 0;
  for (const auto& s : active_spans(p, kFs)) span_total += s.length();
  EXPECT_EQ(on, span_total);
  EXPECT_EQ(static_cast<std::int64_t>(buf.size()), emission_samples(p, kFs));
}

// ---- seeding -------------------------------------------------------------------

TEST(Rng, FrameSeedDeterministic) { EXPECT_EQ(frame_seed(7, 123), frame_seed(7, 123)); }

TEST(Rng, FrameSeedsDistinctOverScan) {
  for (std::uint64_t s : {0ULL, 1ULL, 0xdeadbeefULL}) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(2'000'000);
    for (std::uint64_t i = 0; i < 1'000'000; ++i) {
      ASSERT_NE(frame_seed(s, i), frame_seed(s, i + 1));
      ASSERT_NE(frame_seed(s, i), frame_seed(s + 1, i));
      ASSERT_TRUE(seen.insert(frame_seed(s, i)).second) << "collision at " << i;
    }
  }
}

TEST(Rng, UniformIntCoversRangeUniformly) {
  Rng rng(5);
  std::array<int, 7> hist{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.uniform_int(3, 9);
    ASSERT_GE(v, 3);
    ASSERT_LE(v, 9);
    ++hist[static_cast<std::size_t>(v - 3)];
  }
  double chi2 = 0;
  for (int h : hist) chi2 += (h - n / 7.0) * (h - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 16.81);  // 1% critical value, 6 dof
}

TEST(Rng, StreamIsReproducible) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, NormalMatchesGaussian) {
  Rng rng(17);
  const int n = 1'000'000;
  std::vector<double> x(n);
  double m1 = 0, m2 = 0, m4 = 0;
  int tail = 0;
  for (auto& v : x) {
    v = rng.normal();
    m1 += v;
    m2 += v * v;
    m4 += v * v * v * v;
    tail += std::abs(v) > 3.6541528853610088;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  EXPECT_NEAR(m1, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4, 3.0, 5 * std::sqrt(96.0 / n));
  const double p_tail = std::erfc(3.6541528853610088 / std::sqrt(2.0));
  EXPECT_NEAR(tail, n * p_tail, 5 * std::sqrt(n * p_tail));
  // Kolmogorov-Smirnov against the normal CDF; 1.63 / sqrt(n) is the 1% level.
  std::sort(x.begin(), x.end());
  double d = 0;
  for (int i = 0; i < n; ++i) {
    const double cdf = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
    d = std::max({d, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
  }
  EXPECT_LT(d, 1.63 / std::sqrt(n));
}
